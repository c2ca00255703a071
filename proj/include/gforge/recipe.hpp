#pragma once
// Recipe files: a small combinator language that describes infinitary
// derivations as compositions of the named constructors. Infinite trees
// cannot be serialized extensionally, so a recipe stores the construction
// instead. A recipe document is either {"order": N, "build": expr} or a bare
// expression; each expression is an object with an "op" field.
//
// Expressions:
//   {"op":"truth","formula":F[,"budget":N]}           deriveTruth
//   {"op":"em","formula":F}                           deriveExcludedMiddle
//   {"op":"eqaxiom"}                                  deriveEqualityAxiomX
//   {"op":"induction","formula":F,"var":V}            deriveInduction
//   {"op":"prog"}                                     deriveProg (needs order)
//   {"op":"ti"}                                       deriveTI (needs order)
//   {"op":"embed","derivation":D[,"subst":{V:T,..}]}  embedFin of a finite derivation
//   {"op":"weaken","of":E[,"add":[F,..]][,"bound":O][,"cutrank":N]}
//   {"op":"svr","of":E,"from":F,"to":F}               sameValueReplace
//   {"op":"invert","of":E,"formula":F,"index":I}      I: integer or term text
//   {"op":"reduce","neg":E,"pos":E,"formula":F}
//   {"op":"cutelimstep","of":E}
//   {"op":"cutelimfull","of":E}
//   {"op":"assembleti","ti":E,"prog":E,"n":N[,"fit":true]}
//   {"op":"omeganumerals","body":F,"var":V,"premises":"truthInstances"|"emInstances"
//        [,"end":[F,..]][,"bound":O][,"cutrank":N][,"budget":N]}
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "gforge/coded_order.hpp"
#include "gforge/cutelim.hpp"
#include "gforge/error.hpp"
#include "gforge/infinitary.hpp"
#include "gforge/serialize.hpp"
#include "gforge/syntax_io.hpp"

namespace gforge {

struct RecipeResult {
  InfPtr derivation;
  std::shared_ptr<const CodedOrder> order;  // null when the recipe declares none
};

namespace detail {

inline Formula recipeFormula(const Json& j, const char* key) {
  return parseFormula(requireString(j, key));
}

inline InfIndex recipeIndex(const Json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("recipe field '") + key + "' is required");
  const Json& v = j[key];
  if (v.is_number_integer()) return InfIndex{v.get<int>()};
  if (v.is_string()) return InfIndex{parseTerm(v.get<std::string>())};
  throw ParseError(std::string("recipe field '") + key + "' must be an integer or a term");
}

inline InfPtr buildRecipeExpr(const Json& j, const std::shared_ptr<const CodedOrder>& order);

inline InfPtr recipeSub(const Json& j, const char* key,
                        const std::shared_ptr<const CodedOrder>& order) {
  if (!j.contains(key) || !j[key].is_object())
    throw ParseError(std::string("recipe field '") + key + "' must be an expression object");
  return buildRecipeExpr(j[key], order);
}

inline std::shared_ptr<const CodedOrder> requireOrder(
    const std::shared_ptr<const CodedOrder>& order, const std::string& op) {
  if (!order) throw ParseError("op '" + op + "' needs a top-level \"order\" declaration");
  return order;
}

inline InfPtr buildOmegaNumerals(const Json& j) {
  Formula body = recipeFormula(j, "body");
  std::string var = requireString(j, "var");
  std::string kind = requireString(j, "premises");
  std::size_t budget = j.contains("budget") ? j["budget"].get<std::size_t>() : 32;
  Formula allBody = Formula::all(var, body);
  std::function<InfPtr(std::uint64_t)> premFn;
  Sequent end;
  Ordinal bound;
  if (kind == "truthInstances") {
    premFn = [body, var, budget](std::uint64_t n) {
      return deriveTruth(substitute(body, var, numeral(n)), budget);
    };
    end = Sequent{{allBody}};
    bound = fromNat(rank(allBody));
  } else if (kind == "emInstances") {
    Formula exNeg = Formula::ex(var, negate(body));
    premFn = [body, var, exNeg](std::uint64_t n) {
      Formula inst = substitute(body, var, numeral(n));
      InfPtr em = deriveExcludedMiddle(inst);
      return mkDisj(Sequent{{exNeg, inst}}, fromNat(2 * rank(inst) + 1), 0, exNeg,
                    InfIndex{numeral(n)}, [em](const InfIndex&) { return em; });
    };
    end = Sequent{{exNeg, allBody}};
    bound = fromNat(2 * rank(allBody));
  } else {
    throw ParseError("premises must be \"truthInstances\" or \"emInstances\"");
  }
  if (j.contains("end")) {
    std::vector<Formula> fs;
    for (const Json& s : j["end"]) fs.push_back(parseFormula(s.get<std::string>()));
    end = Sequent{fs};
  }
  if (j.contains("bound")) bound = parseOrdinal(requireString(j, "bound"));
  int cutRank = j.contains("cutrank") ? j["cutrank"].get<int>() : 0;
  return omegaRuleNumerals(premFn, end, allBody, bound, cutRank);
}

inline InfPtr buildRecipeExpr(const Json& j, const std::shared_ptr<const CodedOrder>& order) {
  if (!j.is_object()) throw ParseError("recipe expression must be an object");
  std::string op = requireString(j, "op");
  if (op == "truth") {
    std::size_t budget = j.contains("budget") ? j["budget"].get<std::size_t>() : 32;
    return deriveTruth(recipeFormula(j, "formula"), budget);
  }
  if (op == "em") return deriveExcludedMiddle(recipeFormula(j, "formula"));
  if (op == "eqaxiom") return deriveEqualityAxiomX();
  if (op == "induction")
    return deriveInduction(recipeFormula(j, "formula"), requireString(j, "var"));
  if (op == "prog") return deriveProg(requireOrder(order, op));
  if (op == "ti") return deriveTI(requireOrder(order, op));
  if (op == "embed") {
    if (!j.contains("derivation"))
      throw ParseError("op 'embed' needs a \"derivation\" field (finite derivation JSON)");
    FinPtr fin = finFromJson(j["derivation"]);
    VarSubst subst;
    if (j.contains("subst")) {
      if (!j["subst"].is_object()) throw ParseError("embed \"subst\" must be an object");
      for (auto it = j["subst"].begin(); it != j["subst"].end(); ++it)
        subst[it.key()] = parseTerm(it.value().get<std::string>());
    }
    return embedFin(fin, subst);
  }
  if (op == "weaken") {
    InfPtr d = recipeSub(j, "of", order);
    Sequent extra;
    if (j.contains("add")) {
      std::vector<Formula> fs;
      for (const Json& s : j["add"]) fs.push_back(parseFormula(s.get<std::string>()));
      extra = Sequent{fs};
    }
    Ordinal b = j.contains("bound") ? parseOrdinal(requireString(j, "bound")) : d->bound();
    int c = j.contains("cutrank") ? j["cutrank"].get<int>() : d->cutRank();
    return weaken(d, extra, b, c);
  }
  if (op == "svr")
    return sameValueReplace(recipeSub(j, "of", order), recipeFormula(j, "from"),
                            recipeFormula(j, "to"));
  if (op == "invert")
    return invert(recipeSub(j, "of", order), recipeFormula(j, "formula"),
                  recipeIndex(j, "index"));
  if (op == "reduce")
    return reduce(recipeSub(j, "neg", order), recipeSub(j, "pos", order),
                  recipeFormula(j, "formula"));
  if (op == "cutelimstep") return cutElimStep(recipeSub(j, "of", order));
  if (op == "cutelimfull") return cutElimFull(recipeSub(j, "of", order));
  if (op == "assembleti") {
    InfPtr ti = recipeSub(j, "ti", order);
    InfPtr prog = recipeSub(j, "prog", order);
    if (!j.contains("n") || !j["n"].is_number_unsigned())
      throw ParseError("op 'assembleti' needs a numeral field \"n\"");
    if (j.contains("fit") && j["fit"].get<bool>() && !ordLeq(prog->bound(), ti->bound()))
      ti = weaken(ti, Sequent{}, prog->bound(), ti->cutRank());
    return assembleTI(ti, prog, j["n"].get<std::uint64_t>());
  }
  if (op == "omeganumerals") return buildOmegaNumerals(j);
  throw ParseError("unknown recipe op '" + op + "'");
}

}  // namespace detail

inline RecipeResult buildRecipe(const Json& doc) {
  RecipeResult result;
  const Json* expr = &doc;
  if (doc.is_object() && doc.contains("build")) {
    if (doc.contains("order")) {
      if (!doc["order"].is_number_unsigned())
        throw ParseError("recipe \"order\" must be a nonnegative size");
      result.order =
          std::make_shared<const CodedOrder>(codedOrderOfSize(doc["order"].get<std::size_t>()));
    }
    expr = &doc["build"];
  }
  result.derivation = detail::buildRecipeExpr(*expr, result.order);
  return result;
}

inline RecipeResult readRecipe(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return buildRecipe(j);
}

}  // namespace gforge
