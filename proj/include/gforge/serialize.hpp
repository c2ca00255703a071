#pragma once
// JSON serialization for finite derivations. The format is a stable
// tree-structured document: rule tag, conclusion as printed formulas, the
// rule's discriminating fields, and the premise list in order. Formulas and
// terms round-trip through the canonical grammar.
#include <string>
#include <vector>

#include <json.hpp>

#include "gforge/error.hpp"
#include "gforge/finitary.hpp"
#include "gforge/syntax_io.hpp"

namespace gforge {

using Json = nlohmann::ordered_json;

inline Json finToJson(const FinPtr& d) {
  Json j;
  j["rule"] = finRuleName(d->rule());
  Json conc = Json::array();
  for (const Formula& f : d->conclusion()) conc.push_back(printFormula(f));
  j["conclusion"] = conc;
  switch (d->rule()) {
    case FinRule::Axiom: break;
    case FinRule::AndIntro:
    case FinRule::Cut:
      j["principal"] = printFormula(*d->principal());
      break;
    case FinRule::OrIntro:
      j["principal"] = printFormula(*d->principal());
      j["side"] = d->side();
      break;
    case FinRule::AllIntro:
      j["principal"] = printFormula(*d->principal());
      j["eigen"] = d->eigen();
      break;
    case FinRule::ExIntro:
      j["principal"] = printFormula(*d->principal());
      j["witness"] = printTerm(*d->witness());
      break;
  }
  Json prems = Json::array();
  for (const FinPtr& p : d->premises()) prems.push_back(finToJson(p));
  j["premises"] = prems;
  return j;
}

namespace detail {

inline std::string requireString(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string())
    throw ParseError(std::string("derivation field '") + key + "' must be a string");
  return j[key].get<std::string>();
}

}  // namespace detail

inline FinPtr finFromJson(const Json& j) {
  if (!j.is_object()) throw ParseError("derivation node must be an object");
  std::string ruleName = detail::requireString(j, "rule");
  if (!j.contains("conclusion") || !j["conclusion"].is_array())
    throw ParseError("derivation field 'conclusion' must be an array of formulas");
  std::vector<Formula> conc;
  for (const Json& s : j["conclusion"]) {
    if (!s.is_string()) throw ParseError("conclusion entries must be formula strings");
    conc.push_back(parseFormula(s.get<std::string>()));
  }
  Sequent seq{conc};
  std::vector<FinPtr> prems;
  if (j.contains("premises")) {
    if (!j["premises"].is_array()) throw ParseError("derivation field 'premises' must be an array");
    for (const Json& p : j["premises"]) prems.push_back(finFromJson(p));
  }
  auto wantPremises = [&](std::size_t n) {
    if (prems.size() != n)
      throw ParseError("rule " + ruleName + " takes " + std::to_string(n) + " premises, got " +
                       std::to_string(prems.size()));
  };
  if (ruleName == "Axiom") {
    wantPremises(0);
    return finAxiom(seq);
  }
  if (ruleName == "AndIntro") {
    wantPremises(2);
    return finAndIntro(seq, parseFormula(detail::requireString(j, "principal")), prems[0],
                       prems[1]);
  }
  if (ruleName == "OrIntro") {
    wantPremises(1);
    if (!j.contains("side") || !j["side"].is_number_integer())
      throw ParseError("derivation field 'side' must be 0 or 1");
    int side = j["side"].get<int>();
    if (side != 0 && side != 1) throw ParseError("derivation field 'side' must be 0 or 1");
    return finOrIntro(seq, parseFormula(detail::requireString(j, "principal")), side, prems[0]);
  }
  if (ruleName == "AllIntro") {
    wantPremises(1);
    return finAllIntro(seq, parseFormula(detail::requireString(j, "principal")),
                       detail::requireString(j, "eigen"), prems[0]);
  }
  if (ruleName == "ExIntro") {
    wantPremises(1);
    return finExIntro(seq, parseFormula(detail::requireString(j, "principal")),
                      parseTerm(detail::requireString(j, "witness")), prems[0]);
  }
  if (ruleName == "Cut") {
    wantPremises(2);
    return finCut(seq, parseFormula(detail::requireString(j, "principal")), prems[0], prems[1]);
  }
  throw ParseError("unknown rule tag '" + ruleName + "'");
}

inline std::string writeFinDerivation(const FinPtr& d) { return finToJson(d).dump(2) + "\n"; }

inline FinPtr readFinDerivation(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return finFromJson(j);
}

}  // namespace gforge
