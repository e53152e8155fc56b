#pragma once

#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "choicekit/axioms.hpp"
#include "choicekit/extract.hpp"
#include "choicekit/menu.hpp"
#include "choicekit/outcome.hpp"
#include "choicekit/rules.hpp"
#include "choicekit/utility.hpp"

namespace choicekit {

using Json = nlohmann::json;

// Every *_from_json throws InputError on malformed input.

/// Numbers, with "inf", "+inf", "-inf" accepted for infinities.
double number_from_json(const Json& j);
/// Finite values as numbers, infinities as "inf" / "-inf".
Json number_to_json(double x);

/// {"kind": name, "dim": d, "moment_order": n, "alphabet": [..]}; only the
/// fields of the kind are read or written.
OutcomeSpace space_from_json(const Json& j);
Json space_to_json(const OutcomeSpace& space);

Outcome outcome_from_json(const OutcomeSpace& space, const Json& j);
Json outcome_to_json(const Outcome& x);

/// {"kind": space kind, ...parameters}: beta | weights (array or prize map) |
/// gamma1, gamma2 | gammas.
UtilityRepresentation utility_from_json(const Json& j);
Json utility_to_json(const UtilityRepresentation& u);

struct MenuFile {
  Menu menu;
  /// Observed choice probabilities, when the file carries them.
  std::optional<std::map<std::string, double>> probabilities;
};

/// {"space": ..., "actions": [{"id": ..., "outcome": ...}], "probabilities"?: {id: p}}.
/// A probabilities object must name exactly the menu's actions.
MenuFile menu_file_from_json(const Json& j);
Menu menu_from_json(const Json& j);
Json menu_to_json(const Menu& menu);

Rule rule_from_json(const Json& j);
Json rule_to_json(const Rule& rule);

Json report_to_json(const AxiomReport& r);
Json certificate_to_json(const ClosenessCertificate& c);

Json read_json_file(const std::string& path);

}  // namespace choicekit
