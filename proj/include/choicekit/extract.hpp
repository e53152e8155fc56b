#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "choicekit/menu.hpp"
#include "choicekit/rules.hpp"
#include "choicekit/utility.hpp"

namespace choicekit {

/// ln(p1 / p0) on {b0: 0, b1: 1}; +inf when p0 = 0, -inf when p1 = 0.
double extract_beta(const Rule& rule);

/// beta for rational menus with denominator k: k * ln(p1 / p0) on {b0: 0, b1: 1/k}.
double extract_beta_scaled(const Rule& rule, long long k);

/// ln(p_x / p_e) on the probe menu {e: identity, x: x}. Throws
/// Error("rule not positive at probe") when either probability is 0.
double extract_utility(const Rule& rule, const OutcomeSpace& space, const Outcome& x);

/// The probe outcomes used to fit a representation of `space`, one per parameter.
std::vector<Outcome> fit_probes(const OutcomeSpace& space);

struct FitResult {
  UtilityRepresentation utility = LinearUtility{};
  double condition_number = 1.0;  // of the probe feature matrix
};

/// Solves features(probe_i) . params = extract_utility(probe_i). Throws Error
/// when the probe matrix has condition number above 1e12.
FitResult fit_utility_representation(const Rule& rule, const OutcomeSpace& space);

struct UpsilonEstimate {
  ChoiceDistribution distribution;
  int n_used = 1;
  std::optional<double> bound;  // (1 + eps_decomp)^(1/n) - 1 when eps_decomp is given
  std::vector<std::vector<double>> history;  // renormalised estimates for n = 1..n_used
};

/// nth root of the diagonal probabilities of power(menu, n_max), renormalised.
/// Throws InputError when |menu|^n_max exceeds 10^6.
UpsilonEstimate upsilon(const Rule& rule, const Menu& menu, int n_max,
                        std::optional<double> eps_decomp = std::nullopt, bool keep_history = false);

struct MenuShocks {
  std::string menu_id;
  std::vector<ActionId> actions;  // menu entry order
  std::vector<double> shocks;
};

struct ClosenessCertificate {
  UtilityRepresentation utility = LinearUtility{};
  double delta = 0.0;
  std::vector<MenuShocks> menus;
  std::size_t corpus_size = 0;
};

/// Residuals r = ln Phi - u(o), shocks centred on the midpoint of their range.
/// `ids` labels the menus in the output (default: canonical hash). Re-checks
/// that softmax(u(o) + s) reproduces Phi within 1e-10 before returning.
ClosenessCertificate certify_closeness(const Rule& rule, const std::vector<Menu>& corpus,
                                       const UtilityRepresentation& u,
                                       const std::vector<std::string>& ids = {});

/// Moves the parameters of `start` to reduce the certificate delta on the
/// corpus. delta is convex in the parameters; one-parameter spaces are solved
/// by golden section, larger ones by cycling golden-section coordinate steps.
UtilityRepresentation refine_for_closeness(const Rule& rule, const std::vector<Menu>& corpus,
                                           const UtilityRepresentation& start);

struct UlamBound {
  double eps_neut_reduced = 0.0;  // min(eps_neut, 2 eps_d + eps_d^2)
  double delta_theorem5 = 0.0;    // 2 eps_d + eps'_n + d(4 eps_d + eps'_n)
  double delta_banach = 0.0;      // same with d = identity
};

/// Throws InputError for negative inputs or d(0) != 0.
UlamBound ulam_bound(double eps_neut, double eps_decomp,
                     const std::function<double(double)>& stability);

}  // namespace choicekit
