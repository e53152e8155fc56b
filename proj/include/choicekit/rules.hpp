#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "choicekit/menu.hpp"
#include "choicekit/quadrature.hpp"
#include "choicekit/utility.hpp"

namespace choicekit {

/// Distribution of the additive shocks of an IARU rule. Both are centred so
/// that the density peaks at 0; Gumbel uses F(x) = exp(-exp(-beta x)).
struct ShockSpec {
  enum class Kind { Gaussian, Gumbel };
  Kind kind = Kind::Gaussian;
  double param = 1.0;  // sigma for Gaussian, beta for Gumbel

  static ShockSpec gaussian(double sigma);
  static ShockSpec gumbel(double beta);

  double pdf(double x) const;
  double cdf(double x) const;
  /// Integration window carrying all but ~1e-18 of the mass.
  double lower() const;
  double upper() const;
};

class Rule;
using RulePtr = std::shared_ptr<const Rule>;

/// exp(beta o(a)) / sum; beta may be +-inf (argmax / argmin).
struct MnlRule {
  double beta = 1.0;
};

struct GeneralMnlRule {
  UtilityRepresentation utility;
};

// Choice integrands are smooth with unit-scale peaks, so the relative target is safe.
inline QuadratureOptions iaru_quadrature(double abs_tol = 1e-10) {
  QuadratureOptions q;
  q.abs_tol = abs_tol;
  q.rel_tol = 1e-10;
  return q;
}

struct IaruRule {
  ShockSpec shock;
  QuadratureOptions quadrature = iaru_quadrature();
};

struct UniformRule {};

/// Explicit distributions for particular menus; other menus go to `fallback`.
/// Lookup is by canonical_menu_key, so entry order in the menu is irrelevant.
struct TabularRule {
  std::map<std::string, std::map<std::string, double>> table;  // key -> action id -> p
  RulePtr fallback;

  /// Validates that `probs` covers exactly the menu's actions.
  void add(const Menu& menu, const std::map<std::string, double>& probs);
};

/// base_a * exp(s(a)) renormalised, s(a) in [-delta, delta] drawn by a pure
/// hash of (seed, menu, action).
struct PerturbedRule {
  RulePtr base;
  double delta = 0.0;
  std::uint64_t seed = 0;
};

class Rule {
 public:
  using Variant =
      std::variant<MnlRule, GeneralMnlRule, IaruRule, UniformRule, TabularRule, PerturbedRule>;

  template <class T>
    requires(!std::same_as<std::remove_cvref_t<T>, Rule> && std::constructible_from<Variant, T &&>)
  Rule(T&& r) : v_(std::forward<T>(r)) {}  // NOLINT

  const Variant& variant() const { return v_; }

  static Rule mnl(double beta) { return MnlRule{beta}; }
  static Rule general_mnl(UtilityRepresentation u) { return GeneralMnlRule{std::move(u)}; }
  static Rule iaru(ShockSpec shock, QuadratureOptions q = iaru_quadrature()) { return IaruRule{shock, q}; }
  static Rule probit(double sigma = 1.0) { return iaru(ShockSpec::gaussian(sigma)); }
  static Rule uniform() { return UniformRule{}; }
  static Rule perturbed(Rule base, double delta, std::uint64_t seed);

 private:
  Variant v_;
};

/// Phi(A, o). Throws InputError on a rule/space mismatch, Error when IARU
/// quadrature misses normalisation by 1e-8 or more.
ChoiceDistribution choose(const Rule& rule, const Menu& menu);

/// Order-independent menu identity: space descriptor plus the sorted
/// (action id, outcome rounded to 12 significant digits) pairs.
std::string canonical_menu_key(const Menu& menu);
std::uint64_t canonical_menu_hash(const Menu& menu);

/// The shock s(a) a PerturbedRule applies.
double perturbation_shock(std::uint64_t seed, std::uint64_t menu_hash, const ActionId& action,
                          double delta);

struct ProbeResult {
  bool equal = false;
  double max_deviation = 0.0;
};

/// Compares IARU(Gumbel(beta)) with MNL(mnl_beta) on every menu; `equal` when the
/// largest absolute probability gap is at most tol.
ProbeResult iaru_equals_mnl_probe(double beta, const std::vector<Menu>& menus, double tol);
ProbeResult iaru_equals_mnl_probe(double beta, const std::vector<Menu>& menus, double tol,
                                  double mnl_beta);

}  // namespace choicekit
