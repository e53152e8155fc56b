#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "choicekit/menu.hpp"
#include "choicekit/rules.hpp"

namespace choicekit {

enum class Axiom { Neutrality, Decomposability, Positivity, Continuity, StrongNeutrality };

std::string to_string(Axiom a);
Axiom axiom_from_string(const std::string& name);

/// Where an axiom failed: the menu (a hash, or a file name once the CLI has
/// relabelled it), the actions involved and the observed ratio.
struct Witness {
  std::string menu;
  std::vector<std::string> actions;
  double ratio = 0.0;
};

struct AxiomReport {
  Axiom axiom = Axiom::Neutrality;
  bool satisfied_at_tol = true;
  double min_epsilon = 0.0;  // may be +inf
  std::vector<Witness> witnesses;  // worst first; empty when satisfied
  std::size_t instances_checked = 1;
  bool probe = false;  // continuity: can only falsify
};

/// a/b - 1 with 0/0 -> 0 and x/0 -> +inf.
double ratio_excess(double a, double b);
/// max(a/b, b/a) - 1 with the same conventions.
double symmetric_ratio_excess(double a, double b);

/// Hex form of canonical_menu_hash, the default witness menu label.
std::string menu_label(const Menu& menu);

/// max over equal-outcome pairs of p_a / p_a' - 1.
AxiomReport neutrality_epsilon(const Menu& menu, const ChoiceDistribution& p, double tol = 1e-9);
AxiomReport neutrality_epsilon(const Rule& rule, const Menu& menu, double tol = 1e-9);

/// max over (a1, a2) of max(joint / (p1 p2), (p1 p2) / joint) - 1.
AxiomReport decomposability_epsilon(const Rule& rule, const Menu& m1, const Menu& m2,
                                    double tol = 1e-9);

/// min_epsilon is 0 when every probability is positive, +inf otherwise.
AxiomReport positivity_check(const Rule& rule, const Menu& menu);

/// Moves o(action) up by each step and reports the largest probability change
/// at the smallest step. Flags a discontinuity when the change at the smallest
/// step is still more than half the change at the largest one although the
/// steps shrank at least 100-fold. Real scalar and vector menus only.
AxiomReport continuity_probe(const Rule& rule, const Menu& menu, const ActionId& action,
                             const std::vector<double>& steps = {1e-2, 1e-4, 1e-6});

/// Rule-level estimates used to test 1 + e_sn <= (1 + e_n)(1 + e_d)^2.
struct LemmaInputs {
  double eps_neut = 0.0;
  double eps_decomp = 0.0;
};

struct StrongNeutralityReport {
  AxiomReport report;
  std::optional<bool> lemma_bound_holds;
};

/// Largest probability ratio between matched actions of equivalent menus.
/// Throws InputError when the menus are not equivalent.
StrongNeutralityReport strong_neutrality_epsilon(const Rule& rule, const Menu& m1, const Menu& m2,
                                                 double tol = 1e-9,
                                                 std::optional<LemmaInputs> lemma = std::nullopt);

struct IdentityCheck {
  bool holds = false;
  double discrepancy = 0.0;  // |ln lhs - ln rhs|, +inf when exactly one side is 0
  long long n = 0;           // k * (o(a) - o(a2))
  long long k = 1;           // denominator scale
};

/// Phi_a * p0^n == Phi_a2 * p1^n with n = o(a) - o(a2), (p0, p1) the rule on
/// {b0: 0, b1: 1}. Outcomes must be integers and o(a) > o(a2).
IdentityCheck cross_menu_identity_check(const Rule& rule, const Menu& menu, const ActionId& a,
                                        const ActionId& a2, double tol);

/// Smallest k with k * x integral (within 1e-9) for every outcome; throws
/// InputError when no k up to max_denominator works.
long long common_denominator(const Menu& menu, long long max_denominator = 1000000);

/// Rational outcomes: runs the identity for the rule x -> Phi(A, x / k) on the
/// menu k * o, so p0, p1 come from {0, 1/k}.
IdentityCheck cross_menu_identity_check_rational(const Rule& rule, const Menu& menu,
                                                 const ActionId& a, const ActionId& a2, double tol);

/// Corpus aggregation: largest epsilon, summed instance counts, witnesses
/// merged worst first (ties by menu label, then actions).
AxiomReport merge_reports(const std::vector<AxiomReport>& reports);

}  // namespace choicekit
