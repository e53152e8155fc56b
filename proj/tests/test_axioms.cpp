#include <doctest.h>

#include <cmath>
#include <limits>

#include "choicekit/axioms.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace choicekit;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const Menu& worked_menu() {
  static const Menu m = Menu::scalar({{"a1", -17}, {"a2", -17}, {"a3", 42}});
  return m;
}

Rule table_rule(const Menu& m, std::map<std::string, double> p) {
  TabularRule t;
  t.add(m, p);
  t.fallback = std::make_shared<const Rule>(Rule::uniform());
  return t;
}

// Product of per-coordinate probabilities for an n-fold power action.
double product_prob(const ActionId& id, const std::map<std::string, double>& base) {
  if (!id.is_pair()) return base.at(id.label());
  return product_prob(id.first(), base) * product_prob(id.second(), base);
}

}  // namespace

TEST_CASE("ratio conventions") {
  CHECK(ratio_excess(0, 0) == 0);
  CHECK(ratio_excess(0.5, 0) == kInf);
  CHECK(ratio_excess(0, 0.5) == -1);
  CHECK(symmetric_ratio_excess(0, 0.5) == kInf);
  CHECK(symmetric_ratio_excess(0.6, 0.4) == doctest::Approx(0.5));
  CHECK(symmetric_ratio_excess(0.4, 0.6) == doctest::Approx(0.5));
}

TEST_CASE("neutrality examples") {
  const auto r = neutrality_epsilon(Rule::mnl(1), worked_menu());
  CHECK(r.min_epsilon == 0);
  CHECK(r.satisfied_at_tol);
  CHECK(r.witnesses.empty());

  const auto rp = neutrality_epsilon(Rule::perturbed(Rule::mnl(1), 0.1, 1), worked_menu());
  CHECK(rp.min_epsilon <= std::exp(0.2) - 1);
  CHECK(rp.min_epsilon > 0);

  const Menu two = Menu::scalar({{"a", 0}, {"b", 0}});
  const auto rt = neutrality_epsilon(table_rule(two, {{"a", 0.6}, {"b", 0.4}}), two);
  CHECK(rt.min_epsilon == doctest::Approx(0.5));
  CHECK_FALSE(rt.satisfied_at_tol);
  REQUIRE(rt.witnesses.size() == 1);
  CHECK(rt.witnesses[0].actions == std::vector<std::string>{"a", "b"});

  const auto rz = neutrality_epsilon(table_rule(two, {{"a", 1}, {"b", 0}}), two);
  CHECK(rz.min_epsilon == kInf);
}

TEST_CASE("neutrality uses the space equality tolerance") {
  // 0.1 + 0.2 and 0.3 count as equal outcomes.
  const Menu m = Menu::scalar({{"a", 0.1 + 0.2}, {"b", 0.3}});
  CHECK(neutrality_epsilon(table_rule(m, {{"a", 0.7}, {"b", 0.3}}), m).min_epsilon > 1);
  const Menu far = Menu::scalar({{"a", 0.3}, {"b", 0.3 + 1e-6}});
  CHECK(neutrality_epsilon(table_rule(far, {{"a", 0.7}, {"b", 0.3}}), far).min_epsilon == 0);
}

TEST_CASE("decomposability examples") {
  const Menu b = unit_binary_menu();
  CHECK(decomposability_epsilon(Rule::mnl(1.3), b, worked_menu()).min_epsilon <= 1e-10);

  const auto r = decomposability_epsilon(Rule::probit(), b, b);
  // Oracle: closed-form binary probability and the trapezoid square value.
  const double p1 = oracle::probit_pair(1, 0, 1);
  const double p11 = oracle::probit_choice({0, 1, 1, 2}, 3);
  CHECK(r.min_epsilon >= p11 / (p1 * p1) - 1 - 1e-9);
  CHECK(r.min_epsilon >= 0.617 / 0.5776 - 1);
  CHECK_FALSE(r.satisfied_at_tol);
  bool saw_b1b1 = false;
  for (const auto& w : r.witnesses)
    if (w.actions[0] == "(b1,b1)") {
      saw_b1b1 = true;
      CHECK(w.ratio == doctest::Approx(p11 / (p1 * p1) - 1).epsilon(1e-8));
    }
  CHECK(saw_b1b1);
  // The worst cell is (b0,b0): both shocks must overturn a unit gap.
  CHECK(r.witnesses.front().actions[0] == "(b0,b0)");
  const double p00 = oracle::probit_choice({0, 1, 1, 2}, 0);
  CHECK(r.min_epsilon == doctest::Approx((1 - p1) * (1 - p1) / p00 - 1).epsilon(1e-8));

  CHECK(decomposability_epsilon(Rule::uniform(), Menu::scalar({{"a", 0}}), Menu::scalar({{"p", 0}, {"q", 1}}))
            .min_epsilon == 0);
}

TEST_CASE("probit violation is stable across quadrature tolerances") {
  for (double tol : {1e-8, 1e-9, 1e-10, 1e-11, 1e-12}) {
    const QuadratureOptions q = iaru_quadrature(tol);
    const Rule r = Rule::iaru(ShockSpec::gaussian(1), q);
    CHECK(decomposability_epsilon(r, unit_binary_menu(), unit_binary_menu()).min_epsilon >= 0.06);
  }
}

TEST_CASE("positivity examples") {
  gen::Gen g(41);
  CHECK(positivity_check(Rule::mnl(5), g.scalar_menu(6)).satisfied_at_tol);
  const auto r = positivity_check(Rule::mnl(kInf), Menu::scalar({{"a", 0}, {"b", 1}}));
  CHECK_FALSE(r.satisfied_at_tol);
  CHECK(r.min_epsilon == kInf);
  REQUIRE(r.witnesses.size() == 1);
  CHECK(r.witnesses[0].actions == std::vector<std::string>{"a"});
  CHECK(positivity_check(Rule::uniform(), g.scalar_menu(3)).min_epsilon == 0);
}

TEST_CASE("continuity probe examples") {
  const Menu m = Menu::scalar({{"a", 0}, {"b", 0}});
  const auto r = continuity_probe(Rule::mnl(1), m, ActionId("a"));
  CHECK(r.satisfied_at_tol);
  CHECK(r.probe);
  CHECK(r.min_epsilon == doctest::Approx(0.25e-6).epsilon(1e-3));  // derivative p(1-p) = 1/4

  const auto d = continuity_probe(Rule::mnl(kInf), m, ActionId("b"));
  CHECK_FALSE(d.satisfied_at_tol);
  CHECK(d.min_epsilon == doctest::Approx(0.5));
  CHECK(d.witnesses.size() == 1);

  const auto u = continuity_probe(Rule::uniform(), m, ActionId("a"));
  CHECK(u.satisfied_at_tol);
  CHECK(u.min_epsilon == 0);

  const Menu v(OutcomeSpace::real_vector(2), {{ActionId("a"), Outcome::vector({0, 1})},
                                              {ActionId("b"), Outcome::vector({1, 0})}});
  CHECK(continuity_probe(Rule::general_mnl(WeightedSumUtility{{1, 1}}), v, ActionId("a")).satisfied_at_tol);
  CHECK_FALSE(continuity_probe(Rule::general_mnl(WeightedSumUtility{{1, 1}}), v, ActionId("a")).min_epsilon == 0);

  CHECK_THROWS_AS(continuity_probe(Rule::mnl(1), m, ActionId("a"), {1e-2, 1e-2}), InputError);
  CHECK_THROWS_AS(continuity_probe(Rule::mnl(1), m, ActionId("a"), {1e-2, 1e-12}), InputError);
  CHECK_THROWS_AS(continuity_probe(Rule::mnl(1), m, ActionId("z")), InputError);
  const Menu s(OutcomeSpace::mean_stddev(), {{ActionId("a"), Outcome::mean_stddev(0, 1)}});
  CHECK_THROWS_AS(continuity_probe(Rule::uniform(), s, ActionId("a")), InputError);
}

TEST_CASE("strong neutrality examples") {
  const Menu m = worked_menu();
  const Menu copy = Menu::scalar({{"x", 42}, {"y", -17}, {"z", -17}});
  CHECK(strong_neutrality_epsilon(Rule::mnl(1), m, copy).report.min_epsilon <= 1e-12);

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const double delta = 0.05 * static_cast<double>(seed);
    const auto r = strong_neutrality_epsilon(Rule::perturbed(Rule::mnl(1), delta, seed), m, copy);
    // the two menus draw independent shocks
    CHECK(r.report.min_epsilon <= std::exp(4 * delta) - 1);
  }

  TabularRule t;
  const Menu m1 = Menu::scalar({{"a", 0}, {"b", 1}});
  const Menu m2 = Menu::scalar({{"x", 0}, {"y", 1}});
  t.add(m1, {{"a", 0.12}, {"b", 0.88}});
  t.add(m2, {{"x", 0.10}, {"y", 0.90}});
  const auto r = strong_neutrality_epsilon(Rule(t), m1, m2);
  CHECK(r.report.min_epsilon == doctest::Approx(0.2));
  CHECK(r.report.witnesses.front().actions == std::vector<std::string>{"a", "x"});
  CHECK_FALSE(r.lemma_bound_holds.has_value());

  CHECK_THROWS_AS(strong_neutrality_epsilon(Rule::mnl(1), m1, Menu::scalar({{"x", 0}, {"y", 2}})), InputError);
}

TEST_CASE("strong neutrality lemma bound on perturbed rules") {
  // The rule-level constants of Perturbed(MNL, d): neutrality e^{2d} - 1 and
  // decomposability e^{6d} - 1 (each normaliser moves by at most e^{+-d}).
  const Menu m = worked_menu();
  const Menu copy = Menu::scalar({{"x", 42}, {"y", -17}, {"z", -17}});
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const double d = 0.2;
    const auto r = strong_neutrality_epsilon(Rule::perturbed(Rule::mnl(0.3), d, seed), m, copy, 1e-9,
                                             LemmaInputs{std::exp(2 * d) - 1, std::exp(6 * d) - 1});
    REQUIRE(r.lemma_bound_holds.has_value());
    CHECK(*r.lemma_bound_holds);
  }
  const auto bad = strong_neutrality_epsilon(Rule::perturbed(Rule::mnl(0.3), 0.5, 3), m, copy, 1e-9,
                                             LemmaInputs{0.0, 0.0});
  CHECK_FALSE(*bad.lemma_bound_holds);
}

TEST_CASE("cross-menu identity") {
  const auto r = cross_menu_identity_check(Rule::mnl(1), worked_menu(), ActionId("a3"), ActionId("a2"), 1e-9);
  CHECK(r.holds);
  CHECK(r.n == 59);
  CHECK(cross_menu_identity_check(Rule::mnl(0), worked_menu(), ActionId("a3"), ActionId("a1"), 1e-12).holds);

  const Menu m = Menu::scalar({{"a", 0}, {"b", 2}});
  const auto p = cross_menu_identity_check(Rule::probit(), m, ActionId("b"), ActionId("a"), 1e-3);
  CHECK_FALSE(p.holds);
  // Oracle: Phi(b) p0^2 vs Phi(a) p1^2 with closed-form binary probabilities.
  const double pb = oracle::probit_pair(2, 0, 1), p1 = oracle::probit_pair(1, 0, 1);
  const double expected = std::abs(std::log(pb * (1 - p1) * (1 - p1)) - std::log((1 - pb) * p1 * p1));
  CHECK(p.discrepancy == doctest::Approx(expected).epsilon(1e-8));
  CHECK(p.discrepancy > 1e-3);

  CHECK_THROWS_AS(cross_menu_identity_check(Rule::mnl(1), m, ActionId("a"), ActionId("b"), 1e-9), InputError);
  CHECK_THROWS_AS(cross_menu_identity_check(Rule::mnl(1), Menu::scalar({{"a", 0.5}, {"b", 0}}), ActionId("a"),
                                            ActionId("b"), 1e-9),
                  InputError);
  // Zero probabilities: MNL(+inf) puts p0 = 0, and Phi_a2 = 0 on the other side.
  CHECK(cross_menu_identity_check(Rule::mnl(kInf), m, ActionId("b"), ActionId("a"), 1e-9).holds);
}

TEST_CASE("rational outcomes go through denominator scaling") {
  const Menu m = Menu::scalar({{"a", 0.5}, {"b", -1.0 / 3.0}, {"c", 0.25}});
  CHECK(common_denominator(m) == 12);
  const auto r = cross_menu_identity_check_rational(Rule::mnl(1.7), m, ActionId("a"), ActionId("b"), 1e-9);
  CHECK(r.k == 12);
  CHECK(r.n == 10);
  CHECK(r.holds);
  CHECK_FALSE(cross_menu_identity_check_rational(Rule::probit(), m, ActionId("a"), ActionId("b"), 1e-3).holds);
  CHECK_THROWS_AS(common_denominator(Menu::scalar({{"a", std::sqrt(2.0)}}), 1000), InputError);
}

TEST_CASE("property: mnl satisfies every axiom on random menus") {
  gen::Gen g(42);
  for (int t = 0; t < 40; ++t) {
    const Rule r = Rule::mnl(g.real(-3, 3));
    const Menu m1 = g.scalar_menu(g.integer(1, 5), "a", true);
    const Menu m2 = g.scalar_menu(g.integer(1, 5), "b", true);
    CHECK(neutrality_epsilon(r, m1).min_epsilon <= 1e-10);
    CHECK(decomposability_epsilon(r, m1, m2).min_epsilon <= 1e-10);
    CHECK(positivity_check(r, m1).satisfied_at_tol);
    CHECK(continuity_probe(r, m1, m1[0].action).satisfied_at_tol);
  }
}

TEST_CASE("property: decomposable rules shrink neutrality violations like 1/n") {
  // Decomposable on the powers of M: Phi(M^k) is the coordinate product. With
  // base ratio p_a / p_b = r, the diagonal pair of M^k has ratio r^k.
  const Menu m = Menu::scalar({{"a", 0}, {"b", 0}, {"c", 1}});
  const double eps = 0.5;
  for (int n = 1; n <= 6; ++n) {
    for (double scale : {1.0, 1.01}) {
      const double r = std::pow(1 + eps, 1.0 / n) * scale;
      const std::map<std::string, double> base{{"a", 0.4 * r / (1 + r)}, {"b", 0.4 / (1 + r)}, {"c", 0.6}};
      TabularRule t;
      for (int k = 1; k <= n; ++k) {
        const Menu pk = power(m, k);
        std::map<std::string, double> probs;
        for (const auto& e : pk.entries()) probs[e.action.str()] = product_prob(e.action, base);
        t.add(pk, probs);
      }
      const Rule rule = t;
      double worst_power = 0;
      for (int k = 1; k <= n; ++k)
        worst_power = std::max(worst_power, neutrality_epsilon(rule, power(m, k)).min_epsilon);
      const double base_eps = neutrality_epsilon(rule, m).min_epsilon;
      if (scale == 1.0) {
        CHECK(worst_power <= eps + 1e-9);
        CHECK(std::log1p(base_eps) <= std::log1p(eps) / n + 1e-12);
      } else {
        CHECK(worst_power > eps);
      }
    }
  }
}

TEST_CASE("property: perturbed neutrality respects the reduced bound") {
  gen::Gen g(43);
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const double delta = g.real(0.01, 0.3);
    const Rule r = Rule::perturbed(Rule::mnl(g.real(-2, 2)), delta, seed);
    const Menu m = Menu::scalar({{"a", 1}, {"b", 1}, {"c", -1}, {"d", 2}});
    double eps_d = 0;
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; i + j <= 4; ++j)
        eps_d = std::max(eps_d, decomposability_epsilon(r, power(m, i), power(m, j)).min_epsilon);
    const double declared = std::exp(2 * delta) - 1;
    const double measured = neutrality_epsilon(r, m).min_epsilon;
    CHECK(measured <= std::min(declared, 2 * eps_d + eps_d * eps_d) + 1e-12);
  }
}

TEST_CASE("merge keeps the worst report") {
  AxiomReport a, b;
  a.axiom = b.axiom = Axiom::Neutrality;
  a.min_epsilon = 0.1;
  a.satisfied_at_tol = false;
  a.witnesses = {{"m2", {"x"}, 0.1}};
  b.min_epsilon = 0.3;
  b.satisfied_at_tol = false;
  b.witnesses = {{"m1", {"y"}, 0.3}, {"m0", {"z"}, 0.1}};
  const auto m = merge_reports({a, b});
  CHECK(m.min_epsilon == 0.3);
  CHECK(m.instances_checked == 2);
  CHECK_FALSE(m.satisfied_at_tol);
  REQUIRE(m.witnesses.size() == 3);
  CHECK(m.witnesses[0].menu == "m1");
  CHECK(m.witnesses[1].menu == "m0");  // ties broken by menu label
  CHECK(m.witnesses[2].menu == "m2");
}

TEST_CASE("axiom names") {
  for (Axiom a : {Axiom::Neutrality, Axiom::Decomposability, Axiom::Positivity, Axiom::Continuity,
                  Axiom::StrongNeutrality})
    CHECK(axiom_from_string(to_string(a)) == a);
  CHECK_THROWS_AS(axiom_from_string("iia"), InputError);
}
