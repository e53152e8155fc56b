#include <doctest.h>

#include <algorithm>
#include <random>

#include "choicekit/menu.hpp"
#include "generators.hpp"

using namespace choicekit;

namespace {

std::vector<double> scalar_outcomes(const Menu& m) {
  std::vector<double> out;
  for (const auto& e : m.entries()) out.push_back(e.outcome.as_scalar());
  return out;
}

}  // namespace

TEST_CASE("action ids serialise injectively and parse back") {
  const ActionId a("a"), b("b");
  const ActionId ab = ActionId::pair(a, b);
  CHECK(ab.str() == "(a,b)");
  CHECK(ActionId::pair(ab, a).str() == "((a,b),a)");
  CHECK(ActionId::parse("((a,b),a)") == ActionId::pair(ab, a));
  CHECK(ActionId::parse("(a,(b,a))") != ActionId::pair(ab, a));
  CHECK(ActionId::parse("x") == ActionId("x"));
  CHECK_THROWS_AS(ActionId("a,b"), InputError);
  CHECK_THROWS_AS(ActionId(""), InputError);
  CHECK_THROWS_AS(ActionId::parse("(a,b"), InputError);
  CHECK_THROWS_AS(ActionId::parse("(a,b))"), InputError);
  CHECK(ab.first() == a);
  CHECK(ab.second() == b);
  CHECK(ab.hash() == ActionId::parse("(a,b)").hash());
  CHECK(ab.hash() != ActionId::parse("(b,a)").hash());
}

TEST_CASE("menu validation") {
  CHECK_THROWS_AS(Menu(OutcomeSpace::real_scalar(), {}), InputError);
  CHECK_THROWS_AS(Menu::scalar({{"a", 0}, {"a", 1}}), InputError);
  CHECK_THROWS_AS(Menu(OutcomeSpace::real_scalar(), {{ActionId("a"), Outcome::vector({1})}}), InputError);
  CHECK_THROWS_AS(Menu(OutcomeSpace::real_vector(2), {{ActionId("a"), Outcome::vector({1})}}), InputError);
  CHECK_THROWS_AS(Menu(OutcomeSpace::prize_stream({"g"}), {{ActionId("a"), Outcome::stream({"h"})}}),
                  InputError);
}

TEST_CASE("product examples") {
  const Menu m1 = Menu::scalar({{"a", 0}, {"b", 1}});
  const Menu m2 = Menu::scalar({{"p", 0}, {"q", 1}});
  const Menu p = product(m1, m2);
  REQUIRE(p.size() == 4);
  CHECK(p[0].action.str() == "(a,p)");
  CHECK(p[1].action.str() == "(a,q)");
  CHECK(p[2].action.str() == "(b,p)");
  CHECK(p[3].action.str() == "(b,q)");
  CHECK(scalar_outcomes(p) == std::vector<double>{0, 1, 1, 2});

  const Menu one = Menu::scalar({{"e", 0}});
  CHECK(scalar_outcomes(product(m1, one)) == scalar_outcomes(m1));
  CHECK_THROWS_AS(product(m1, Menu(OutcomeSpace::real_vector(1), {{ActionId("v"), Outcome::vector({0})}})),
                  InputError);
}

TEST_CASE("powers of the unit binary menu") {
  const Menu b = unit_binary_menu();
  CHECK(scalar_outcomes(power(b, 2)) == std::vector<double>{0, 1, 1, 2});
  CHECK(scalar_outcomes(power(b, 1)) == scalar_outcomes(b));
  CHECK_THROWS_AS(power(b, 0), InputError);

  // Exhaustive oracle: entry i of the n-fold power has the Hamming weight of i.
  for (int n = 1; n <= 10; ++n) {
    const Menu p = power(b, n);
    REQUIRE(p.size() == (std::size_t{1} << n));
    for (std::size_t i = 0; i < p.size(); ++i)
      CHECK(p[i].outcome.as_scalar() == static_cast<double>(__builtin_popcountll(i)));
    CHECK(p[diagonal_index(2, 1, n)].outcome.as_scalar() == n);
    CHECK(p[diagonal_index(2, 0, n)].outcome.as_scalar() == 0);
  }
  CHECK(power(power(b, 1), 3)[diagonal_index(2, 1, 3)].action.str() == "((b1,b1),b1)");
}

TEST_CASE("diagonal index on a three-action menu") {
  const Menu m = Menu::scalar({{"x", 0}, {"y", 10}, {"z", 100}});
  for (int n = 1; n <= 5; ++n) {
    const Menu p = power(m, n);
    for (std::size_t a = 0; a < 3; ++a)
      CHECK(p[diagonal_index(3, a, n)].outcome.as_scalar() == doctest::Approx(n * m[a].outcome.as_scalar()));
  }
}

TEST_CASE("equivalent") {
  const auto f = equivalent(Menu::scalar({{"a", 1}, {"b", 2}}), Menu::scalar({{"x", 2}, {"y", 1}}));
  REQUIRE(f);
  CHECK(*f == std::vector<std::size_t>{1, 0});
  CHECK_FALSE(equivalent(Menu::scalar({{"a", 1}, {"b", 2}}), Menu::scalar({{"x", 1}, {"y", 3}})));
  CHECK_FALSE(equivalent(Menu::scalar({{"a", 1}}), Menu::scalar({{"x", 1}, {"y", 1}})));

  // Streams compare exactly.
  const OutcomeSpace s = OutcomeSpace::prize_stream({"g", "h"});
  const Menu s1(s, {{ActionId("a"), Outcome::stream({"g", "h"})}, {ActionId("b"), Outcome::stream({"h"})}});
  const Menu s2(s, {{ActionId("c"), Outcome::stream({"h"})}, {ActionId("d"), Outcome::stream({"g", "h"})}});
  const Menu s3(s, {{ActionId("c"), Outcome::stream({"h"})}, {ActionId("d"), Outcome::stream({"h", "g"})}});
  CHECK(equivalent(s1, s2));
  CHECK_FALSE(equivalent(s1, s3));
}

TEST_CASE("property: permuted products are equivalent") {
  gen::Gen g(21);
  for (int t = 0; t < 25; ++t) {
    const Menu m1 = g.scalar_menu(g.integer(1, 4), "a");
    const Menu m2 = g.scalar_menu(g.integer(1, 4), "b");
    const Menu p = power(product(m1, m2), 1);
    std::vector<MenuEntry> shuffled(p.entries().begin(), p.entries().end());
    std::shuffle(shuffled.begin(), shuffled.end(), g.rng);
    const Menu q(p.space(), shuffled);
    const auto f = equivalent(product(m1, m2), q);
    REQUIRE(f);
    for (std::size_t i = 0; i < p.size(); ++i)
      CHECK(p[i].outcome.as_scalar() == doctest::Approx(q[(*f)[i]].outcome.as_scalar()));
  }
}

TEST_CASE("property: sizes and association orders") {
  gen::Gen g(22);
  for (SpaceKind k : gen::all_kinds()) {
    const OutcomeSpace s = g.space(k);
    const Menu m = g.menu(s, g.integer(1, 3));
    const Menu n = g.menu(s, g.integer(1, 3), "b");
    CHECK(product(m, n).size() == m.size() * n.size());
    const Menu cube = power(m, 3);
    CHECK(cube.size() == m.size() * m.size() * m.size());
    for (const auto& e : cube.entries()) CHECK(e.outcome.conforms_to(s));
  }
  // Commutative, associative space: right-associated cube matches the left fold.
  for (int t = 0; t < 10; ++t) {
    const Menu m = g.scalar_menu(3);
    const Menu right = product(m, product(m, m));
    CHECK(equivalent(power(m, 3), right));
  }
}

TEST_CASE("choice distribution validation") {
  CHECK_THROWS_AS(ChoiceDistribution({ActionId("a"), ActionId("b")}, {0.5, 0.6}), InputError);
  CHECK_THROWS_AS(ChoiceDistribution({ActionId("a"), ActionId("b")}, {1.5, -0.5}), InputError);
  const ChoiceDistribution d({ActionId("a"), ActionId("b")}, {0.25, 0.75});
  CHECK(d.at(ActionId("b")) == 0.75);
  CHECK_THROWS_AS(d.at(ActionId("c")), InputError);
}
