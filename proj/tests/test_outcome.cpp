#include <doctest.h>

#include <cmath>
#include <numbers>

#include "choicekit/outcome.hpp"
#include "choicekit/utility.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace choicekit;

TEST_CASE("compose examples") {
  CHECK(compose(Outcome::scalar(3.14), Outcome::scalar(-17)).as_scalar() == doctest::Approx(-13.86).epsilon(1e-14));

  const auto ms = compose(Outcome::mean_stddev(5, 2), Outcome::mean_stddev(-0.01, 0.05)).as_mean_stddev();
  CHECK(ms.mean == doctest::Approx(4.99).epsilon(1e-14));
  CHECK(ms.stddev == doctest::Approx(std::sqrt(4.0025)).epsilon(1e-14));
  CHECK(ms.stddev == doctest::Approx(2.000625).epsilon(1e-6));

  CHECK(compose(Outcome::stream({"a", "b"}), Outcome::stream({})).as_stream() == PrizeStream{"a", "b"});
  CHECK(compose(Outcome::stream({"a"}), Outcome::stream({"b"})).as_stream() == PrizeStream{"a", "b"});

  const auto d = compose(Outcome::point_mass(1), Outcome::point_mass(2)).as_distribution();
  CHECK(d.support == std::vector<double>{3.0});
  CHECK(d.probs == std::vector<double>{1.0});

  Eigen::MatrixXd a(2, 2), b(2, 2);
  a << 1, 2, 0, 1;
  b << 1, 0, 3, 1;
  CHECK(compose(Outcome::matrix(a), Outcome::matrix(b)).as_matrix().isApprox(a * b));
}

TEST_CASE("compose rejects mixed spaces") {
  CHECK_THROWS_WITH_AS(compose(Outcome::scalar(1), Outcome::vector({1})), "incompatible outcome spaces",
                       InputError);
  CHECK_THROWS_AS(compose(Outcome::vector({1, 2}), Outcome::vector({1})), InputError);
}

TEST_CASE("value invariants") {
  CHECK_THROWS_AS(Outcome::mean_stddev(0, -1), InputError);
  CHECK_THROWS_AS(Outcome::distribution({0, 1}, {0.5, 0.6}), InputError);
  CHECK_THROWS_AS(Outcome::distribution({0, 0}, {0.5, 0.5}), InputError);
  CHECK_THROWS_AS(Outcome::distribution({0, 1}, {1.0, 0.0}), InputError);
  CHECK_THROWS_AS(Outcome::matrix(Eigen::MatrixXd::Zero(2, 2)), InputError);
  const auto d = Outcome::distribution({2, -1}, {0.25, 0.75}).as_distribution();
  CHECK(d.support == std::vector<double>{-1, 2});
  CHECK(d.probs == std::vector<double>{0.75, 0.25});
}

TEST_CASE("identity elements") {
  CHECK(identity(OutcomeSpace::real_scalar()).as_scalar() == 0.0);
  CHECK(identity(OutcomeSpace::matrix(2)).as_matrix() == Eigen::MatrixXd::Identity(2, 2));
  CHECK(identity(OutcomeSpace::prize_stream({"g"})).as_stream().empty());
  CHECK(identity(OutcomeSpace::real_vector(3)).as_vector() == std::vector<double>(3, 0.0));
  const auto ms = identity(OutcomeSpace::mean_stddev()).as_mean_stddev();
  CHECK(ms.mean == 0.0);
  CHECK(ms.stddev == 0.0);
  CHECK(identity(OutcomeSpace::discrete_distribution(2)).as_distribution().support == std::vector<double>{0.0});
}

TEST_CASE("property: identity is neutral on both sides") {
  gen::Gen g(11);
  for (SpaceKind k : gen::all_kinds()) {
    for (int t = 0; t < 30; ++t) {
      const OutcomeSpace s = g.space(k);
      const Outcome x = g.outcome(s);
      const Outcome e = identity(s);
      CHECK(approx_equal(compose(e, x), x, 1e-12));
      CHECK(approx_equal(compose(x, e), x, 1e-12));
    }
  }
}

TEST_CASE("compensate examples") {
  auto c = compensate(Outcome::scalar(-17), Outcome::scalar(42));
  CHECK(c.side == Side::Left);
  CHECK(c.s.as_scalar() == 59.0);

  c = compensate(Outcome::mean_stddev(0, 0), Outcome::mean_stddev(4.99, 2.000625));
  CHECK(c.side == Side::Left);
  CHECK(c.s.as_mean_stddev().mean == doctest::Approx(4.99));
  CHECK(c.s.as_mean_stddev().stddev == doctest::Approx(2.000625));

  Eigen::MatrixXd d(2, 2);
  d << 2, 0, 0, 3;
  c = compensate(Outcome::matrix(Eigen::MatrixXd::Identity(2, 2)), Outcome::matrix(d));
  CHECK(c.side == Side::Left);
  CHECK(c.s.as_matrix().isApprox(d));

  c = compensate(Outcome::mean_stddev(1, 3), Outcome::mean_stddev(0, 1));
  CHECK(c.side == Side::Right);
  CHECK(c.s.as_mean_stddev().mean == doctest::Approx(1));
  CHECK(c.s.as_mean_stddev().stddev == doctest::Approx(std::sqrt(8.0)));

  c = compensate(Outcome::stream({"b"}), Outcome::stream({"a", "b"}));
  CHECK(c.side == Side::Left);
  CHECK(c.s.as_stream() == PrizeStream{"a"});
  c = compensate(Outcome::stream({"a", "b"}), Outcome::stream({"b"}));
  CHECK(c.side == Side::Right);
  CHECK(c.s.as_stream() == PrizeStream{"a"});
  CHECK_THROWS_WITH(compensate(Outcome::stream({"a"}), Outcome::stream({"b"})), "no compensating outcome");
}

TEST_CASE("property: compensation is sound") {
  gen::Gen g(12);
  for (SpaceKind k : gen::all_kinds()) {
    for (int t = 0; t < 40; ++t) {
      const OutcomeSpace s = g.space(k);
      Outcome x = g.outcome(s);
      Outcome x2 = g.outcome(s);
      if (k == SpaceKind::PrizeStream && g.coin()) x2 = compose(g.outcome(s), x);
      if (k == SpaceKind::DiscreteDistribution) x2 = compose(g.outcome(s), x);
      Compensation c = [&] {
        try {
          return compensate(x, x2);
        } catch (const Error&) {
          // Only streams (no suffix relation) may refuse.
          CHECK(k == SpaceKind::PrizeStream);
          return Compensation{Side::Left, Outcome::scalar(0)};
        }
      }();
      if (c.s.kind() != k) continue;
      if (c.side == Side::Left) {
        CHECK(approx_equal(compose(c.s, x), x2, 1e-10));
      } else {
        CHECK(approx_equal(compose(c.s, x2), x, 1e-10));
      }
    }
  }
}

TEST_CASE("evaluate examples") {
  CHECK(evaluate(LinearUtility{2}, Outcome::scalar(3)) == 6.0);
  Eigen::MatrixXd d(2, 2);
  d << 2, 0, 0, 3;
  CHECK(evaluate(LogDetUtility{1}, Outcome::matrix(d)) == doctest::Approx(std::log(6.0)).epsilon(1e-14));
  CHECK(evaluate(LogDetUtility{1}, Outcome::matrix(d)) == doctest::Approx(1.7918).epsilon(1e-4));
  CHECK(evaluate(MeanVarianceUtility{1, -0.5}, Outcome::mean_stddev(2, 1)) == 1.5);
  CHECK(evaluate(PrizeCountUtility{{{"g", 1.5}, {"h", -0.5}}}, Outcome::stream({"g", "h", "g"})) == 2.5);
  CHECK(evaluate(WeightedSumUtility{{1, -2}}, Outcome::vector({3, 1})) == 1.0);
  CHECK_THROWS_AS(evaluate(LinearUtility{1}, Outcome::vector({1})), InputError);
}

TEST_CASE("property: utility of identity is zero") {
  gen::Gen g(13);
  for (SpaceKind k : gen::all_kinds()) {
    const OutcomeSpace s = g.space(k);
    const auto u = UtilityRepresentation::from_parameters(s, g.params(parameter_count(s)));
    CHECK(std::abs(u.evaluate(identity(s))) < 1e-15);
  }
}

TEST_CASE("property: utilities are additive over compose") {
  gen::Gen g(14);
  for (SpaceKind k : gen::all_kinds()) {
    for (int t = 0; t < 50; ++t) {
      const OutcomeSpace s = g.space(k);
      const auto u = UtilityRepresentation::from_parameters(s, g.params(parameter_count(s)));
      const Outcome x = g.outcome(s), y = g.outcome(s);
      CHECK(std::abs(u.evaluate(compose(x, y)) - u.evaluate(x) - u.evaluate(y)) <= 1e-9);
    }
  }
}

TEST_CASE("property: non-commutative spaces keep order but not utility") {
  gen::Gen g(15);
  const OutcomeSpace streams = OutcomeSpace::prize_stream({"a", "b", "c"});
  const OutcomeSpace mats = OutcomeSpace::matrix(3);
  int stream_differs = 0, matrix_differs = 0;
  for (int t = 0; t < 30; ++t) {
    const Outcome x = g.outcome(streams), y = g.outcome(streams);
    stream_differs += compose(x, y).as_stream() != compose(y, x).as_stream();
    const auto w = UtilityRepresentation::from_parameters(streams, g.params(3));
    CHECK(w.evaluate(compose(x, y)) == doctest::Approx(w.evaluate(compose(y, x))));

    const Outcome p = g.outcome(mats), q = g.outcome(mats);
    matrix_differs += !approx_equal(compose(p, q), compose(q, p), 1e-9);
    CHECK(LogDetUtility{0.7}.beta * log_abs_det(compose(p, q).as_matrix()) ==
          doctest::Approx(0.7 * log_abs_det(compose(q, p).as_matrix())));
  }
  CHECK(stream_differs > 0);
  CHECK(matrix_differs == 30);
}

TEST_CASE("cumulants examples") {
  CHECK(cumulants(Outcome::point_mass(2.5), 3) == std::vector<double>{2.5, 0, 0});
  const auto b = cumulants(Outcome::distribution({0, 1}, {0.5, 0.5}), 2);
  CHECK(b[0] == doctest::Approx(0.5));
  CHECK(b[1] == doctest::Approx(0.25));
  CHECK(std::abs(cumulants(Outcome::distribution({-1, 1}, {0.5, 0.5}), 1)[0]) < 1e-15);
  CHECK(cumulants(Outcome::point_mass(1), 0).empty());
}

TEST_CASE("property: cumulants match central-moment oracle and add under convolution") {
  gen::Gen g(16);
  for (int t = 0; t < 100; ++t) {
    const Distribution a = g.distribution_value(5), b = g.distribution_value(5);
    oracle::Dist da, db;
    for (std::size_t i = 0; i < a.support.size(); ++i) da[a.support[i]] += a.probs[i];
    for (std::size_t i = 0; i < b.support.size(); ++i) db[b.support[i]] += b.probs[i];
    const Outcome x = Outcome::distribution(a.support, a.probs);
    const Outcome y = Outcome::distribution(b.support, b.probs);
    const auto kx = cumulants(x, 4), ky = cumulants(y, 4), kxy = cumulants(compose(x, y), 4);
    const auto ox = oracle::cumulants4(da), oxy = oracle::cumulants4(oracle::convolve(da, db));
    for (int l = 0; l < 4; ++l) {
      CHECK(std::abs(kx[l] - ox[l]) <= 1e-10);
      CHECK(std::abs(kxy[l] - oxy[l]) <= 1e-9);
      CHECK(std::abs(kxy[l] - kx[l] - ky[l]) <= 1e-9);
    }
  }
}

TEST_CASE("convolution merges colliding support points") {
  const Outcome x = Outcome::distribution({0, 0.1}, {0.5, 0.5});
  const Outcome y = Outcome::distribution({0.2, 0.3}, {0.5, 0.5});
  const auto d = compose(x, y).as_distribution();
  // 0.1 + 0.2 and 0 + 0.3 differ by one ulp and must merge.
  CHECK(d.support.size() == 3);
  CHECK(d.probs[1] == doctest::Approx(0.5));
}

TEST_CASE("space names round trip") {
  for (SpaceKind k : gen::all_kinds()) CHECK(space_kind_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(space_kind_from_string("complex"), InputError);
}
