#pragma once

// Hand-rolled random generators for property tests.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "choicekit/menu.hpp"
#include "choicekit/outcome.hpp"
#include "choicekit/utility.hpp"

namespace gen {

using namespace choicekit;

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
  bool coin() { return integer(0, 1) == 1; }

  Distribution distribution_value(int max_support = 4) {
    const int k = integer(1, max_support);
    std::vector<double> support;
    while (static_cast<int>(support.size()) < k) {
      const double x = std::round(real(-3, 3) * 1000) / 1000;
      bool dup = false;
      for (double s : support) dup = dup || s == x;
      if (!dup) support.push_back(x);
    }
    std::vector<double> w(k);
    double total = 0;
    for (double& x : w) total += x = real(0.1, 1.0);
    for (double& x : w) x /= total;
    return {support, w};
  }

  Outcome outcome(const OutcomeSpace& s) {
    switch (s.kind) {
      case SpaceKind::RealScalar: return Outcome::scalar(real(-5, 5));
      case SpaceKind::RealVector: {
        std::vector<double> v(s.dim);
        for (double& x : v) x = real(-5, 5);
        return Outcome::vector(v);
      }
      case SpaceKind::MeanStdDev: return Outcome::mean_stddev(real(-5, 5), real(0, 3));
      case SpaceKind::DiscreteDistribution: {
        auto d = distribution_value();
        return Outcome::distribution(d.support, d.probs);
      }
      case SpaceKind::PrizeStream: {
        PrizeStream z;
        const int len = integer(0, 4);
        for (int i = 0; i < len; ++i) z.push_back(s.alphabet[integer(0, static_cast<int>(s.alphabet.size()) - 1)]);
        return Outcome::stream(z);
      }
      case SpaceKind::Matrix: {
        const auto d = static_cast<Eigen::Index>(s.dim);
        Eigen::MatrixXd m(d, d);
        for (Eigen::Index r = 0; r < d; ++r)
          for (Eigen::Index c = 0; c < d; ++c) m(r, c) = real(-1, 1) + (r == c ? 2.0 : 0.0);
        return Outcome::matrix(m);
      }
    }
    return Outcome::scalar(0);
  }

  OutcomeSpace space(SpaceKind kind) {
    switch (kind) {
      case SpaceKind::RealScalar: return OutcomeSpace::real_scalar();
      case SpaceKind::RealVector: return OutcomeSpace::real_vector(integer(1, 5));
      case SpaceKind::MeanStdDev: return OutcomeSpace::mean_stddev();
      case SpaceKind::DiscreteDistribution: return OutcomeSpace::discrete_distribution(integer(1, 4));
      case SpaceKind::PrizeStream: {
        std::vector<std::string> a;
        const int n = integer(1, 6);
        for (int i = 0; i < n; ++i) a.push_back("p" + std::to_string(i));
        return OutcomeSpace::prize_stream(a);
      }
      case SpaceKind::Matrix: return OutcomeSpace::matrix(integer(1, 3));
    }
    return OutcomeSpace::real_scalar();
  }

  std::vector<double> params(std::size_t n, double lo = -2, double hi = 2) {
    std::vector<double> out(n);
    for (double& x : out) x = real(lo, hi);
    return out;
  }

  /// Scalar menu with k actions labelled prefix1..prefixk.
  Menu scalar_menu(int k, const std::string& prefix = "a", bool integer_valued = false) {
    std::vector<MenuEntry> e;
    for (int i = 0; i < k; ++i) {
      const double x = integer_valued ? integer(-4, 4) : real(-3, 3);
      e.push_back({ActionId(prefix + std::to_string(i + 1)), Outcome::scalar(x)});
    }
    return Menu(OutcomeSpace::real_scalar(), e);
  }

  Menu menu(const OutcomeSpace& s, int k, const std::string& prefix = "a") {
    std::vector<MenuEntry> e;
    for (int i = 0; i < k; ++i) e.push_back({ActionId(prefix + std::to_string(i + 1)), outcome(s)});
    return Menu(s, e);
  }
};

inline const std::vector<SpaceKind>& all_kinds() {
  static const std::vector<SpaceKind> k{SpaceKind::RealScalar, SpaceKind::RealVector,
                                        SpaceKind::MeanStdDev,  SpaceKind::DiscreteDistribution,
                                        SpaceKind::PrizeStream, SpaceKind::Matrix};
  return k;
}

}  // namespace gen
