#include "choicekit/extract.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "choicekit/axioms.hpp"

namespace choicekit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> log_probs(const ChoiceDistribution& p) {
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] > 0.0)) throw Error("non-positive probability in corpus");
    out[i] = std::log(p[i]);
  }
  return out;
}

// Per-menu data for the closeness objective: ln Phi and the feature rows.
struct Observed {
  std::vector<double> logp;
  std::vector<std::vector<double>> features;
};

std::vector<Observed> observe(const Rule& rule, const std::vector<Menu>& corpus) {
  std::vector<Observed> out;
  out.reserve(corpus.size());
  for (const auto& m : corpus) {
    Observed o;
    o.logp = log_probs(choose(rule, m));
    o.features.reserve(m.size());
    for (const auto& e : m.entries()) o.features.push_back(utility_features(m.space(), e.outcome));
    out.push_back(std::move(o));
  }
  return out;
}

double closeness_delta(const std::vector<Observed>& data, const std::vector<double>& theta) {
  double delta = 0.0;
  for (const auto& o : data) {
    double lo = kInf, hi = -kInf;
    for (std::size_t a = 0; a < o.logp.size(); ++a) {
      double r = o.logp[a];
      for (std::size_t k = 0; k < theta.size(); ++k) r -= theta[k] * o.features[a][k];
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    delta = std::max(delta, 0.5 * (hi - lo));
  }
  return delta;
}

// Minimises a convex function of one variable starting from x0.
double golden_minimise(const std::function<double(double)>& f, double x0) {
  double h = std::max(1.0, std::abs(x0)) * 0.5;
  double c = x0, fc = f(c);
  double a = c - h, fa = f(a);
  double b = c + h, fb = f(b);
  for (int i = 0; i < 200 && fa < fc; ++i) {
    b = c, fb = fc;
    c = a, fc = fa;
    h *= 2.0;
    a = c - h, fa = f(a);
  }
  for (int i = 0; i < 200 && fb < fc; ++i) {
    a = c, fa = fc;
    c = b, fc = fb;
    h *= 2.0;
    b = c + h, fb = f(b);
  }
  const double g = 1.0 / std::numbers::phi;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 300 && b - a > 1e-14 * std::max(1.0, std::abs(a) + std::abs(b)); ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1, f2 = f1;
      x1 = b - g * (b - a), f1 = f(x1);
    } else {
      a = x1;
      x1 = x2, f1 = f2;
      x2 = a + g * (b - a), f2 = f(x2);
    }
  }
  if (fc < std::min(f1, f2)) return c;
  return f1 <= f2 ? x1 : x2;
}

}  // namespace

double extract_beta(const Rule& rule) {
  const auto p = choose(rule, unit_binary_menu());
  if (p[0] == 0.0) return kInf;
  if (p[1] == 0.0) return -kInf;
  return std::log(p[1] / p[0]);
}

double extract_beta_scaled(const Rule& rule, long long k) {
  if (k < 1) throw InputError("scale k must be positive");
  const double kk = static_cast<double>(k);
  const auto p = choose(rule, Menu::scalar({{"b0", 0.0}, {"b1", 1.0 / kk}}));
  if (p[0] == 0.0) return kInf;
  if (p[1] == 0.0) return -kInf;
  return kk * std::log(p[1] / p[0]);
}

double extract_utility(const Rule& rule, const OutcomeSpace& space, const Outcome& x) {
  const Menu probe(space, {{ActionId("e"), identity(space)}, {ActionId("x"), x}});
  const auto p = choose(rule, probe);
  if (!(p[0] > 0.0) || !(p[1] > 0.0)) throw Error("rule not positive at probe");
  return std::log(p[1]) - std::log(p[0]);
}

std::vector<Outcome> fit_probes(const OutcomeSpace& space) {
  std::vector<Outcome> out;
  switch (space.kind) {
    case SpaceKind::RealScalar:
      out.push_back(Outcome::scalar(1.0));
      break;
    case SpaceKind::RealVector:
      for (std::size_t i = 0; i < space.dim; ++i) {
        std::vector<double> v(space.dim, 0.0);
        v[i] = 1.0;
        out.push_back(Outcome::vector(std::move(v)));
      }
      break;
    case SpaceKind::MeanStdDev:
      out.push_back(Outcome::mean_stddev(1.0, 0.0));
      out.push_back(Outcome::mean_stddev(0.0, 1.0));
      break;
    case SpaceKind::DiscreteDistribution:
      // Point mass (mean only), symmetric +-1/2 (even cumulants only), then
      // skewed Bernoulli(1/4) draws at growing scales, whose cumulant vectors
      // c^j * kappa_j(Bernoulli) are independent for distinct scales c.
      for (std::size_t j = 1; j <= space.moment_order; ++j) {
        if (j == 1) {
          out.push_back(Outcome::point_mass(1.0));
        } else if (j == 2) {
          out.push_back(Outcome::distribution({-0.5, 0.5}, {0.5, 0.5}));
        } else {
          const double c = std::pow(2.0, 0.5 * static_cast<double>(j - 2));
          out.push_back(Outcome::distribution({0.0, c}, {0.75, 0.25}));
        }
      }
      break;
    case SpaceKind::PrizeStream:
      for (const auto& p : space.alphabet) out.push_back(Outcome::stream({p}));
      break;
    case SpaceKind::Matrix: {
      Eigen::MatrixXd m = Eigen::MatrixXd::Identity(space.dim, space.dim);
      m(0, 0) = std::numbers::e;
      out.push_back(Outcome::matrix(std::move(m)));
      break;
    }
  }
  return out;
}

FitResult fit_utility_representation(const Rule& rule, const OutcomeSpace& space) {
  const auto probes = fit_probes(space);
  const std::size_t k = probes.size();
  if (k == 0) return {UtilityRepresentation::zero(space), 1.0};
  Eigen::MatrixXd f(k, k);
  Eigen::VectorXd y(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto phi = utility_features(space, probes[i]);
    for (std::size_t j = 0; j < k; ++j) f(i, j) = phi[j];
    y(i) = extract_utility(rule, space, probes[i]);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(f, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cond = sv(k - 1) > 0.0 ? sv(0) / sv(k - 1) : kInf;
  if (!(cond <= 1e12))
    throw Error("singular probe system (condition number " + std::to_string(cond) + ")");
  const Eigen::VectorXd theta = svd.solve(y);
  return {UtilityRepresentation::from_parameters(space, std::vector<double>(theta.data(), theta.data() + k)),
          cond};
}

UpsilonEstimate upsilon(const Rule& rule, const Menu& menu, int n_max,
                        std::optional<double> eps_decomp, bool keep_history) {
  if (n_max < 1) throw InputError("n_max must be >= 1");
  double size = 1.0;
  for (int i = 0; i < n_max; ++i) size *= static_cast<double>(menu.size());
  if (size > 1e6) throw InputError("power menu would exceed 10^6 actions");
  if (eps_decomp && !(*eps_decomp >= 0.0)) throw InputError("eps_decomp must be >= 0");

  const std::size_t k = menu.size();
  auto estimate = [&](const Menu& pw, int n) {
    const auto p = choose(rule, pw);
    std::vector<double> v(k);
    double total = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
      const double d = p[diagonal_index(k, a, n)];
      total += v[a] = d > 0.0 ? std::exp(std::log(d) / n) : 0.0;
    }
    if (!(total > 0.0)) throw Error("every diagonal probability is zero");
    for (double& x : v) x /= total;
    return v;
  };

  UpsilonEstimate out{ChoiceDistribution({ActionId("_")}, {1.0}), n_max, std::nullopt, {}};
  std::vector<double> last;
  if (keep_history) {
    Menu pw = menu;
    for (int n = 1; n <= n_max; ++n) {
      if (n > 1) pw = product(pw, menu);
      out.history.push_back(estimate(pw, n));
    }
    last = out.history.back();
  } else {
    last = estimate(power(menu, n_max), n_max);
  }
  std::vector<ActionId> ids;
  for (const auto& e : menu.entries()) ids.push_back(e.action);
  out.distribution = ChoiceDistribution(std::move(ids), std::move(last));
  if (eps_decomp) out.bound = std::pow(1.0 + *eps_decomp, 1.0 / n_max) - 1.0;
  return out;
}

ClosenessCertificate certify_closeness(const Rule& rule, const std::vector<Menu>& corpus,
                                       const UtilityRepresentation& u,
                                       const std::vector<std::string>& ids) {
  if (!ids.empty() && ids.size() != corpus.size()) throw InputError("one id per corpus menu");
  ClosenessCertificate cert{u, 0.0, {}, corpus.size()};
  for (std::size_t m = 0; m < corpus.size(); ++m) {
    const Menu& menu = corpus[m];
    if (u.kind() != menu.space().kind) throw InputError("utility and corpus spaces differ");
    const auto p = choose(rule, menu);
    const auto logp = log_probs(p);
    std::vector<double> util(menu.size()), r(menu.size());
    for (std::size_t a = 0; a < menu.size(); ++a) {
      util[a] = u.evaluate(menu[a].outcome);
      r[a] = logp[a] - util[a];
    }
    const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
    const double mid = 0.5 * (*hi + *lo);
    cert.delta = std::max(cert.delta, 0.5 * (*hi - *lo));

    MenuShocks shocks{ids.empty() ? menu_label(menu) : ids[m], {}, {}};
    shocks.actions.reserve(menu.size());
    shocks.shocks.reserve(menu.size());
    std::vector<double> z(menu.size());
    double zmax = -kInf;
    for (std::size_t a = 0; a < menu.size(); ++a) {
      const double s = r[a] - mid;
      shocks.actions.push_back(menu[a].action);
      shocks.shocks.push_back(s);
      z[a] = util[a] + s;
      zmax = std::max(zmax, z[a]);
    }
    // Reconstruction: softmax(u(o) + s) must give back Phi.
    double total = 0.0;
    for (double& x : z) total += x = std::exp(x - zmax);
    for (std::size_t a = 0; a < menu.size(); ++a)
      if (std::abs(z[a] / total - p[a]) > 1e-10)
        throw Error("certificate reconstruction failed on menu " + shocks.menu_id);
    cert.menus.push_back(std::move(shocks));
  }
  return cert;
}

UtilityRepresentation refine_for_closeness(const Rule& rule, const std::vector<Menu>& corpus,
                                           const UtilityRepresentation& start) {
  if (corpus.empty()) return start;
  const OutcomeSpace& space = corpus.front().space();
  const auto data = observe(rule, corpus);
  std::vector<double> theta = start.parameters(space);
  if (theta.empty()) return start;
  double best = closeness_delta(data, theta);
  for (int cycle = 0; cycle < (theta.size() == 1 ? 1 : 100); ++cycle) {
    const double before = best;
    for (std::size_t k = 0; k < theta.size(); ++k) {
      auto f = [&](double t) {
        std::vector<double> trial = theta;
        trial[k] = t;
        return closeness_delta(data, trial);
      };
      const double t = golden_minimise(f, theta[k]);
      const double ft = f(t);
      if (ft < best) best = ft, theta[k] = t;
    }
    if (before - best <= 1e-15) break;
  }
  return UtilityRepresentation::from_parameters(space, theta);
}

UlamBound ulam_bound(double eps_neut, double eps_decomp,
                     const std::function<double(double)>& stability) {
  if (!(eps_neut >= 0.0) || !(eps_decomp >= 0.0)) throw InputError("epsilons must be >= 0");
  if (stability(0.0) != 0.0) throw InputError("stability function must satisfy d(0) = 0");
  UlamBound out;
  out.eps_neut_reduced = std::min(eps_neut, 2.0 * eps_decomp + eps_decomp * eps_decomp);
  const double arg = 4.0 * eps_decomp + out.eps_neut_reduced;
  const double d = stability(arg);
  if (d < stability(0.5 * arg)) throw InputError("stability function must be nondecreasing");
  out.delta_theorem5 = 2.0 * eps_decomp + out.eps_neut_reduced + d;
  out.delta_banach = 2.0 * eps_decomp + out.eps_neut_reduced + arg;
  return out;
}

}  // namespace choicekit
