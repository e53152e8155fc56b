#include "choicekit/rules.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <set>

#include "choicekit/hash.hpp"

namespace choicekit {

ShockSpec ShockSpec::gaussian(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InputError("gaussian shock needs sigma > 0");
  return {Kind::Gaussian, sigma};
}

ShockSpec ShockSpec::gumbel(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InputError("gumbel shock needs beta > 0");
  return {Kind::Gumbel, beta};
}

double ShockSpec::pdf(double x) const {
  if (kind == Kind::Gaussian) {
    const double z = x / param;
    return std::exp(-0.5 * z * z) / (param * std::sqrt(2.0 * std::numbers::pi));
  }
  const double t = std::exp(-param * x);
  return param * t * std::exp(-t);
}

double ShockSpec::cdf(double x) const {
  if (kind == Kind::Gaussian) return 0.5 * std::erfc(-x / (param * std::numbers::sqrt2));
  return std::exp(-std::exp(-param * x));
}

// Gaussian: +-12 sigma. Gumbel has an exponential right tail, so a symmetric
// window in standard deviations would drop ~1e-7 of mass; use quantiles instead
// (left tail exp(-e^4.235) ~ 1e-30, right tail e^-41.45 ~ 1e-18).
double ShockSpec::lower() const { return kind == Kind::Gaussian ? -12.0 * param : -4.235 / param; }
double ShockSpec::upper() const { return kind == Kind::Gaussian ? 12.0 * param : 41.45 / param; }

Rule Rule::perturbed(Rule base, double delta, std::uint64_t seed) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw InputError("perturbation delta must be >= 0");
  return PerturbedRule{std::make_shared<const Rule>(std::move(base)), delta, seed};
}

void TabularRule::add(const Menu& menu, const std::map<std::string, double>& probs) {
  if (probs.size() != menu.size())
    throw InputError("tabular probabilities must list every action of the menu exactly once");
  std::vector<ActionId> actions;
  std::vector<double> ps;
  for (const auto& e : menu.entries()) {
    auto it = probs.find(e.action.str());
    if (it == probs.end())
      throw InputError("tabular probabilities omit action " + e.action.str());
    actions.push_back(e.action);
    ps.push_back(it->second);
  }
  ChoiceDistribution check(std::move(actions), std::move(ps));  // validates values
  table[canonical_menu_key(menu)] = probs;
}

namespace {

std::string rounded(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x + 0.0);  // + 0.0 folds -0 into 0
  return buf;
}

std::string encode_rounded(const Outcome& x) {
  std::string out;
  auto list = [&](const std::vector<double>& v) {
    out += '[';
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ',';
      out += rounded(v[i]);
    }
    out += ']';
  };
  switch (x.kind()) {
    case SpaceKind::RealScalar:
      out = rounded(x.as_scalar());
      break;
    case SpaceKind::RealVector:
      list(x.as_vector());
      break;
    case SpaceKind::MeanStdDev:
      out = "{" + rounded(x.as_mean_stddev().mean) + "," + rounded(x.as_mean_stddev().stddev) + "}";
      break;
    case SpaceKind::DiscreteDistribution:
      list(x.as_distribution().support);
      list(x.as_distribution().probs);
      break;
    case SpaceKind::PrizeStream:
      out += '<';
      for (const auto& p : x.as_stream()) out += p + ";";
      out += '>';
      break;
    case SpaceKind::Matrix: {
      const auto& m = x.as_matrix();
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        std::vector<double> row(m.cols());
        for (Eigen::Index c = 0; c < m.cols(); ++c) row[c] = m(r, c);
        list(row);
      }
      break;
    }
  }
  return out;
}

std::string space_key(const OutcomeSpace& s) {
  std::string out = to_string(s.kind) + "/" + std::to_string(s.dim) + "/" +
                    std::to_string(s.moment_order);
  for (const auto& a : s.alphabet) out += "/" + a;
  return out;
}

void require_scalar(const Menu& menu, const char* rule) {
  if (menu.space().kind != SpaceKind::RealScalar)
    throw InputError(std::string(rule) + " rule requires a real_scalar menu, got " +
                     to_string(menu.space().kind));
}

std::vector<ActionId> action_list(const Menu& menu) {
  std::vector<ActionId> out;
  out.reserve(menu.size());
  for (const auto& e : menu.entries()) out.push_back(e.action);
  return out;
}

// Normalises exp(v) with the max subtracted; an exact 1 is restored by dividing
// through the sum, then re-summed to absorb the last ulp.
std::vector<double> softmax(const std::vector<double>& v) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double x : v) {
    if (std::isnan(x)) throw Error("utility evaluated to NaN");
    hi = std::max(hi, x);
  }
  if (!std::isfinite(hi)) throw Error("utility is not finite");
  std::vector<double> p(v.size());
  double total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) total += p[i] = std::exp(v[i] - hi);
  for (double& x : p) x /= total;
  return p;
}

bool is_integer_valued(const Menu& menu) {
  for (const auto& e : menu.entries()) {
    const double x = e.outcome.as_scalar();
    if (x != std::floor(x)) return false;
  }
  return true;
}

std::vector<double> choose_mnl(double beta, const Menu& menu) {
  require_scalar(menu, "mnl");
  const std::size_t n = menu.size();
  if (std::isinf(beta)) {
    const double sign = beta > 0 ? 1.0 : -1.0;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& e : menu.entries()) best = std::max(best, sign * e.outcome.as_scalar());
    const double tol = is_integer_valued(menu) ? 0.0 : 1e-12 * std::max(1.0, std::abs(best));
    std::vector<double> p(n, 0.0);
    std::size_t ties = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (best - sign * menu[i].outcome.as_scalar() <= tol) p[i] = 1.0, ++ties;
    for (double& x : p) x /= static_cast<double>(ties);
    return p;
  }
  if (std::isnan(beta)) throw InputError("mnl beta is NaN");
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = beta * menu[i].outcome.as_scalar();
  return softmax(v);
}

std::vector<double> choose_iaru(const IaruRule& rule, const Menu& menu) {
  require_scalar(menu, "iaru");
  // Group equal outcomes: every action in a group has the same probability, and
  // a group of size c contributes F(.)^c to the others' integrands.
  std::map<double, std::size_t> counts;
  for (const auto& e : menu.entries()) ++counts[e.outcome.as_scalar()];
  std::vector<double> values;
  std::vector<double> mult;
  for (const auto& [v, c] : counts) {
    values.push_back(v);
    mult.push_back(static_cast<double>(c));
  }
  const std::size_t g = values.size();
  const ShockSpec& shock = rule.shock;
  std::map<double, double> per_action;
  double total = 0.0;
  const double vmax = values.back();
  for (std::size_t i = 0; i < g; ++i) {
    const double vi = values[i];
    // A low outcome only wins when its shock clears the best competitor, so
    // its integrand peaks up to (vmax - vi) beyond the shock's own window.
    auto integrand = [&](double x) {
      double prod = shock.pdf(x);
      if (prod == 0.0) return 0.0;
      for (std::size_t j = 0; j < g; ++j) {
        const double c = j == i ? mult[j] - 1.0 : mult[j];
        if (c == 0.0) continue;
        const double f = shock.cdf(vi - values[j] + x);
        prod *= c == 1.0 ? f : std::pow(f, c);
        if (prod == 0.0) return 0.0;
      }
      return prod;
    };
    const double pi =
        g == 1 ? 1.0 / mult[0] : integrate(integrand, shock.lower(), shock.upper() + (vmax - vi), rule.quadrature).value;
    per_action[vi] = pi;
    total += pi * mult[i];
  }
  if (!(std::abs(total - 1.0) < 1e-8))
    throw Error("iaru quadrature lost normalisation: total probability " + std::to_string(total));
  std::vector<double> p(menu.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < menu.size(); ++i) sum += p[i] = per_action[menu[i].outcome.as_scalar()];
  for (double& x : p) x /= sum;
  return p;
}

std::vector<double> choose_probs(const Rule& rule, const Menu& menu);

std::vector<double> choose_probs(const Rule& rule, const Menu& menu) {
  return std::visit(
      [&](const auto& r) -> std::vector<double> {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, MnlRule>) {
          return choose_mnl(r.beta, menu);
        } else if constexpr (std::is_same_v<T, GeneralMnlRule>) {
          if (r.utility.kind() != menu.space().kind)
            throw InputError("utility for " + to_string(r.utility.kind()) +
                             " applied to a " + to_string(menu.space().kind) + " menu");
          std::vector<double> v(menu.size());
          for (std::size_t i = 0; i < menu.size(); ++i) v[i] = r.utility.evaluate(menu[i].outcome);
          return softmax(v);
        } else if constexpr (std::is_same_v<T, IaruRule>) {
          return choose_iaru(r, menu);
        } else if constexpr (std::is_same_v<T, UniformRule>) {
          return std::vector<double>(menu.size(), 1.0 / static_cast<double>(menu.size()));
        } else if constexpr (std::is_same_v<T, TabularRule>) {
          if (!r.table.empty()) {
            auto it = r.table.find(canonical_menu_key(menu));
            if (it != r.table.end()) {
              std::vector<double> p(menu.size());
              for (std::size_t i = 0; i < menu.size(); ++i) p[i] = it->second.at(menu[i].action.str());
              return p;
            }
          }
          if (!r.fallback) throw Error("tabular rule has no entry for menu and no fallback");
          return choose_probs(*r.fallback, menu);
        } else {
          std::vector<double> p = choose_probs(*r.base, menu);
          if (r.delta == 0.0) return p;
          const std::uint64_t h = canonical_menu_hash(menu);
          double total = 0.0;
          for (std::size_t i = 0; i < menu.size(); ++i)
            total += p[i] *= std::exp(perturbation_shock(r.seed, h, menu[i].action, r.delta));
          for (double& x : p) x /= total;
          return p;
        }
      },
      rule.variant());
}

}  // namespace

ChoiceDistribution choose(const Rule& rule, const Menu& menu) {
  return ChoiceDistribution(action_list(menu), choose_probs(rule, menu));
}

std::string canonical_menu_key(const Menu& menu) {
  std::vector<std::string> parts;
  parts.reserve(menu.size());
  for (const auto& e : menu.entries()) parts.push_back(e.action.str() + "=" + encode_rounded(e.outcome));
  std::sort(parts.begin(), parts.end());
  std::string key = space_key(menu.space());
  for (const auto& p : parts) {
    key += '|';
    key += p;
  }
  return key;
}

// Same content as canonical_menu_key, hashed entry by entry so that million-action
// power menus never build the full string.
std::uint64_t canonical_menu_hash(const Menu& menu) {
  std::vector<std::uint64_t> parts;
  parts.reserve(menu.size());
  for (const auto& e : menu.entries())
    parts.push_back(hash_combine(e.action.hash(), fnv1a(encode_rounded(e.outcome))));
  std::sort(parts.begin(), parts.end());
  std::uint64_t h = fnv1a(space_key(menu.space()));
  for (std::uint64_t x : parts) h = hash_combine(h, x);
  return h;
}

double perturbation_shock(std::uint64_t seed, std::uint64_t menu_hash, const ActionId& action,
                          double delta) {
  const std::uint64_t h = hash_combine(hash_combine(splitmix64(seed), menu_hash), action.hash());
  const double u = static_cast<double>(h >> 11) * 0x1.0p-53;  // [0, 1)
  return delta * (2.0 * u - 1.0);
}

ProbeResult iaru_equals_mnl_probe(double beta, const std::vector<Menu>& menus, double tol) {
  return iaru_equals_mnl_probe(beta, menus, tol, beta);
}

ProbeResult iaru_equals_mnl_probe(double beta, const std::vector<Menu>& menus, double tol,
                                  double mnl_beta) {
  const Rule gumbel = Rule::iaru(ShockSpec::gumbel(beta));
  const Rule mnl = Rule::mnl(mnl_beta);
  ProbeResult out;
  for (const auto& m : menus) {
    const auto a = choose(gumbel, m);
    const auto b = choose(mnl, m);
    for (std::size_t i = 0; i < m.size(); ++i)
      out.max_deviation = std::max(out.max_deviation, std::abs(a[i] - b[i]));
  }
  out.equal = out.max_deviation <= tol;
  return out;
}

}  // namespace choicekit
