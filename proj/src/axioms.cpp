#include "choicekit/axioms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

namespace choicekit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool witness_before(const Witness& a, const Witness& b) {
  if (a.ratio != b.ratio) return a.ratio > b.ratio;
  if (a.menu != b.menu) return a.menu < b.menu;
  return a.actions < b.actions;
}

void finish(AxiomReport& r, double tol) {
  r.satisfied_at_tol = r.min_epsilon <= tol;
  if (r.satisfied_at_tol) {
    r.witnesses.clear();
  } else {
    std::sort(r.witnesses.begin(), r.witnesses.end(), witness_before);
  }
}

}  // namespace

std::string to_string(Axiom a) {
  switch (a) {
    case Axiom::Neutrality: return "neutrality";
    case Axiom::Decomposability: return "decomposability";
    case Axiom::Positivity: return "positivity";
    case Axiom::Continuity: return "continuity";
    case Axiom::StrongNeutrality: return "strong_neutrality";
  }
  return "?";
}

Axiom axiom_from_string(const std::string& name) {
  for (Axiom a : {Axiom::Neutrality, Axiom::Decomposability, Axiom::Positivity,
                  Axiom::Continuity, Axiom::StrongNeutrality})
    if (to_string(a) == name) return a;
  throw InputError("unknown axiom: " + name);
}

double ratio_excess(double a, double b) {
  if (b == 0.0) return a == 0.0 ? 0.0 : kInf;
  return a / b - 1.0;
}

double symmetric_ratio_excess(double a, double b) {
  return std::max(ratio_excess(a, b), ratio_excess(b, a));
}

std::string menu_label(const Menu& menu) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(canonical_menu_hash(menu)));
  return buf;
}

AxiomReport neutrality_epsilon(const Menu& menu, const ChoiceDistribution& p, double tol) {
  AxiomReport r;
  r.axiom = Axiom::Neutrality;
  const double eq_tol = default_equality_tol(menu.space().kind);
  std::vector<std::size_t> idx(menu.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return compare(menu[a].outcome, menu[b].outcome) < 0;
  });
  std::string label;
  // Runs of equal outcomes, each anchored on its first member. Within a run the
  // worst pair is (largest p, smallest p).
  for (std::size_t start = 0; start < idx.size();) {
    std::size_t end = start + 1;
    while (end < idx.size() && approx_equal(menu[idx[start]].outcome, menu[idx[end]].outcome, eq_tol))
      ++end;
    if (end - start > 1) {
      std::size_t hi = idx[start], lo = idx[start];
      for (std::size_t k = start; k < end; ++k) {
        if (p[idx[k]] > p[hi]) hi = idx[k];
        if (p[idx[k]] < p[lo]) lo = idx[k];
      }
      const double eps = ratio_excess(p[hi], p[lo]);
      r.min_epsilon = std::max(r.min_epsilon, eps);
      if (eps > tol) {
        if (label.empty()) label = menu_label(menu);
        r.witnesses.push_back({label, {menu[hi].action.str(), menu[lo].action.str()}, eps});
      }
    }
    start = end;
  }
  finish(r, tol);
  return r;
}

AxiomReport neutrality_epsilon(const Rule& rule, const Menu& menu, double tol) {
  return neutrality_epsilon(menu, choose(rule, menu), tol);
}

AxiomReport decomposability_epsilon(const Rule& rule, const Menu& m1, const Menu& m2, double tol) {
  const Menu joint_menu = product(m1, m2);
  const auto p1 = choose(rule, m1);
  const auto p2 = choose(rule, m2);
  const auto joint = choose(rule, joint_menu);
  AxiomReport r;
  r.axiom = Axiom::Decomposability;
  std::string label;
  for (std::size_t i = 0; i < m1.size(); ++i) {
    for (std::size_t j = 0; j < m2.size(); ++j) {
      const std::size_t k = i * m2.size() + j;
      const double eps = symmetric_ratio_excess(joint[k], p1[i] * p2[j]);
      r.min_epsilon = std::max(r.min_epsilon, eps);
      if (eps > tol) {
        if (label.empty()) label = menu_label(m1) + "*" + menu_label(m2);
        r.witnesses.push_back({label, {joint_menu[k].action.str()}, eps});
      }
    }
  }
  finish(r, tol);
  return r;
}

AxiomReport positivity_check(const Rule& rule, const Menu& menu) {
  const auto p = choose(rule, menu);
  AxiomReport r;
  r.axiom = Axiom::Positivity;
  std::string label;
  for (std::size_t i = 0; i < menu.size(); ++i) {
    if (p[i] > 0.0) continue;
    r.min_epsilon = kInf;
    if (label.empty()) label = menu_label(menu);
    r.witnesses.push_back({label, {menu[i].action.str()}, 0.0});
  }
  finish(r, 0.0);
  return r;
}

AxiomReport continuity_probe(const Rule& rule, const Menu& menu, const ActionId& action,
                             const std::vector<double>& steps) {
  const SpaceKind kind = menu.space().kind;
  if (kind != SpaceKind::RealScalar && kind != SpaceKind::RealVector)
    throw InputError("continuity probe needs a real_scalar or real_vector menu");
  if (steps.empty()) throw InputError("continuity probe needs at least one step");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (!(steps[i] >= 1e-9)) throw InputError("continuity steps must be >= 1e-9");
    if (i && !(steps[i] < steps[i - 1])) throw InputError("continuity steps must decrease");
  }
  const auto where = menu.index_of(action);
  if (!where) throw InputError("action not in menu: " + action.str());

  const auto base = choose(rule, menu);
  std::vector<double> gaps;
  for (double step : steps) {
    std::vector<MenuEntry> entries(menu.entries().begin(), menu.entries().end());
    Outcome& o = entries[*where].outcome;
    if (kind == SpaceKind::RealScalar) {
      o = Outcome::scalar(o.as_scalar() + step);
    } else {
      std::vector<double> v = o.as_vector();
      for (double& x : v) x += step;
      o = Outcome::vector(std::move(v));
    }
    const auto moved = choose(rule, Menu(menu.space(), std::move(entries)));
    double gap = 0.0;
    for (std::size_t i = 0; i < menu.size(); ++i) gap = std::max(gap, std::abs(moved[i] - base[i]));
    gaps.push_back(gap);
  }
  AxiomReport r;
  r.axiom = Axiom::Continuity;
  r.probe = true;
  r.min_epsilon = gaps.back();
  // a rule that does not react at all is trivially continuous
  const double shrink = gaps.front() > 0.0 ? gaps.back() / gaps.front() : 0.0;
  const bool flagged = steps.front() / steps.back() >= 100.0 && shrink > 0.5;
  r.satisfied_at_tol = !flagged;
  if (flagged) r.witnesses.push_back({menu_label(menu), {action.str()}, shrink});
  return r;
}

StrongNeutralityReport strong_neutrality_epsilon(const Rule& rule, const Menu& m1, const Menu& m2,
                                                 double tol, std::optional<LemmaInputs> lemma) {
  const auto mapping = equivalent(m1, m2);
  if (!mapping) throw InputError("menus not equivalent");
  const auto p1 = choose(rule, m1);
  const auto p2 = choose(rule, m2);
  StrongNeutralityReport out;
  AxiomReport& r = out.report;
  r.axiom = Axiom::StrongNeutrality;
  std::string label;
  for (std::size_t i = 0; i < m1.size(); ++i) {
    const std::size_t j = (*mapping)[i];
    const double eps = symmetric_ratio_excess(p1[i], p2[j]);
    r.min_epsilon = std::max(r.min_epsilon, eps);
    if (eps > tol) {
      if (label.empty()) label = menu_label(m1) + "~" + menu_label(m2);
      r.witnesses.push_back({label, {m1[i].action.str(), m2[j].action.str()}, eps});
    }
  }
  finish(r, tol);
  if (lemma) {
    const double bound = (1.0 + lemma->eps_neut) * (1.0 + lemma->eps_decomp) * (1.0 + lemma->eps_decomp);
    out.lemma_bound_holds = 1.0 + r.min_epsilon <= bound * (1.0 + 1e-12);
  }
  return out;
}

namespace {

IdentityCheck identity_from(double pa, double pa2, double p0, double p1, long long n, double tol) {
  IdentityCheck out;
  out.n = n;
  const double nn = static_cast<double>(n);
  // Compare logarithms: p^n underflows long before the identity stops making sense.
  const double lhs = pa > 0.0 && p0 > 0.0 ? std::log(pa) + nn * std::log(p0) : -kInf;
  const double rhs = pa2 > 0.0 && p1 > 0.0 ? std::log(pa2) + nn * std::log(p1) : -kInf;
  if (lhs == -kInf && rhs == -kInf) {
    out.discrepancy = 0.0;
  } else if (lhs == -kInf || rhs == -kInf) {
    out.discrepancy = kInf;
  } else {
    out.discrepancy = std::abs(lhs - rhs);
  }
  out.holds = out.discrepancy <= tol;
  return out;
}

std::pair<double, double> scalar_pair(const Menu& menu, const ActionId& a, const ActionId& a2) {
  if (menu.space().kind != SpaceKind::RealScalar)
    throw InputError("cross-menu identity needs a real_scalar menu");
  const auto ia = menu.index_of(a);
  const auto ib = menu.index_of(a2);
  if (!ia || !ib) throw InputError("identity actions must belong to the menu");
  const double x = menu[*ia].outcome.as_scalar();
  const double y = menu[*ib].outcome.as_scalar();
  if (!(x > y)) throw InputError("cross-menu identity needs o(a) > o(a2)");
  return {x, y};
}

}  // namespace

IdentityCheck cross_menu_identity_check(const Rule& rule, const Menu& menu, const ActionId& a,
                                        const ActionId& a2, double tol) {
  const auto [x, y] = scalar_pair(menu, a, a2);
  for (const auto& e : menu.entries()) {
    const double v = e.outcome.as_scalar();
    if (v != std::floor(v) || std::abs(v) > 1e15)
      throw InputError("cross-menu identity needs integer outcomes; use the rational form");
  }
  const auto p = choose(rule, menu);
  const auto b = choose(rule, unit_binary_menu());
  return identity_from(p[*menu.index_of(a)], p[*menu.index_of(a2)], b[0], b[1],
                       static_cast<long long>(x - y), tol);
}

long long common_denominator(const Menu& menu, long long max_denominator) {
  if (menu.space().kind != SpaceKind::RealScalar)
    throw InputError("rational scaling needs a real_scalar menu");
  long long k = 1;
  for (const auto& e : menu.entries()) {
    const double v = e.outcome.as_scalar();
    long long d = 1;
    while (d <= max_denominator) {
      const double scaled = v * static_cast<double>(d);
      if (std::abs(scaled - std::round(scaled)) <= 1e-9 * std::max(1.0, std::abs(scaled))) break;
      ++d;
    }
    if (d > max_denominator) throw InputError("outcome is not a rational with small denominator");
    k = std::lcm(k, d);
    if (k > max_denominator) throw InputError("common denominator too large");
  }
  return k;
}

IdentityCheck cross_menu_identity_check_rational(const Rule& rule, const Menu& menu,
                                                 const ActionId& a, const ActionId& a2, double tol) {
  const auto [x, y] = scalar_pair(menu, a, a2);
  const long long k = common_denominator(menu);
  // Phi^k(A, k o) = Phi(A, o), and Phi^k on the unit binary menu is Phi on {0, 1/k}.
  const auto p = choose(rule, menu);
  const Menu scaled_unit = Menu::scalar({{"b0", 0.0}, {"b1", 1.0 / static_cast<double>(k)}});
  const auto b = choose(rule, scaled_unit);
  const long long n = std::llround((x - y) * static_cast<double>(k));
  IdentityCheck out = identity_from(p[*menu.index_of(a)], p[*menu.index_of(a2)], b[0], b[1], n, tol);
  out.k = k;
  return out;
}

AxiomReport merge_reports(const std::vector<AxiomReport>& reports) {
  AxiomReport out;
  if (reports.empty()) return out;
  out.axiom = reports.front().axiom;
  out.probe = reports.front().probe;
  out.instances_checked = 0;
  for (const auto& r : reports) {
    out.min_epsilon = std::max(out.min_epsilon, r.min_epsilon);
    out.satisfied_at_tol = out.satisfied_at_tol && r.satisfied_at_tol;
    out.instances_checked += r.instances_checked;
    out.witnesses.insert(out.witnesses.end(), r.witnesses.begin(), r.witnesses.end());
  }
  std::sort(out.witnesses.begin(), out.witnesses.end(), witness_before);
  return out;
}

}  // namespace choicekit
