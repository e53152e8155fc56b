#include "choicekit/commands.hpp"

#include <glob.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "choicekit/axioms.hpp"
#include "choicekit/corpus.hpp"
#include "choicekit/extract.hpp"
#include "choicekit/json_io.hpp"

namespace choicekit {

namespace {

namespace fs = std::filesystem;

constexpr std::size_t kTextWitnessCap = 5;

std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string fixed(double x, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

struct Corpus {
  std::vector<Menu> menus;
  std::vector<std::string> names;
  TabularRule observed;  // probabilities carried by menu files
  std::map<std::string, std::string> label_to_name;
};

std::vector<std::string> expand_glob(const std::string& pattern) {
  glob_t g{};
  const int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
  std::vector<std::string> out;
  if (rc == 0)
    for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
  globfree(&g);
  if (out.empty()) throw InputError("no menu files match " + pattern);
  std::sort(out.begin(), out.end());
  return out;
}

CorpusSpec load_spec(const std::string& path, std::optional<std::uint64_t> seed) {
  CorpusSpec spec = corpus_spec_from_json(read_json_file(path));
  if (seed) spec.seed = *seed;
  return spec;
}

std::string generated_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "menu_%04zu.json", i + 1);
  return buf;
}

Corpus load_corpus(const std::string& menus_glob, const std::string& spec_path,
                   std::optional<std::uint64_t> seed) {
  if (menus_glob.empty() == spec_path.empty()) throw InputError("give exactly one of --menus or --corpus");
  Corpus c;
  if (!menus_glob.empty()) {
    for (const auto& path : expand_glob(menus_glob)) {
      MenuFile mf = [&] {
        try {
          return menu_file_from_json(read_json_file(path));
        } catch (const InputError& e) {
          throw InputError(path + ": " + e.what());
        }
      }();
      if (mf.probabilities) c.observed.add(mf.menu, *mf.probabilities);
      c.menus.push_back(std::move(mf.menu));
      c.names.push_back(fs::path(path).filename().string());
    }
  } else {
    c.menus = generate_corpus(load_spec(spec_path, seed));
    for (std::size_t i = 0; i < c.menus.size(); ++i) c.names.push_back(generated_name(i));
  }
  for (std::size_t i = 1; i < c.menus.size(); ++i)
    if (c.menus[i].space() != c.menus[0].space()) throw InputError("menus mix outcome spaces");
  for (std::size_t i = 0; i < c.menus.size(); ++i) c.label_to_name[menu_label(c.menus[i])] = c.names[i];
  return c;
}

Rule load_rule(const std::string& path, const Corpus* corpus = nullptr) {
  Rule rule = rule_from_json(read_json_file(path));
  if (corpus && !corpus->observed.table.empty()) {
    TabularRule t = corpus->observed;
    t.fallback = std::make_shared<const Rule>(std::move(rule));
    return t;
  }
  return rule;
}

// Witness menus are canonical hashes ("h", "h1*h2", "h1~h2"); show file names.
void rename_witnesses(AxiomReport& r, const std::map<std::string, std::string>& names) {
  for (auto& w : r.witnesses) {
    std::string out, part;
    for (char ch : w.menu + '\0') {
      if (ch == '*' || ch == '~' || ch == '\0') {
        auto it = names.find(part);
        out += it == names.end() ? part : it->second;
        if (ch) out += ch;
        part.clear();
      } else {
        part += ch;
      }
    }
    w.menu = out;
  }
}

struct CheckResult {
  Json json;
  bool passed = true;
  std::vector<std::string> text;
};

CheckResult from_report(const AxiomReport& r, const std::string& note = "") {
  CheckResult c{report_to_json(r), r.satisfied_at_tol, {}};
  std::string line = to_string(r.axiom);
  line.resize(std::max<std::size_t>(line.size(), 18), ' ');
  line += (r.satisfied_at_tol ? "PASS" : "FAIL");
  line += "  min_epsilon=" + fmt(r.min_epsilon) + "  instances=" + std::to_string(r.instances_checked);
  if (r.probe) line += "  (probe)";
  if (!note.empty()) line += "  " + note;
  c.text.push_back(line);
  for (std::size_t i = 0; i < r.witnesses.size() && i < kTextWitnessCap; ++i) {
    const auto& w = r.witnesses[i];
    std::string actions;
    for (const auto& a : w.actions) actions += (actions.empty() ? "" : " vs ") + a;
    c.text.push_back("  witness menu=" + w.menu + " actions=" + actions + " ratio=" + fmt(w.ratio));
  }
  if (r.witnesses.size() > kTextWitnessCap)
    c.text.push_back("  ... " + std::to_string(r.witnesses.size() - kTextWitnessCap) + " more (see --json)");
  return c;
}

Menu relabeled_copy(const Menu& m) {
  std::vector<MenuEntry> entries;
  for (std::size_t i = m.size(); i-- > 0;)
    entries.push_back({ActionId("r" + std::to_string(m.size() - i)), m[i].outcome});
  return Menu(m.space(), std::move(entries));
}

CheckResult identity_check(const Rule& rule, const Corpus& c, double tol) {
  double worst = 0.0;
  std::vector<Witness> witnesses;
  Json ks = Json::array();
  std::size_t instances = 0;
  for (std::size_t m = 0; m < c.menus.size(); ++m) {
    const Menu& menu = c.menus[m];
    long long k = common_denominator(menu);
    ks.push_back(k);
    for (const auto& a : menu.entries()) {
      for (const auto& b : menu.entries()) {
        if (!(a.outcome.as_scalar() > b.outcome.as_scalar())) continue;
        const auto r = cross_menu_identity_check_rational(rule, menu, a.action, b.action, tol);
        ++instances;
        worst = std::max(worst, r.discrepancy);
        if (!r.holds) witnesses.push_back({c.names[m], {a.action.str(), b.action.str()}, r.discrepancy});
      }
    }
  }
  std::sort(witnesses.begin(), witnesses.end(), [](const Witness& x, const Witness& y) {
    if (x.ratio != y.ratio) return x.ratio > y.ratio;
    return std::tie(x.menu, x.actions) < std::tie(y.menu, y.actions);
  });
  AxiomReport r;
  r.min_epsilon = worst;
  r.satisfied_at_tol = worst <= tol;
  r.witnesses = witnesses;
  r.instances_checked = instances;
  CheckResult out = from_report(r);
  out.json["axiom"] = "cross_menu_identity";
  out.json["k"] = ks;
  out.text.front().replace(0, 18, "cross_menu_identity ");
  return out;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

int cmd_check(const std::string& rule_path, const std::string& menus, const std::string& spec,
              std::optional<std::uint64_t> seed, const std::string& axioms, double tol, bool json,
              std::ostream& out) {
  const Corpus c = load_corpus(menus, spec, seed);
  const Rule rule = load_rule(rule_path, &c);
  const SpaceKind kind = c.menus.front().space().kind;
  const bool metric = kind == SpaceKind::RealScalar || kind == SpaceKind::RealVector;

  std::vector<std::string> wanted;
  bool explicit_list = true;
  if (axioms == "all") {
    wanted = {"neutrality", "decomposability", "positivity", "continuity", "strong_neutrality"};
    explicit_list = false;
  } else if (axioms.empty() || axioms == "default") {
    wanted = {"neutrality", "decomposability", "positivity", "continuity"};
    explicit_list = false;
  } else {
    wanted = split_list(axioms);
  }

  std::vector<CheckResult> results;
  for (const auto& name : wanted) {
    if (name == "identity" || name == "cross_menu_identity") {
      if (kind != SpaceKind::RealScalar) throw InputError("identity check needs real_scalar menus");
      results.push_back(identity_check(rule, c, tol));
      continue;
    }
    const Axiom axiom = axiom_from_string(name);
    std::vector<AxiomReport> parts;
    const std::size_t n = c.menus.size();
    switch (axiom) {
      case Axiom::Neutrality:
        for (const auto& m : c.menus) parts.push_back(neutrality_epsilon(rule, m, tol));
        break;
      case Axiom::Decomposability:
        for (std::size_t i = 0; i < n; ++i)
          parts.push_back(decomposability_epsilon(rule, c.menus[i], c.menus[(i + 1) % n], tol));
        break;
      case Axiom::Positivity:
        for (const auto& m : c.menus) parts.push_back(positivity_check(rule, m));
        break;
      case Axiom::Continuity:
        if (!metric) {
          if (explicit_list) throw InputError("continuity probe needs real_scalar or real_vector menus");
          continue;
        }
        for (const auto& m : c.menus)
          for (const auto& e : m.entries()) parts.push_back(continuity_probe(rule, m, e.action));
        break;
      case Axiom::StrongNeutrality:
        for (const auto& m : c.menus) {
          const Menu copy = relabeled_copy(m);
          parts.push_back(strong_neutrality_epsilon(rule, m, copy, tol).report);
        }
        break;
    }
    AxiomReport merged = merge_reports(parts);
    merged.axiom = axiom;
    rename_witnesses(merged, c.label_to_name);
    results.push_back(from_report(merged));
  }

  bool passed = true;
  for (const auto& r : results) passed = passed && r.passed;
  if (json) {
    Json reports = Json::array();
    for (const auto& r : results) reports.push_back(r.json);
    out << Json{{"rule", rule_to_json(rule)},
                {"menus", c.names},
                {"tol", tol},
                {"reports", reports},
                {"passed", passed}}
               .dump(2)
        << "\n";
  } else {
    out << "rule: " << rule_to_json(rule).dump() << "\n";
    out << "menus: " << c.menus.size() << "  tol: " << fmt(tol) << "\n";
    for (const auto& r : results)
      for (const auto& line : r.text) out << line << "\n";
    out << "result: " << (passed ? "PASS" : "FAIL") << "\n";
  }
  return passed ? 0 : 1;
}

OutcomeSpace parse_space_arg(const std::string& arg) {
  if (fs::exists(arg)) return space_from_json(read_json_file(arg));
  if (!arg.empty() && arg.front() == '{') {
    try {
      return space_from_json(Json::parse(arg));
    } catch (const Json::exception& e) {
      throw InputError(std::string("bad --space JSON: ") + e.what());
    }
  }
  // kind[:param], e.g. real_vector:3, discrete_distribution:4, prize_stream:g,h
  const auto colon = arg.find(':');
  const std::string kind = arg.substr(0, colon);
  Json j{{"kind", kind}};
  if (colon != std::string::npos) {
    const std::string param = arg.substr(colon + 1);
    const SpaceKind k = space_kind_from_string(kind);
    if (k == SpaceKind::PrizeStream) {
      j["alphabet"] = split_list(param);
    } else {
      long long v = 0;
      try {
        v = std::stoll(param);
      } catch (const std::exception&) {
        throw InputError("bad space parameter '" + param + "'");
      }
      j[k == SpaceKind::DiscreteDistribution ? "moment_order" : "dim"] = v;
    }
  }
  return space_from_json(j);
}

std::vector<std::pair<std::string, double>> named_parameters(const UtilityRepresentation& u,
                                                             const OutcomeSpace& space) {
  const auto p = u.parameters(space);
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::string name;
    switch (space.kind) {
      case SpaceKind::RealScalar:
      case SpaceKind::Matrix: name = "beta"; break;
      case SpaceKind::RealVector: name = "w" + std::to_string(i + 1); break;
      case SpaceKind::MeanStdDev:
      case SpaceKind::DiscreteDistribution: name = "gamma" + std::to_string(i + 1); break;
      case SpaceKind::PrizeStream: name = "w(" + space.alphabet[i] + ")"; break;
    }
    out.emplace_back(name, p[i]);
  }
  return out;
}

int cmd_fit(const std::string& rule_path, const std::string& space_arg, bool json, std::ostream& out) {
  const Rule rule = load_rule(rule_path);
  const OutcomeSpace space = parse_space_arg(space_arg);
  const FitResult fit = fit_utility_representation(rule, space);
  if (json) {
    out << Json{{"space", space_to_json(space)},
                {"utility", utility_to_json(fit.utility)},
                {"condition_number", fit.condition_number}}
               .dump(2)
        << "\n";
  } else {
    out << "space: " << space_to_json(space).dump() << "\n";
    for (const auto& [name, v] : named_parameters(fit.utility, space)) out << name << "=" << fmt(v) << "\n";
    out << "condition_number=" << fmt(fit.condition_number) << "\n";
  }
  return 0;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path.string());
  f << content;
}

int cmd_certify(const std::string& rule_path, const std::string& menus, const std::string& spec,
                std::optional<std::uint64_t> seed, const std::string& utility_arg, const std::string& out_path,
                std::optional<double> max_delta, bool json, std::ostream& out) {
  const Corpus c = load_corpus(menus, spec, seed);
  const Rule rule = load_rule(rule_path, &c);
  const OutcomeSpace& space = c.menus.front().space();
  Json fit_info;
  UtilityRepresentation u = UtilityRepresentation::zero(space);
  if (utility_arg.empty() || utility_arg == "auto") {
    const UtilityRepresentation start = space.kind == SpaceKind::RealScalar
                                            ? UtilityRepresentation(LinearUtility{extract_beta(rule)})
                                            : fit_utility_representation(rule, space).utility;
    if (space.kind == SpaceKind::RealScalar && !std::isfinite(start.parameters()[0]))
      throw Error("rule not positive at probe");
    u = refine_for_closeness(rule, c.menus, start);
    fit_info = {{"mode", "auto"}, {"probe_fit", utility_to_json(start)}};
  } else {
    u = utility_from_json(read_json_file(utility_arg));
    fit_info = {{"mode", "given"}};
  }
  const ClosenessCertificate cert = certify_closeness(rule, c.menus, u, c.names);
  Json cj = certificate_to_json(cert);
  cj["fit"] = fit_info;
  if (!out_path.empty()) {
    fs::path p(out_path);
    if (fs::is_directory(p)) p /= "certificate.json";
    write_file(p, cj.dump(2) + "\n");
  }
  const bool ok = !max_delta || cert.delta <= *max_delta;
  if (json) {
    out << cj.dump(2) << "\n";
  } else {
    out << "utility: " << utility_to_json(cert.utility).dump() << "\n";
    out << "delta=" << fmt(cert.delta) << "  corpus_size=" << cert.corpus_size << "\n";
    if (max_delta) out << "max_delta=" << fmt(*max_delta) << "  " << (ok ? "PASS" : "FAIL") << "\n";
  }
  return ok ? 0 : 1;
}

int cmd_demo_probit(const std::string& shock_kind, double param, bool json, std::ostream& out) {
  ShockSpec shock;
  if (shock_kind == "gaussian") {
    shock = ShockSpec::gaussian(param);
  } else if (shock_kind == "gumbel") {
    shock = ShockSpec::gumbel(param);
  } else {
    throw InputError("--shock must be gaussian or gumbel");
  }
  const Rule rule = Rule::iaru(shock);
  const Menu unit = unit_binary_menu();
  const double p1 = choose(rule, unit)[1];
  const Menu square = power(unit, 2);
  const double p11 = choose(rule, square)[diagonal_index(2, 1, 2)];
  const double margin = p11 - p1 * p1;
  const bool violated = std::abs(margin) > 1e-8;
  if (json) {
    out << Json{{"shock", {{"kind", shock_kind}, {"param", param}}},
                {"binary_p_b1", p1},
                {"square_p_b1b1", p11},
                {"product_p_b1_squared", p1 * p1},
                {"margin", margin},
                {"decomposability_violated", violated}}
               .dump(2)
        << "\n";
  } else {
    out << "shock: " << shock_kind << "(" << fmt(param) << ")\n";
    out << "binary    p(b1)      = " << fixed(p1, 6) << "\n";
    out << "square    p((b1,b1)) = " << fixed(p11, 6) << "\n";
    out << "product   p(b1)^2    = " << fixed(p1 * p1, 6) << "\n";
    out << "margin               = " << fixed(margin, 6) << "\n";
    out << (violated ? "decomposability violated\n" : "no violation above 1e-8\n");
  }
  return 0;
}

int cmd_gen(const std::string& spec_path, const std::string& out_dir, std::optional<std::uint64_t> seed,
            std::ostream& out) {
  if (out_dir.empty()) throw InputError("gen needs --out DIR");
  const CorpusSpec spec = load_spec(spec_path, seed);
  const auto menus = generate_corpus(spec);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw InputError("cannot create " + out_dir + ": " + ec.message());
  for (std::size_t i = 0; i < menus.size(); ++i)
    write_file(fs::path(out_dir) / generated_name(i), menu_to_json(menus[i]).dump(2) + "\n");
  out << "wrote " << menus.size() << " menus to " << out_dir << " (seed " << spec.seed << ")\n";
  return 0;
}

int cmd_upsilon(const std::string& rule_path, const std::string& menus, const std::string& spec,
                std::optional<std::uint64_t> seed, int n_max, std::optional<double> eps_decomp, bool json,
                std::ostream& out) {
  const Corpus c = load_corpus(menus, spec, seed);
  const Rule rule = load_rule(rule_path, &c);
  Json all = Json::array();
  for (std::size_t m = 0; m < c.menus.size(); ++m) {
    const auto est = upsilon(rule, c.menus[m], n_max, eps_decomp, true);
    Json dist = Json::object();
    for (std::size_t a = 0; a < est.distribution.size(); ++a)
      dist[est.distribution.actions()[a].str()] = est.distribution[a];
    Json entry{{"menu_id", c.names[m]}, {"n_used", est.n_used}, {"upsilon", dist}, {"history", est.history}};
    entry["bound"] = est.bound ? Json(*est.bound) : Json(nullptr);
    if (json) {
      all.push_back(entry);
      continue;
    }
    out << c.names[m] << "  n=" << est.n_used;
    if (est.bound) out << "  envelope=" << fmt(*est.bound);
    out << "\n";
    for (std::size_t a = 0; a < est.distribution.size(); ++a)
      out << "  " << est.distribution.actions()[a].str() << " " << fixed(est.distribution[a], 10) << "\n";
  }
  if (json) out << all.dump(2) << "\n";
  return 0;
}

int cmd_bound(double eps_neut, double eps_decomp, double scale, bool json, std::ostream& out) {
  if (!(scale >= 0.0)) throw InputError("--stability-scale must be >= 0");
  const UlamBound b = ulam_bound(eps_neut, eps_decomp, [scale](double x) { return scale * x; });
  if (json) {
    out << Json{{"eps_neut", eps_neut},
                {"eps_decomp", eps_decomp},
                {"eps_neut_reduced", b.eps_neut_reduced},
                {"delta_theorem5", b.delta_theorem5},
                {"delta_banach", b.delta_banach}}
               .dump(2)
        << "\n";
  } else {
    out << "eps_neut_reduced=" << fmt(b.eps_neut_reduced) << "\n";
    out << "delta=" << fmt(b.delta_theorem5) << "\n";
    out << "delta_banach=" << fmt(b.delta_banach) << "\n";
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stochastic choice rules over composable outcome spaces"};
  app.name("choicekit");
  app.require_subcommand(1);

  std::string rule, menus, spec, axioms = "default", space, utility = "auto", out_path, shock = "gaussian";
  double tol = 1e-9, param = 1.0, eps_neut = 0.0, eps_decomp_arg = 0.0, scale = 1.0;
  std::optional<double> eps_decomp, max_delta;
  std::optional<std::uint64_t> seed;
  int n_max = 12;
  bool json = false;

  auto corpus_opts = [&](CLI::App* sub) {
    sub->add_option("--menus", menus, "Glob of menu JSON files");
    sub->add_option("--corpus", spec, "Corpus spec JSON file");
    sub->add_option("--seed", seed, "Override the corpus seed");
  };

  auto* check = app.add_subcommand("check", "Measure axioms on a corpus");
  check->add_option("--rule", rule, "Rule JSON file")->required();
  corpus_opts(check);
  check->add_option("--axioms", axioms,
                    "Comma list of neutrality,decomposability,positivity,continuity,strong_neutrality,"
                    "identity; or 'all'");
  check->add_option("--tol", tol, "Pass/fail tolerance");
  check->add_flag("--json", json, "JSON report");

  auto* fit = app.add_subcommand("fit", "Fit a utility representation");
  fit->add_option("--rule", rule, "Rule JSON file")->required();
  fit->add_option("--space", space, "Space JSON file, inline JSON, or kind[:param]")->required();
  fit->add_flag("--json", json, "JSON report");

  auto* certify = app.add_subcommand("certify", "Certify closeness to a logit rule");
  certify->add_option("--rule", rule, "Rule JSON file")->required();
  corpus_opts(certify);
  certify->add_option("--utility", utility, "'auto' or a utility JSON file");
  certify->add_option("--out", out_path, "Write the certificate JSON here");
  certify->add_option("--max-delta", max_delta, "Exit 1 when delta exceeds this");
  certify->add_flag("--json", json, "Print the certificate JSON");

  auto* demo = app.add_subcommand("demo-probit", "Probit decomposability counterexample");
  demo->add_option("--shock", shock, "gaussian or gumbel");
  demo->add_option("--param", param, "sigma (gaussian) or beta (gumbel)");
  demo->add_flag("--json", json, "JSON report");

  auto* gen = app.add_subcommand("gen", "Write a seeded random corpus");
  gen->add_option("--corpus", spec, "Corpus spec JSON file")->required();
  gen->add_option("--out", out_path, "Output directory")->required();
  gen->add_option("--seed", seed, "Override the spec seed");

  auto* ups = app.add_subcommand("upsilon", "Limit rule from n-fold power menus");
  ups->add_option("--rule", rule, "Rule JSON file")->required();
  corpus_opts(ups);
  ups->add_option("--n-max", n_max, "Power used for the estimate");
  ups->add_option("--eps-decomp", eps_decomp, "Decomposability epsilon for the envelope");
  ups->add_flag("--json", json, "JSON report");

  auto* bound = app.add_subcommand("bound", "Stability bound arithmetic");
  bound->add_option("--eps-neut", eps_neut, "Neutrality epsilon")->required();
  bound->add_option("--eps-decomp", eps_decomp_arg, "Decomposability epsilon")->required();
  bound->add_option("--stability-scale", scale, "d(x) = scale * x");
  bound->add_flag("--json", json, "JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (*check) return cmd_check(rule, menus, spec, seed, axioms, tol, json, out);
    if (*fit) return cmd_fit(rule, space, json, out);
    if (*certify) return cmd_certify(rule, menus, spec, seed, utility, out_path, max_delta, json, out);
    if (*demo) return cmd_demo_probit(shock, param, json, out);
    if (*gen) return cmd_gen(spec, out_path, seed, out);
    if (*ups) return cmd_upsilon(rule, menus, spec, seed, n_max, eps_decomp, json, out);
    if (*bound) return cmd_bound(eps_neut, eps_decomp_arg, scale, json, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace choicekit
