#include "choicekit/json_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace choicekit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw InputError(std::string("expected an object with key '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(std::string("missing key '") + key + "'");
  return *it;
}

std::vector<double> numbers(const Json& j) {
  if (!j.is_array()) throw InputError("expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : j) out.push_back(number_from_json(x));
  return out;
}

std::size_t positive_size(const Json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 1)
    throw InputError(std::string(what) + " must be a positive integer");
  return j.get<std::size_t>();
}

}  // namespace

double number_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw InputError("expected a number, got " + j.dump());
}

Json number_to_json(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  return x;
}

OutcomeSpace space_from_json(const Json& j) {
  if (j.is_string()) return space_from_json(Json{{"kind", j}});
  if (!field(j, "kind").is_string()) throw InputError("space kind must be a string");
  const SpaceKind kind = space_kind_from_string(j["kind"].get<std::string>());
  switch (kind) {
    case SpaceKind::RealScalar: return OutcomeSpace::real_scalar();
    case SpaceKind::MeanStdDev: return OutcomeSpace::mean_stddev();
    case SpaceKind::RealVector: return OutcomeSpace::real_vector(positive_size(field(j, "dim"), "dim"));
    case SpaceKind::Matrix: return OutcomeSpace::matrix(positive_size(field(j, "dim"), "dim"));
    case SpaceKind::DiscreteDistribution: {
      std::size_t n = 0;
      if (j.contains("moment_order")) {
        const auto& m = j["moment_order"];
        if (!m.is_number_integer() || m.get<long long>() < 0)
          throw InputError("moment_order must be a nonnegative integer");
        n = m.get<std::size_t>();
      }
      return OutcomeSpace::discrete_distribution(n);
    }
    case SpaceKind::PrizeStream: {
      const auto& a = field(j, "alphabet");
      if (!a.is_array()) throw InputError("alphabet must be an array of strings");
      std::vector<std::string> alphabet;
      for (const auto& p : a) {
        if (!p.is_string()) throw InputError("alphabet must be an array of strings");
        alphabet.push_back(p.get<std::string>());
      }
      return OutcomeSpace::prize_stream(std::move(alphabet));
    }
  }
  throw InputError("unknown space");
}

Json space_to_json(const OutcomeSpace& s) {
  Json j{{"kind", to_string(s.kind)}};
  if (s.kind == SpaceKind::RealVector || s.kind == SpaceKind::Matrix) j["dim"] = s.dim;
  if (s.kind == SpaceKind::DiscreteDistribution) j["moment_order"] = s.moment_order;
  if (s.kind == SpaceKind::PrizeStream) j["alphabet"] = s.alphabet;
  return j;
}

Outcome outcome_from_json(const OutcomeSpace& space, const Json& j) {
  Outcome out = [&] {
    switch (space.kind) {
      case SpaceKind::RealScalar: return Outcome::scalar(number_from_json(j));
      case SpaceKind::RealVector: return Outcome::vector(numbers(j));
      case SpaceKind::MeanStdDev:
        return Outcome::mean_stddev(number_from_json(field(j, "m")), number_from_json(field(j, "sigma")));
      case SpaceKind::DiscreteDistribution:
        return Outcome::distribution(numbers(field(j, "support")), numbers(field(j, "probs")));
      case SpaceKind::PrizeStream: {
        if (!j.is_array()) throw InputError("prize stream must be an array of strings");
        PrizeStream s;
        for (const auto& p : j) {
          if (!p.is_string()) throw InputError("prize stream must be an array of strings");
          s.push_back(p.get<std::string>());
        }
        return Outcome::stream(std::move(s));
      }
      case SpaceKind::Matrix: {
        if (!j.is_array() || j.empty()) throw InputError("matrix must be an array of rows");
        const std::size_t rows = j.size();
        Eigen::MatrixXd m(rows, rows);
        for (std::size_t r = 0; r < rows; ++r) {
          const auto row = numbers(j[r]);
          if (row.size() != rows) throw InputError("matrix must be square");
          for (std::size_t c = 0; c < rows; ++c) m(r, c) = row[c];
        }
        return Outcome::matrix(std::move(m));
      }
    }
    throw InputError("unknown space");
  }();
  if (!out.conforms_to(space)) throw InputError("outcome does not belong to space " + to_string(space.kind));
  return out;
}

Json outcome_to_json(const Outcome& x) {
  switch (x.kind()) {
    case SpaceKind::RealScalar: return x.as_scalar();
    case SpaceKind::RealVector: return x.as_vector();
    case SpaceKind::MeanStdDev: return {{"m", x.as_mean_stddev().mean}, {"sigma", x.as_mean_stddev().stddev}};
    case SpaceKind::DiscreteDistribution:
      return {{"support", x.as_distribution().support}, {"probs", x.as_distribution().probs}};
    case SpaceKind::PrizeStream: return x.as_stream();
    case SpaceKind::Matrix: {
      Json rows = Json::array();
      const auto& m = x.as_matrix();
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
      }
      return rows;
    }
  }
  return nullptr;
}

UtilityRepresentation utility_from_json(const Json& j) {
  if (!field(j, "kind").is_string()) throw InputError("utility kind must be a string");
  switch (space_kind_from_string(j["kind"].get<std::string>())) {
    case SpaceKind::RealScalar: return LinearUtility{number_from_json(field(j, "beta"))};
    case SpaceKind::RealVector: return WeightedSumUtility{numbers(field(j, "weights"))};
    case SpaceKind::MeanStdDev:
      return MeanVarianceUtility{number_from_json(field(j, "gamma1")), number_from_json(field(j, "gamma2"))};
    case SpaceKind::DiscreteDistribution: return CumulantUtility{numbers(field(j, "gammas"))};
    case SpaceKind::PrizeStream: {
      const auto& w = field(j, "weights");
      if (!w.is_object()) throw InputError("prize weights must be an object");
      PrizeCountUtility u;
      for (const auto& [k, v] : w.items()) u.weights[k] = number_from_json(v);
      return u;
    }
    case SpaceKind::Matrix: return LogDetUtility{number_from_json(field(j, "beta"))};
  }
  throw InputError("unknown utility kind");
}

Json utility_to_json(const UtilityRepresentation& u) {
  Json j{{"kind", to_string(u.kind())}};
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, LinearUtility> || std::is_same_v<T, LogDetUtility>) {
          j["beta"] = f.beta;
        } else if constexpr (std::is_same_v<T, WeightedSumUtility>) {
          j["weights"] = f.weights;
        } else if constexpr (std::is_same_v<T, MeanVarianceUtility>) {
          j["gamma1"] = f.gamma1;
          j["gamma2"] = f.gamma2;
        } else if constexpr (std::is_same_v<T, CumulantUtility>) {
          j["gammas"] = f.gammas;
        } else {
          j["weights"] = Json(f.weights);
        }
      },
      u.form());
  return j;
}

MenuFile menu_file_from_json(const Json& j) {
  const OutcomeSpace space = space_from_json(field(j, "space"));
  const auto& actions = field(j, "actions");
  if (!actions.is_array()) throw InputError("actions must be an array");
  std::vector<MenuEntry> entries;
  for (const auto& a : actions) {
    const auto& id = field(a, "id");
    if (!id.is_string()) throw InputError("action id must be a string");
    entries.push_back({ActionId::parse(id.get<std::string>()), outcome_from_json(space, field(a, "outcome"))});
  }
  MenuFile out{Menu(space, std::move(entries)), std::nullopt};
  if (j.contains("probabilities")) {
    const auto& p = j["probabilities"];
    if (!p.is_object()) throw InputError("probabilities must be an object");
    std::map<std::string, double> probs;
    for (const auto& [k, v] : p.items()) probs[ActionId::parse(k).str()] = number_from_json(v);
    std::set<std::string> ids;
    for (const auto& e : out.menu.entries()) ids.insert(e.action.str());
    for (const auto& id : ids)
      if (!probs.count(id)) throw InputError("probabilities omit action " + id);
    for (const auto& [k, v] : probs)
      if (!ids.count(k)) throw InputError("probabilities name unknown action " + k);
    out.probabilities = std::move(probs);
  }
  return out;
}

Menu menu_from_json(const Json& j) { return menu_file_from_json(j).menu; }

Json menu_to_json(const Menu& menu) {
  Json actions = Json::array();
  for (const auto& e : menu.entries())
    actions.push_back({{"id", e.action.str()}, {"outcome", outcome_to_json(e.outcome)}});
  return {{"space", space_to_json(menu.space())}, {"actions", actions}};
}

Rule rule_from_json(const Json& j) {
  const auto& type_j = field(j, "type");
  if (!type_j.is_string()) throw InputError("rule type must be a string");
  const std::string type = type_j.get<std::string>();
  if (type == "mnl") return Rule::mnl(number_from_json(field(j, "beta")));
  if (type == "general_mnl") return Rule::general_mnl(utility_from_json(field(j, "utility")));
  if (type == "uniform") return Rule::uniform();
  if (type == "iaru") {
    const auto& s = field(j, "shock");
    const auto& kind = field(s, "kind");
    const double param = number_from_json(field(s, "param"));
    ShockSpec shock;
    if (kind == "gaussian") {
      shock = ShockSpec::gaussian(param);
    } else if (kind == "gumbel") {
      shock = ShockSpec::gumbel(param);
    } else {
      throw InputError("unknown shock kind " + kind.dump());
    }
    QuadratureOptions q = iaru_quadrature();
    if (j.contains("quadrature_tol")) q.abs_tol = number_from_json(j["quadrature_tol"]);
    return Rule::iaru(shock, q);
  }
  if (type == "perturbed") {
    const auto& seed = field(j, "seed");
    if (!seed.is_number_integer()) throw InputError("seed must be an integer");
    return Rule::perturbed(rule_from_json(field(j, "base")), number_from_json(field(j, "delta")),
                           seed.is_number_unsigned() ? seed.get<std::uint64_t>()
                                                     : static_cast<std::uint64_t>(seed.get<std::int64_t>()));
  }
  if (type == "tabular") {
    TabularRule t;
    if (j.contains("fallback")) t.fallback = std::make_shared<const Rule>(rule_from_json(j["fallback"]));
    if (j.contains("entries")) {
      for (const auto& e : j["entries"]) {
        const Json file{{"space", field(field(e, "menu"), "space")},
                        {"actions", field(field(e, "menu"), "actions")},
                        {"probabilities", field(e, "probabilities")}};
        const MenuFile mf = menu_file_from_json(file);
        t.add(mf.menu, *mf.probabilities);
      }
    }
    return t;
  }
  throw InputError("unknown rule type '" + type + "'");
}

Json rule_to_json(const Rule& rule) {
  return std::visit(
      [](const auto& r) -> Json {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, MnlRule>) {
          return {{"type", "mnl"}, {"beta", number_to_json(r.beta)}};
        } else if constexpr (std::is_same_v<T, GeneralMnlRule>) {
          return {{"type", "general_mnl"}, {"utility", utility_to_json(r.utility)}};
        } else if constexpr (std::is_same_v<T, IaruRule>) {
          return {{"type", "iaru"},
                  {"shock", {{"kind", r.shock.kind == ShockSpec::Kind::Gaussian ? "gaussian" : "gumbel"},
                             {"param", r.shock.param}}}};
        } else if constexpr (std::is_same_v<T, UniformRule>) {
          return {{"type", "uniform"}};
        } else if constexpr (std::is_same_v<T, TabularRule>) {
          Json j{{"type", "tabular"}, {"menus", r.table.size()}};
          if (r.fallback) j["fallback"] = rule_to_json(*r.fallback);
          return j;
        } else {
          return {{"type", "perturbed"}, {"base", rule_to_json(*r.base)}, {"delta", r.delta}, {"seed", r.seed}};
        }
      },
      rule.variant());
}

namespace {

Json witness_to_json(const Witness& w) {
  return {{"menu", w.menu}, {"actions", w.actions}, {"ratio", number_to_json(w.ratio)}};
}

}  // namespace

Json report_to_json(const AxiomReport& r) {
  Json ws = Json::array();
  for (const auto& w : r.witnesses) ws.push_back(witness_to_json(w));
  Json j{{"axiom", to_string(r.axiom)},
         {"min_epsilon", number_to_json(r.min_epsilon)},
         {"satisfied_at_tol", r.satisfied_at_tol},
         {"witness", r.witnesses.empty() ? Json(nullptr) : witness_to_json(r.witnesses.front())},
         {"witnesses", ws},
         {"instances_checked", r.instances_checked}};
  if (r.probe) j["probe"] = true;
  return j;
}

Json certificate_to_json(const ClosenessCertificate& c) {
  Json menus = Json::array();
  for (const auto& m : c.menus) {
    Json shocks = Json::object();
    for (std::size_t i = 0; i < m.actions.size(); ++i) shocks[m.actions[i].str()] = m.shocks[i];
    menus.push_back({{"menu_id", m.menu_id}, {"shocks", shocks}});
  }
  return {{"utility", utility_to_json(c.utility)},
          {"delta", c.delta},
          {"menus", menus},
          {"corpus_size", c.corpus_size}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

}  // namespace choicekit
