#include "choicekit/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace choicekit {

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

std::uint64_t Rng::next() { return engine_(); }

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::size_t Rng::index(std::size_t lo, std::size_t hi) {
  const std::size_t span = hi - lo + 1;
  return lo + std::min(span - 1, static_cast<std::size_t>(uniform() * static_cast<double>(span)));
}

namespace {

std::pair<std::size_t, std::size_t> size_range(const Json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer() ||
      j[0].get<long long>() < 0 || j[1].get<long long>() < j[0].get<long long>())
    throw InputError(std::string(what) + " must be [lo, hi] with 0 <= lo <= hi");
  return {j[0].get<std::size_t>(), j[1].get<std::size_t>()};
}

}  // namespace

CorpusSpec corpus_spec_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("corpus spec must be an object");
  CorpusSpec s;
  if (j.contains("space")) s.space = space_from_json(j["space"]);
  if (j.contains("menu_count")) {
    if (!j["menu_count"].is_number_integer() || j["menu_count"].get<long long>() < 1)
      throw InputError("menu_count must be a positive integer");
    s.menu_count = j["menu_count"].get<std::size_t>();
  }
  if (j.contains("actions_per_menu")) s.actions_per_menu = size_range(j["actions_per_menu"], "actions_per_menu");
  if (s.actions_per_menu.first < 1) throw InputError("menus need at least one action");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer()) throw InputError("seed must be an integer");
    s.seed = j["seed"].is_number_unsigned() ? j["seed"].get<std::uint64_t>()
                                            : static_cast<std::uint64_t>(j["seed"].get<std::int64_t>());
  }
  if (j.contains("outcome")) {
    const auto& o = j["outcome"];
    if (!o.is_object()) throw InputError("outcome sampler must be an object");
    if (o.contains("min")) s.value_min = number_from_json(o["min"]);
    if (o.contains("max")) s.value_max = number_from_json(o["max"]);
    if (o.contains("integer")) s.integer = o["integer"].get<bool>();
    if (o.contains("sigma_max")) s.sigma_max = number_from_json(o["sigma_max"]);
    if (o.contains("support_size")) s.support_size = size_range(o["support_size"], "support_size");
    if (o.contains("stream_length")) s.stream_length = size_range(o["stream_length"], "stream_length");
  }
  if (!(s.value_min <= s.value_max) || !std::isfinite(s.value_min) || !std::isfinite(s.value_max))
    throw InputError("outcome range must be finite with min <= max");
  if (!(s.sigma_max >= 0.0)) throw InputError("sigma_max must be >= 0");
  if (s.support_size.first < 1) throw InputError("support_size must start at 1 or more");
  if (s.integer && std::floor(s.value_max) < std::ceil(s.value_min))
    throw InputError("integer outcome range contains no integer");
  return s;
}

Json corpus_spec_to_json(const CorpusSpec& s) {
  return {{"space", space_to_json(s.space)},
          {"menu_count", s.menu_count},
          {"actions_per_menu", {s.actions_per_menu.first, s.actions_per_menu.second}},
          {"seed", s.seed},
          {"outcome",
           {{"min", s.value_min},
            {"max", s.value_max},
            {"integer", s.integer},
            {"sigma_max", s.sigma_max},
            {"support_size", {s.support_size.first, s.support_size.second}},
            {"stream_length", {s.stream_length.first, s.stream_length.second}}}}};
}

namespace {

double draw_value(Rng& rng, const CorpusSpec& s) {
  if (s.integer) {
    const auto lo = static_cast<long long>(std::ceil(s.value_min));
    const auto hi = static_cast<long long>(std::floor(s.value_max));
    return static_cast<double>(lo + static_cast<long long>(rng.index(0, static_cast<std::size_t>(hi - lo))));
  }
  return rng.uniform(s.value_min, s.value_max);
}

Outcome draw_outcome(Rng& rng, const CorpusSpec& s) {
  const OutcomeSpace& space = s.space;
  switch (space.kind) {
    case SpaceKind::RealScalar:
      return Outcome::scalar(draw_value(rng, s));
    case SpaceKind::RealVector: {
      std::vector<double> v(space.dim);
      for (double& x : v) x = draw_value(rng, s);
      return Outcome::vector(std::move(v));
    }
    case SpaceKind::MeanStdDev: {
      const double m = draw_value(rng, s);
      return Outcome::mean_stddev(m, rng.uniform(0.0, s.sigma_max));
    }
    case SpaceKind::DiscreteDistribution: {
      const std::size_t k = rng.index(s.support_size.first, s.support_size.second);
      std::set<double> support;
      for (int tries = 0; support.size() < k && tries < 1000; ++tries) support.insert(draw_value(rng, s));
      std::vector<double> weights(support.size());
      double total = 0.0;
      for (double& w : weights) total += w = rng.uniform(0.05, 1.0);
      for (double& w : weights) w /= total;
      return Outcome::distribution({support.begin(), support.end()}, std::move(weights));
    }
    case SpaceKind::PrizeStream: {
      const std::size_t len = rng.index(s.stream_length.first, s.stream_length.second);
      PrizeStream z;
      for (std::size_t i = 0; i < len; ++i) z.push_back(space.alphabet[rng.index(0, space.alphabet.size() - 1)]);
      return Outcome::stream(std::move(z));
    }
    case SpaceKind::Matrix: {
      const auto d = static_cast<Eigen::Index>(space.dim);
      for (int tries = 0; tries < 1000; ++tries) {
        Eigen::MatrixXd m(d, d);
        for (Eigen::Index r = 0; r < d; ++r)
          for (Eigen::Index c = 0; c < d; ++c) m(r, c) = draw_value(rng, s);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
        const auto& sv = svd.singularValues();
        if (sv(d - 1) > 0.0 && sv(0) / sv(d - 1) < 1e6) return Outcome::matrix(std::move(m));
      }
      throw InputError("outcome range admits no well-conditioned matrices");
    }
  }
  throw InputError("unknown space");
}

}  // namespace

std::vector<Menu> generate_corpus(const CorpusSpec& spec) {
  Rng rng(spec.seed);
  std::vector<Menu> out;
  out.reserve(spec.menu_count);
  for (std::size_t m = 0; m < spec.menu_count; ++m) {
    const std::size_t k = rng.index(spec.actions_per_menu.first, spec.actions_per_menu.second);
    std::vector<MenuEntry> entries;
    for (std::size_t a = 0; a < k; ++a)
      entries.push_back({ActionId("a" + std::to_string(a + 1)), draw_outcome(rng, spec)});
    out.emplace_back(spec.space, std::move(entries));
  }
  return out;
}

}  // namespace choicekit
