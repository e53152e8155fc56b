#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "choicekit/json_io.hpp"
#include "choicekit/menu.hpp"

namespace choicekit {

/// Parameters of a seeded random corpus. Real components are drawn uniformly
/// from [value_min, value_max] (rounded when `integer`), standard deviations
/// from [0, sigma_max], distribution supports and stream lengths from their
/// ranges.
struct CorpusSpec {
  OutcomeSpace space = OutcomeSpace::real_scalar();
  std::size_t menu_count = 10;
  std::pair<std::size_t, std::size_t> actions_per_menu{2, 5};
  double value_min = -5.0;
  double value_max = 5.0;
  bool integer = false;
  double sigma_max = 3.0;
  std::pair<std::size_t, std::size_t> support_size{1, 4};
  std::pair<std::size_t, std::size_t> stream_length{0, 4};
  std::uint64_t seed = 1;
};

/// {"space", "menu_count", "actions_per_menu": [lo, hi], "seed",
///  "outcome": {"min", "max", "integer", "sigma_max", "support_size": [lo, hi],
///              "stream_length": [lo, hi]}}; omitted keys keep their defaults.
CorpusSpec corpus_spec_from_json(const Json& j);
Json corpus_spec_to_json(const CorpusSpec& spec);

/// Deterministic in the spec on every platform: the generator is mt19937_64
/// and all maps from its output to numbers are written out here.
std::vector<Menu> generate_corpus(const CorpusSpec& spec);

/// Small seeded generator shared by the corpus and the tests.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  double uniform();  // [0, 1)
  double uniform(double lo, double hi);
  std::size_t index(std::size_t lo, std::size_t hi);  // inclusive range
  std::uint64_t next();

 private:
  std::mt19937_64 engine_;
};

}  // namespace choicekit
