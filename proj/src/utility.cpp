#include "choicekit/utility.hpp"

#include <algorithm>
#include <cmath>

namespace choicekit {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_kind(const Outcome& x, SpaceKind expected) {
  if (x.kind() != expected) throw InputError("utility and outcome live in different spaces");
}

}  // namespace

UtilityRepresentation UtilityRepresentation::zero(const OutcomeSpace& space) {
  return from_parameters(space, std::vector<double>(parameter_count(space), 0.0));
}

UtilityRepresentation UtilityRepresentation::from_parameters(const OutcomeSpace& space,
                                                             const std::vector<double>& params) {
  if (params.size() != parameter_count(space))
    throw InputError("wrong number of utility parameters for space " + to_string(space.kind));
  switch (space.kind) {
    case SpaceKind::RealScalar: return LinearUtility{params[0]};
    case SpaceKind::RealVector: return WeightedSumUtility{params};
    case SpaceKind::MeanStdDev: return MeanVarianceUtility{params[0], params[1]};
    case SpaceKind::DiscreteDistribution: return CumulantUtility{params};
    case SpaceKind::PrizeStream: {
      PrizeCountUtility u;
      for (std::size_t i = 0; i < space.alphabet.size(); ++i) u.weights[space.alphabet[i]] = params[i];
      return u;
    }
    case SpaceKind::Matrix: return LogDetUtility{params[0]};
  }
  throw Error("unreachable outcome kind");
}

SpaceKind UtilityRepresentation::kind() const { return static_cast<SpaceKind>(form_.index()); }

std::vector<double> UtilityRepresentation::parameters() const {
  return std::visit(
      Overloaded{
          [](const LinearUtility& u) { return std::vector<double>{u.beta}; },
          [](const WeightedSumUtility& u) { return u.weights; },
          [](const MeanVarianceUtility& u) { return std::vector<double>{u.gamma1, u.gamma2}; },
          [](const CumulantUtility& u) { return u.gammas; },
          [](const PrizeCountUtility& u) {
            std::vector<double> out;
            for (const auto& [_, w] : u.weights) out.push_back(w);
            return out;
          },
          [](const LogDetUtility& u) { return std::vector<double>{u.beta}; },
      },
      form_);
}

std::vector<double> UtilityRepresentation::parameters(const OutcomeSpace& space) const {
  if (const auto* prizes = std::get_if<PrizeCountUtility>(&form_)) {
    std::vector<double> out;
    for (const auto& p : space.alphabet) {
      auto it = prizes->weights.find(p);
      out.push_back(it == prizes->weights.end() ? 0.0 : it->second);
    }
    return out;
  }
  return parameters();
}

double UtilityRepresentation::evaluate(const Outcome& x) const {
  return std::visit(
      Overloaded{
          [&](const LinearUtility& u) {
            require_kind(x, SpaceKind::RealScalar);
            return u.beta * x.as_scalar();
          },
          [&](const WeightedSumUtility& u) {
            require_kind(x, SpaceKind::RealVector);
            const auto& v = x.as_vector();
            if (v.size() != u.weights.size()) throw InputError("utility and outcome dimensions differ");
            double acc = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) acc += u.weights[i] * v[i];
            return acc;
          },
          [&](const MeanVarianceUtility& u) {
            require_kind(x, SpaceKind::MeanStdDev);
            const auto& ms = x.as_mean_stddev();
            return u.gamma1 * ms.mean + u.gamma2 * ms.stddev * ms.stddev;
          },
          [&](const CumulantUtility& u) {
            require_kind(x, SpaceKind::DiscreteDistribution);
            const auto kappa = cumulants(x.as_distribution(), u.gammas.size());
            double acc = 0.0;
            for (std::size_t l = 0; l < kappa.size(); ++l) acc += u.gammas[l] * kappa[l];
            return acc;
          },
          [&](const PrizeCountUtility& u) {
            require_kind(x, SpaceKind::PrizeStream);
            double acc = 0.0;
            for (const auto& prize : x.as_stream()) {
              auto it = u.weights.find(prize);
              if (it == u.weights.end()) throw InputError("no utility weight for prize " + prize);
              acc += it->second;
            }
            return acc;
          },
          [&](const LogDetUtility& u) {
            require_kind(x, SpaceKind::Matrix);
            return u.beta * log_abs_det(x.as_matrix());
          },
      },
      form_);
}

std::size_t parameter_count(const OutcomeSpace& space) {
  switch (space.kind) {
    case SpaceKind::RealScalar: return 1;
    case SpaceKind::RealVector: return space.dim;
    case SpaceKind::MeanStdDev: return 2;
    case SpaceKind::DiscreteDistribution: return space.moment_order;
    case SpaceKind::PrizeStream: return space.alphabet.size();
    case SpaceKind::Matrix: return 1;
  }
  return 0;
}

std::vector<double> utility_features(const OutcomeSpace& space, const Outcome& x) {
  require_kind(x, space.kind);
  switch (space.kind) {
    case SpaceKind::RealScalar: return {x.as_scalar()};
    case SpaceKind::RealVector: return x.as_vector();
    case SpaceKind::MeanStdDev: {
      const auto& ms = x.as_mean_stddev();
      return {ms.mean, ms.stddev * ms.stddev};
    }
    case SpaceKind::DiscreteDistribution: return cumulants(x.as_distribution(), space.moment_order);
    case SpaceKind::PrizeStream: {
      std::vector<double> counts(space.alphabet.size(), 0.0);
      for (const auto& prize : x.as_stream()) {
        auto it = std::find(space.alphabet.begin(), space.alphabet.end(), prize);
        if (it == space.alphabet.end()) throw InputError("prize not in alphabet: " + prize);
        counts[static_cast<std::size_t>(it - space.alphabet.begin())] += 1.0;
      }
      return counts;
    }
    case SpaceKind::Matrix: return {log_abs_det(x.as_matrix())};
  }
  throw Error("unreachable outcome kind");
}

}  // namespace choicekit
