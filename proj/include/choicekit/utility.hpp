#pragma once

#include <concepts>
#include <map>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "choicekit/outcome.hpp"

namespace choicekit {

/// u(x) = beta * x
struct LinearUtility {
  double beta = 0.0;
};

/// u(x) = w . x, covering state-weighted acts and point-mass discounting on a
/// finite time grid.
struct WeightedSumUtility {
  std::vector<double> weights;
};

/// u(m, sigma) = gamma1 * m + gamma2 * sigma^2
struct MeanVarianceUtility {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
};

/// u(x) = sum_l gamma_l * kappa_l(x)
struct CumulantUtility {
  std::vector<double> gammas;
};

/// u(z) = sum_p w(p) * #{l : z_l = p}
struct PrizeCountUtility {
  std::map<std::string, double> weights;
};

/// u(x) = beta * ln|det x|
struct LogDetUtility {
  double beta = 0.0;
};

/// A solution of u(x*y) = u(x) + u(y) on one outcome space. Every form is
/// linear in its parameters: u(x) = parameters() . features(space, x).
class UtilityRepresentation {
 public:
  using Form = std::variant<LinearUtility, WeightedSumUtility, MeanVarianceUtility,
                            CumulantUtility, PrizeCountUtility, LogDetUtility>;

  // Implicit from any single form, e.g. `UtilityRepresentation u = LinearUtility{2.0};`
  template <class T>
    requires(!std::same_as<std::remove_cvref_t<T>, UtilityRepresentation> &&
             std::constructible_from<Form, T &&>)
  UtilityRepresentation(T&& form) : form_(std::forward<T>(form)) {}  // NOLINT

  /// The all-zero representation of `space`.
  static UtilityRepresentation zero(const OutcomeSpace& space);
  /// Rebuilds a representation of `space` from a flat parameter vector laid
  /// out as parameters() returns it.
  static UtilityRepresentation from_parameters(const OutcomeSpace& space,
                                               const std::vector<double>& params);

  SpaceKind kind() const;
  const Form& form() const { return form_; }

  /// Flat parameters. Prize weights follow the order of the space alphabet
  /// when a space is given, else the map's key order.
  std::vector<double> parameters() const;
  std::vector<double> parameters(const OutcomeSpace& space) const;

  /// Throws InputError on kind mismatch or an unknown prize label.
  double evaluate(const Outcome& x) const;

 private:
  Form form_;
};

inline double evaluate(const UtilityRepresentation& u, const Outcome& x) { return u.evaluate(x); }

/// Feature vector phi(x) with u(x) = params . phi(x) for the representation
/// family of `space`.
std::vector<double> utility_features(const OutcomeSpace& space, const Outcome& x);

/// Number of free parameters of the representation family of `space`.
std::size_t parameter_count(const OutcomeSpace& space);

}  // namespace choicekit
