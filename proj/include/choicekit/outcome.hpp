#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "choicekit/error.hpp"

namespace choicekit {

enum class SpaceKind {
  RealScalar,
  RealVector,
  MeanStdDev,
  DiscreteDistribution,
  PrizeStream,
  Matrix,
};

std::string to_string(SpaceKind kind);
SpaceKind space_kind_from_string(const std::string& name);

/// Describes an outcome space together with the parameters that fix its shape.
///
/// `dim` applies to RealVector (vector length) and Matrix (d x d). `moment_order`
/// applies to DiscreteDistribution and is the number of cumulants a continuous
/// utility representation may depend on. `alphabet` lists the prize labels of a
/// PrizeStream space.
struct OutcomeSpace {
  SpaceKind kind = SpaceKind::RealScalar;
  std::size_t dim = 1;
  std::size_t moment_order = 0;
  std::vector<std::string> alphabet;

  static OutcomeSpace real_scalar();
  static OutcomeSpace real_vector(std::size_t d);
  static OutcomeSpace mean_stddev();
  static OutcomeSpace discrete_distribution(std::size_t moment_order);
  static OutcomeSpace prize_stream(std::vector<std::string> alphabet);
  static OutcomeSpace matrix(std::size_t d);

  friend bool operator==(const OutcomeSpace&, const OutcomeSpace&) = default;
};

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;
};

/// Finite-support distribution, support sorted ascending.
struct Distribution {
  std::vector<double> support;
  std::vector<double> probs;
};

using PrizeStream = std::vector<std::string>;

/// An immutable element of one of the outcome spaces. Construct through the
/// named factories; each one validates the value invariants of its space.
class Outcome {
 public:
  using Value = std::variant<double, std::vector<double>, MeanStd, Distribution,
                             PrizeStream, Eigen::MatrixXd>;

  static Outcome scalar(double x);
  static Outcome vector(std::vector<double> x);
  static Outcome mean_stddev(double mean, double stddev);
  /// Sorts the support; rejects non-positive probabilities, duplicate support
  /// points, and totals further than 1e-12 from one.
  static Outcome distribution(std::vector<double> support, std::vector<double> probs);
  static Outcome point_mass(double at);
  static Outcome stream(PrizeStream prizes);
  /// Rejects singular matrices.
  static Outcome matrix(Eigen::MatrixXd m);

  SpaceKind kind() const;
  const Value& value() const { return value_; }

  double as_scalar() const;
  const std::vector<double>& as_vector() const;
  const MeanStd& as_mean_stddev() const;
  const Distribution& as_distribution() const;
  const PrizeStream& as_stream() const;
  const Eigen::MatrixXd& as_matrix() const;

  /// True when the value has the kind and shape required by `space`.
  bool conforms_to(const OutcomeSpace& space) const;

 private:
  explicit Outcome(Value v) : value_(std::move(v)) {}
  friend Outcome compose(const Outcome&, const Outcome&);
  friend Outcome make_distribution_unchecked(Distribution d);

  Value value_;
};

/// The combination x*y of outcomes of unrelated actions. Order matters for
/// prize streams (concatenation) and matrices (product x·y).
Outcome compose(const Outcome& x, const Outcome& y);

/// The irrelevant outcome e with e*x = x*e = x.
Outcome identity(const OutcomeSpace& space);

enum class Side { Left, Right };

/// Left: x2 = s*x. Right: x = s*x2.
struct Compensation {
  Side side;
  Outcome s;
};

/// Finds an outcome bridging x and x2. Throws Error("no compensating outcome")
/// when the space admits neither direction for this pair.
Compensation compensate(const Outcome& x, const Outcome& x2);

/// First `n` cumulants (mean, variance, ...) of a finite-support distribution.
std::vector<double> cumulants(const Distribution& x, std::size_t n);
std::vector<double> cumulants(const Outcome& x, std::size_t n);

/// ln|det x| computed from the LU factors, safe against over/underflow.
double log_abs_det(const Eigen::MatrixXd& x);

/// Component-wise comparison within `tol`. Prize streams compare exactly.
bool approx_equal(const Outcome& x, const Outcome& y, double tol);

/// Equality tolerance used for neutrality and menu equivalence: exact for
/// prize streams, 1e-9 otherwise.
double default_equality_tol(SpaceKind kind);

/// Total order over outcomes of one kind (lexicographic over components).
/// Returns <0, 0, >0.
int compare(const Outcome& x, const Outcome& y);

/// Human readable rendering, used in reports.
std::string describe(const Outcome& x);

}  // namespace choicekit
