#include "choicekit/outcome.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

namespace choicekit {

namespace {

constexpr double kProbSumTol = 1e-12;
constexpr double kMergeRelTol = 1e-12;
constexpr double kMaxCondition = 1e12;

bool points_collide(double p, double q) {
  return std::abs(p - q) <= kMergeRelTol * std::max({1.0, std::abs(p), std::abs(q)});
}

void require_same_kind(const Outcome& x, const Outcome& y) {
  if (x.kind() != y.kind()) throw InputError("incompatible outcome spaces");
}

void require_same_shape(const Outcome& x, const Outcome& y) {
  require_same_kind(x, y);
  switch (x.kind()) {
    case SpaceKind::RealVector:
      if (x.as_vector().size() != y.as_vector().size())
        throw InputError("incompatible outcome spaces");
      break;
    case SpaceKind::Matrix:
      if (x.as_matrix().rows() != y.as_matrix().rows())
        throw InputError("incompatible outcome spaces");
      break;
    default:
      break;
  }
}

// Sorts (point, mass) pairs and merges colliding points. Colliding points move
// to their mass-weighted mean so the first moment is preserved.
Distribution merge_support(std::vector<std::pair<double, double>> atoms) {
  std::sort(atoms.begin(), atoms.end());
  Distribution out;
  out.support.reserve(atoms.size());
  out.probs.reserve(atoms.size());
  std::size_t i = 0;
  while (i < atoms.size()) {
    const double anchor = atoms[i].first;
    double mass = 0.0;
    double moment = 0.0;
    std::size_t j = i;
    while (j < atoms.size() && points_collide(anchor, atoms[j].first)) {
      mass += atoms[j].second;
      moment += atoms[j].second * atoms[j].first;
      ++j;
    }
    out.support.push_back(j - i == 1 ? anchor : moment / mass);
    out.probs.push_back(mass);
    i = j;
  }
  const double total = std::accumulate(out.probs.begin(), out.probs.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-14) {
    for (double& p : out.probs) p /= total;
  }
  return out;
}

double condition_number(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) == 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / sv(sv.size() - 1);
}

// Greedy deconvolution: finds s with s*x = target, or nothing. The smallest
// remaining residual point must be (next point of s) + min(x).
std::optional<Distribution> deconvolve(const Distribution& target, const Distribution& x) {
  std::vector<std::pair<double, double>> residual;
  for (std::size_t i = 0; i < target.support.size(); ++i)
    residual.emplace_back(target.support[i], target.probs[i]);
  const double x_min = x.support.front();
  const double px_min = x.probs.front();
  constexpr double kMassTol = 1e-12;

  std::vector<std::pair<double, double>> s_atoms;
  const std::size_t max_iter = target.support.size();
  for (std::size_t iter = 0; iter <= max_iter; ++iter) {
    auto first = std::find_if(residual.begin(), residual.end(),
                              [](const auto& a) { return a.second > kMassTol; });
    if (first == residual.end()) break;
    const double point = first->first - x_min;
    const double mass = first->second / px_min;
    s_atoms.emplace_back(point, mass);
    for (std::size_t k = 0; k < x.support.size(); ++k) {
      const double at = point + x.support[k];
      auto hit = std::find_if(residual.begin(), residual.end(),
                              [&](const auto& a) { return points_collide(a.first, at); });
      if (hit == residual.end()) return std::nullopt;
      hit->second -= mass * x.probs[k];
      if (hit->second < -kMassTol) return std::nullopt;
    }
  }
  for (const auto& a : residual)
    if (std::abs(a.second) > kMassTol) return std::nullopt;
  double total = 0.0;
  for (const auto& a : s_atoms) total += a.second;
  if (s_atoms.empty() || std::abs(total - 1.0) > 1e-9) return std::nullopt;
  for (auto& a : s_atoms) a.second /= total;
  return merge_support(std::move(s_atoms));
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::RealScalar: return "real_scalar";
    case SpaceKind::RealVector: return "real_vector";
    case SpaceKind::MeanStdDev: return "mean_stddev";
    case SpaceKind::DiscreteDistribution: return "discrete_distribution";
    case SpaceKind::PrizeStream: return "prize_stream";
    case SpaceKind::Matrix: return "matrix";
  }
  return "unknown";
}

SpaceKind space_kind_from_string(const std::string& name) {
  for (SpaceKind k : {SpaceKind::RealScalar, SpaceKind::RealVector, SpaceKind::MeanStdDev,
                      SpaceKind::DiscreteDistribution, SpaceKind::PrizeStream, SpaceKind::Matrix}) {
    if (to_string(k) == name) return k;
  }
  throw InputError("unknown outcome space kind: " + name);
}

OutcomeSpace OutcomeSpace::real_scalar() { return {}; }

OutcomeSpace OutcomeSpace::real_vector(std::size_t d) {
  if (d < 1) throw InputError("vector dimension must be at least 1");
  OutcomeSpace s;
  s.kind = SpaceKind::RealVector;
  s.dim = d;
  return s;
}

OutcomeSpace OutcomeSpace::mean_stddev() {
  OutcomeSpace s;
  s.kind = SpaceKind::MeanStdDev;
  return s;
}

OutcomeSpace OutcomeSpace::discrete_distribution(std::size_t moment_order) {
  OutcomeSpace s;
  s.kind = SpaceKind::DiscreteDistribution;
  s.moment_order = moment_order;
  return s;
}

OutcomeSpace OutcomeSpace::prize_stream(std::vector<std::string> alphabet) {
  if (alphabet.empty()) throw InputError("prize alphabet must be nonempty");
  OutcomeSpace s;
  s.kind = SpaceKind::PrizeStream;
  s.alphabet = std::move(alphabet);
  return s;
}

OutcomeSpace OutcomeSpace::matrix(std::size_t d) {
  if (d < 1) throw InputError("matrix dimension must be at least 1");
  OutcomeSpace s;
  s.kind = SpaceKind::Matrix;
  s.dim = d;
  return s;
}

Outcome Outcome::scalar(double x) {
  if (!std::isfinite(x)) throw InputError("outcome must be finite");
  return Outcome(x);
}

Outcome Outcome::vector(std::vector<double> x) {
  if (x.empty()) throw InputError("vector outcome must be nonempty");
  for (double v : x)
    if (!std::isfinite(v)) throw InputError("outcome must be finite");
  return Outcome(std::move(x));
}

Outcome Outcome::mean_stddev(double mean, double stddev) {
  if (!std::isfinite(mean) || !std::isfinite(stddev)) throw InputError("outcome must be finite");
  if (stddev < 0.0) throw InputError("standard deviation must be nonnegative");
  return Outcome(MeanStd{mean, stddev});
}

Outcome Outcome::distribution(std::vector<double> support, std::vector<double> probs) {
  if (support.empty() || support.size() != probs.size())
    throw InputError("distribution needs matching nonempty support and probs");
  std::vector<std::pair<double, double>> atoms;
  double total = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (!std::isfinite(support[i])) throw InputError("support points must be finite");
    if (!(probs[i] > 0.0)) throw InputError("distribution probabilities must be strictly positive");
    total += probs[i];
    atoms.emplace_back(support[i], probs[i]);
  }
  if (std::abs(total - 1.0) > kProbSumTol)
    throw InputError("distribution probabilities must sum to 1");
  std::sort(atoms.begin(), atoms.end());
  Distribution d;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i > 0 && atoms[i].first == atoms[i - 1].first)
      throw InputError("distribution support points must be distinct");
    d.support.push_back(atoms[i].first);
    d.probs.push_back(atoms[i].second);
  }
  return Outcome(std::move(d));
}

Outcome Outcome::point_mass(double at) { return distribution({at}, {1.0}); }

Outcome Outcome::stream(PrizeStream prizes) { return Outcome(std::move(prizes)); }

Outcome Outcome::matrix(Eigen::MatrixXd m) {
  if (m.rows() == 0 || m.rows() != m.cols()) throw InputError("matrix outcome must be square");
  if (!m.allFinite()) throw InputError("outcome must be finite");
  if (!std::isfinite(log_abs_det(m))) throw InputError("matrix outcome must be invertible");
  return Outcome(std::move(m));
}

Outcome make_distribution_unchecked(Distribution d) { return Outcome(std::move(d)); }

SpaceKind Outcome::kind() const { return static_cast<SpaceKind>(value_.index()); }

double Outcome::as_scalar() const { return std::get<double>(value_); }
const std::vector<double>& Outcome::as_vector() const { return std::get<std::vector<double>>(value_); }
const MeanStd& Outcome::as_mean_stddev() const { return std::get<MeanStd>(value_); }
const Distribution& Outcome::as_distribution() const { return std::get<Distribution>(value_); }
const PrizeStream& Outcome::as_stream() const { return std::get<PrizeStream>(value_); }
const Eigen::MatrixXd& Outcome::as_matrix() const { return std::get<Eigen::MatrixXd>(value_); }

bool Outcome::conforms_to(const OutcomeSpace& space) const {
  if (kind() != space.kind) return false;
  switch (space.kind) {
    case SpaceKind::RealVector:
      return as_vector().size() == space.dim;
    case SpaceKind::Matrix:
      return static_cast<std::size_t>(as_matrix().rows()) == space.dim;
    case SpaceKind::PrizeStream:
      return std::all_of(as_stream().begin(), as_stream().end(), [&](const std::string& p) {
        return std::find(space.alphabet.begin(), space.alphabet.end(), p) != space.alphabet.end();
      });
    default:
      return true;
  }
}

Outcome compose(const Outcome& x, const Outcome& y) {
  require_same_shape(x, y);
  switch (x.kind()) {
    case SpaceKind::RealScalar:
      return Outcome(x.as_scalar() + y.as_scalar());
    case SpaceKind::RealVector: {
      std::vector<double> out = x.as_vector();
      const auto& other = y.as_vector();
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += other[i];
      return Outcome(std::move(out));
    }
    case SpaceKind::MeanStdDev: {
      const auto& a = x.as_mean_stddev();
      const auto& b = y.as_mean_stddev();
      return Outcome(MeanStd{a.mean + b.mean, std::hypot(a.stddev, b.stddev)});
    }
    case SpaceKind::DiscreteDistribution: {
      const auto& a = x.as_distribution();
      const auto& b = y.as_distribution();
      std::vector<std::pair<double, double>> atoms;
      atoms.reserve(a.support.size() * b.support.size());
      for (std::size_t i = 0; i < a.support.size(); ++i)
        for (std::size_t j = 0; j < b.support.size(); ++j)
          atoms.emplace_back(a.support[i] + b.support[j], a.probs[i] * b.probs[j]);
      return Outcome(merge_support(std::move(atoms)));
    }
    case SpaceKind::PrizeStream: {
      PrizeStream out = x.as_stream();
      out.insert(out.end(), y.as_stream().begin(), y.as_stream().end());
      return Outcome(std::move(out));
    }
    case SpaceKind::Matrix:
      return Outcome(Eigen::MatrixXd(x.as_matrix() * y.as_matrix()));
  }
  throw Error("unreachable outcome kind");
}

Outcome identity(const OutcomeSpace& space) {
  switch (space.kind) {
    case SpaceKind::RealScalar: return Outcome::scalar(0.0);
    case SpaceKind::RealVector: return Outcome::vector(std::vector<double>(space.dim, 0.0));
    case SpaceKind::MeanStdDev: return Outcome::mean_stddev(0.0, 0.0);
    case SpaceKind::DiscreteDistribution: return Outcome::point_mass(0.0);
    case SpaceKind::PrizeStream: return Outcome::stream({});
    case SpaceKind::Matrix: {
      const auto d = static_cast<Eigen::Index>(space.dim);
      return Outcome::matrix(Eigen::MatrixXd::Identity(d, d));
    }
  }
  throw Error("unreachable outcome kind");
}

Compensation compensate(const Outcome& x, const Outcome& x2) {
  require_same_shape(x, x2);
  switch (x.kind()) {
    case SpaceKind::RealScalar:
      return {Side::Left, Outcome::scalar(x2.as_scalar() - x.as_scalar())};
    case SpaceKind::RealVector: {
      std::vector<double> s = x2.as_vector();
      for (std::size_t i = 0; i < s.size(); ++i) s[i] -= x.as_vector()[i];
      return {Side::Left, Outcome::vector(std::move(s))};
    }
    case SpaceKind::MeanStdDev: {
      const auto& a = x.as_mean_stddev();
      const auto& b = x2.as_mean_stddev();
      if (b.stddev >= a.stddev) {
        return {Side::Left,
                Outcome::mean_stddev(b.mean - a.mean,
                                     std::sqrt(b.stddev * b.stddev - a.stddev * a.stddev))};
      }
      return {Side::Right,
              Outcome::mean_stddev(a.mean - b.mean,
                                   std::sqrt(a.stddev * a.stddev - b.stddev * b.stddev))};
    }
    case SpaceKind::DiscreteDistribution: {
      if (auto s = deconvolve(x2.as_distribution(), x.as_distribution()))
        return {Side::Left, make_distribution_unchecked(std::move(*s))};
      if (auto s = deconvolve(x.as_distribution(), x2.as_distribution()))
        return {Side::Right, make_distribution_unchecked(std::move(*s))};
      throw Error("no compensating outcome");
    }
    case SpaceKind::PrizeStream: {
      const auto& a = x.as_stream();
      const auto& b = x2.as_stream();
      if (a.size() <= b.size() && std::equal(a.begin(), a.end(), b.end() - a.size()))
        return {Side::Left, Outcome::stream(PrizeStream(b.begin(), b.end() - a.size()))};
      if (b.size() <= a.size() && std::equal(b.begin(), b.end(), a.end() - b.size()))
        return {Side::Right, Outcome::stream(PrizeStream(a.begin(), a.end() - b.size()))};
      throw Error("no compensating outcome");
    }
    case SpaceKind::Matrix: {
      const auto& m = x.as_matrix();
      if (condition_number(m) > kMaxCondition)
        throw Error("matrix too ill-conditioned to compensate");
      Eigen::MatrixXd s = x2.as_matrix() * m.inverse();
      return {Side::Left, Outcome::matrix(std::move(s))};
    }
  }
  throw Error("unreachable outcome kind");
}

std::vector<double> cumulants(const Distribution& x, std::size_t n) {
  std::vector<double> kappa(n, 0.0);
  if (n == 0) return kappa;
  double mean = 0.0;
  for (std::size_t i = 0; i < x.support.size(); ++i) mean += x.probs[i] * x.support[i];

  // Central moments; cumulants of order >= 2 are shift invariant, so the
  // recursion on the centred distribution avoids cancellation in raw moments.
  std::vector<double> mu(n + 1, 0.0);
  mu[0] = 1.0;
  for (std::size_t i = 0; i < x.support.size(); ++i) {
    const double c = x.support[i] - mean;
    double power = 1.0;
    for (std::size_t k = 1; k <= n; ++k) {
      power *= c;
      mu[k] += x.probs[i] * power;
    }
  }
  mu[1] = 0.0;

  // kappa_m = mu_m - sum_{k=1}^{m-1} C(m-1, k-1) kappa_k mu_{m-k}
  std::vector<double> k(n + 1, 0.0);
  for (std::size_t m = 1; m <= n; ++m) {
    double acc = mu[m];
    double binom = 1.0;  // C(m-1, 0)
    for (std::size_t j = 1; j < m; ++j) {
      acc -= binom * k[j] * mu[m - j];
      binom = binom * static_cast<double>(m - 1 - (j - 1)) / static_cast<double>(j);
    }
    k[m] = acc;
  }
  k[1] = mean;
  for (std::size_t m = 1; m <= n; ++m) kappa[m - 1] = k[m];
  return kappa;
}

std::vector<double> cumulants(const Outcome& x, std::size_t n) {
  if (x.kind() != SpaceKind::DiscreteDistribution)
    throw InputError("cumulants require a discrete distribution outcome");
  return cumulants(x.as_distribution(), n);
}

double log_abs_det(const Eigen::MatrixXd& x) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(x);
  const Eigen::MatrixXd& packed = lu.matrixLU();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < packed.rows(); ++i) acc += std::log(std::abs(packed(i, i)));
  return acc;
}

bool approx_equal(const Outcome& x, const Outcome& y, double tol) {
  if (x.kind() != y.kind()) return false;
  auto close = [tol](double a, double b) { return std::abs(a - b) <= tol; };
  switch (x.kind()) {
    case SpaceKind::RealScalar:
      return close(x.as_scalar(), y.as_scalar());
    case SpaceKind::RealVector: {
      const auto& a = x.as_vector();
      const auto& b = y.as_vector();
      if (a.size() != b.size()) return false;
      for (std::size_t i = 0; i < a.size(); ++i)
        if (!close(a[i], b[i])) return false;
      return true;
    }
    case SpaceKind::MeanStdDev: {
      const auto& a = x.as_mean_stddev();
      const auto& b = y.as_mean_stddev();
      return close(a.mean, b.mean) && close(a.stddev, b.stddev);
    }
    case SpaceKind::DiscreteDistribution: {
      const auto& a = x.as_distribution();
      const auto& b = y.as_distribution();
      if (a.support.size() != b.support.size()) return false;
      for (std::size_t i = 0; i < a.support.size(); ++i)
        if (!close(a.support[i], b.support[i]) || !close(a.probs[i], b.probs[i])) return false;
      return true;
    }
    case SpaceKind::PrizeStream:
      return x.as_stream() == y.as_stream();
    case SpaceKind::Matrix: {
      const auto& a = x.as_matrix();
      const auto& b = y.as_matrix();
      if (a.rows() != b.rows()) return false;
      return (a - b).cwiseAbs().maxCoeff() <= tol;
    }
  }
  return false;
}

double default_equality_tol(SpaceKind kind) {
  return kind == SpaceKind::PrizeStream ? 0.0 : 1e-9;
}

int compare(const Outcome& x, const Outcome& y) {
  if (x.kind() != y.kind()) return x.kind() < y.kind() ? -1 : 1;
  auto cmp = [](double a, double b) { return a < b ? -1 : (a > b ? 1 : 0); };
  auto lex = [&](const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (int c = cmp(a[i], b[i])) return c;
    return 0;
  };
  switch (x.kind()) {
    case SpaceKind::RealScalar:
      return cmp(x.as_scalar(), y.as_scalar());
    case SpaceKind::RealVector:
      return lex(x.as_vector(), y.as_vector());
    case SpaceKind::MeanStdDev: {
      if (int c = cmp(x.as_mean_stddev().mean, y.as_mean_stddev().mean)) return c;
      return cmp(x.as_mean_stddev().stddev, y.as_mean_stddev().stddev);
    }
    case SpaceKind::DiscreteDistribution: {
      const auto& a = x.as_distribution();
      const auto& b = y.as_distribution();
      if (int c = lex(a.support, b.support)) return c;
      return lex(a.probs, b.probs);
    }
    case SpaceKind::PrizeStream: {
      const auto& a = x.as_stream();
      const auto& b = y.as_stream();
      if (a == b) return 0;
      return a < b ? -1 : 1;
    }
    case SpaceKind::Matrix: {
      const auto& a = x.as_matrix();
      const auto& b = y.as_matrix();
      if (a.rows() != b.rows()) return a.rows() < b.rows() ? -1 : 1;
      for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
          if (int c = cmp(a(i, j), b(i, j))) return c;
      return 0;
    }
  }
  return 0;
}

std::string describe(const Outcome& x) {
  std::ostringstream os;
  switch (x.kind()) {
    case SpaceKind::RealScalar:
      os << format_double(x.as_scalar());
      break;
    case SpaceKind::RealVector: {
      os << "[";
      const auto& v = x.as_vector();
      for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << format_double(v[i]);
      os << "]";
      break;
    }
    case SpaceKind::MeanStdDev:
      os << "(m=" << format_double(x.as_mean_stddev().mean)
         << ", sigma=" << format_double(x.as_mean_stddev().stddev) << ")";
      break;
    case SpaceKind::DiscreteDistribution: {
      const auto& d = x.as_distribution();
      os << "{";
      for (std::size_t i = 0; i < d.support.size(); ++i)
        os << (i ? ", " : "") << format_double(d.support[i]) << ":" << format_double(d.probs[i]);
      os << "}";
      break;
    }
    case SpaceKind::PrizeStream: {
      os << "<";
      const auto& s = x.as_stream();
      for (std::size_t i = 0; i < s.size(); ++i) os << (i ? " " : "") << s[i];
      os << ">";
      break;
    }
    case SpaceKind::Matrix: {
      const auto& m = x.as_matrix();
      os << "[";
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        os << (i ? "; " : "");
        for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? " " : "") << format_double(m(i, j));
      }
      os << "]";
      break;
    }
  }
  return os.str();
}

}  // namespace choicekit
