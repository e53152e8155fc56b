#include "choicekit/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace choicekit {

namespace {

struct Simpson {
  const std::function<double(double)>& f;
  int max_depth;
  QuadratureResult& out;

  double eval(double x) {
    ++out.evaluations;
    return f(x);
  }

  // Whole-interval estimate `whole` uses fa, fm, fb; recursion halves until the
  // two-half estimate agrees with it to 15 * tol.
  double recurse(double a, double b, double fa, double fm, double fb, double whole, double tol,
                 int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = eval(lm);
    const double frm = eval(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double diff = left + right - whole;
    if (depth >= max_depth) {
      out.converged = false;
      out.error_estimate += std::abs(diff) / 15.0;
      return left + right + diff / 15.0;
    }
    if (std::abs(diff) <= 15.0 * tol) {
      out.error_estimate += std::abs(diff) / 15.0;
      return left + right + diff / 15.0;
    }
    return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
  }
};

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts) {
  QuadratureResult out;
  if (a == b) return out;
  const int panels = opts.initial_panels < 1 ? 1 : opts.initial_panels;
  const double width = (b - a) / panels;
  Simpson s{f, opts.max_depth, out};
  std::vector<double> xs(2 * panels + 1), fs(2 * panels + 1);
  for (int i = 0; i <= 2 * panels; ++i) {
    xs[i] = i == 2 * panels ? b : a + 0.5 * i * width;
    fs[i] = s.eval(xs[i]);
  }
  std::vector<double> wholes(panels);
  double coarse = 0.0;
  for (int i = 0; i < panels; ++i) {
    wholes[i] = (xs[2 * i + 2] - xs[2 * i]) / 6.0 * (fs[2 * i] + 4.0 * fs[2 * i + 1] + fs[2 * i + 2]);
    coarse += wholes[i];
  }
  double target = opts.abs_tol;
  if (opts.rel_tol > 0.0 && coarse != 0.0) target = std::min(target, opts.rel_tol * std::abs(coarse));
  const double tol = std::max(target, 1e-300) / panels;
  for (int i = 0; i < panels; ++i)
    out.value += s.recurse(xs[2 * i], xs[2 * i + 2], fs[2 * i], fs[2 * i + 1], fs[2 * i + 2], wholes[i],
                           tol, 0);
  return out;
}

}  // namespace choicekit
