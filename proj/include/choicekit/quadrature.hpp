#pragma once

#include <cstddef>
#include <functional>

namespace choicekit {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  // Tightens the target to rel_tol * |coarse estimate| for small integrals, so
  // tail probabilities keep their leading digits. Only safe when the first
  // panels already see the integrand's mass. 0 disables.
  double rel_tol = 0.0;
  int max_depth = 40;
  // The interval is first cut into this many panels; each gets an equal share
  // of abs_tol. Keeps narrow peaks from slipping between the first samples.
  int initial_panels = 32;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;  // false when some branch hit max_depth
};

/// Adaptive Simpson integration of f over [a, b].
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts = {});

}  // namespace choicekit
