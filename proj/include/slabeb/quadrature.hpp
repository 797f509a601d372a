#pragma once

#include <functional>
#include <vector>

namespace slabeb {

struct QuadOptions {
  double rel_tol = 1e-10;
  double abs_floor = 0.0;      // below this, relative control is meaningless
  int max_intervals = 4096;    // ~60 bisection generations on a single panel
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int intervals = 0;
};

/// Adaptive Gauss-Kronrod 15(7) on [a, b]. Worst interval is split first;
/// throws NumericalError (carrying the achieved error) if the budget runs out.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opt = {});

/// Integrates over consecutive panels [p0,p1], [p1,p2], ... so the adaptive
/// rule starts with a split at every known integrand feature.
QuadResult integrate_panels(const std::function<double(double)>& f,
                            std::vector<double> points, const QuadOptions& opt = {});

}  // namespace slabeb
