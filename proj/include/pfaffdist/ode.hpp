#pragma once

#include <functional>
#include <span>
#include <vector>

namespace pfaffdist {

struct OdeOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  double initial_step = 1e-3;
  long max_steps = 2'000'000;
};

struct OdeStats {
  long accepted = 0;
  long rejected = 0;
};

// dy/dt = rhs(t, y) written into dydt.
using OdeRhs =
    std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

// Dormand-Prince 5(4) with PI step control from t0 to t1. Throws
// Error(Convergence) when the step size underflows or max_steps is reached.
std::vector<double> integrate_dopri5(const OdeRhs& rhs, double t0, double t1,
                                     std::vector<double> y0, const OdeOptions& opts = {},
                                     OdeStats* stats = nullptr);

}  // namespace pfaffdist
