#include "pfaffdist/ode.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "pfaffdist/common.hpp"

namespace pfaffdist {

namespace {

// Dormand-Prince tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - b* (error weights)
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

std::vector<double> integrate_dopri5(const OdeRhs& rhs, double t0, double t1,
                                     std::vector<double> y, const OdeOptions& opts,
                                     OdeStats* stats) {
  const std::size_t n = y.size();
  if (n == 0 || t0 == t1) return y;
  const double dir = t1 > t0 ? 1.0 : -1.0;
  const double span = std::fabs(t1 - t0);
  double h = std::min(opts.initial_step, span);
  const double h_min = 1e-15 * span;

  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), y_new(n);
  rhs(t0, y, k1);

  double t = t0;
  double err_prev = 1e-4;
  long steps = 0;
  while (dir * (t1 - t) > 0) {
    if (++steps > opts.max_steps) {
      throw Error(ErrorCode::Convergence, fmt::format("ODE step limit reached at t={}", t));
    }
    if (h > std::fabs(t1 - t)) h = std::fabs(t1 - t);
    const double hs = dir * h;

    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + hs * a21 * k1[i];
    rhs(t + c2 * hs, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * hs, tmp, k3);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * hs, tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + c5 * hs, tmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    rhs(t + hs, tmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      y_new[i] = y[i] + hs * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    rhs(t + hs, y_new, k7);

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                             e7 * k7[i]);
      const double scale =
          opts.abs_tol + opts.rel_tol * std::max(std::fabs(y[i]), std::fabs(y_new[i]));
      err = std::max(err, std::fabs(e) / scale);
    }
    if (!std::isfinite(err)) err = 1e10;

    if (err <= 1.0) {
      t += hs;
      y.swap(y_new);
      k1.swap(k7);
      if (stats) ++stats->accepted;
      const double factor =
          err == 0.0 ? 5.0
                     : std::clamp(0.9 * std::pow(err, -0.7 / 5) * std::pow(err_prev, 0.4 / 5),
                                  0.2, 5.0);
      err_prev = std::max(err, 1e-4);
      h *= factor;
    } else {
      if (stats) ++stats->rejected;
      h *= std::max(0.2, 0.9 * std::pow(err, -1.0 / 5));
    }
    if (h < h_min) {
      throw Error(ErrorCode::Convergence, fmt::format("ODE step size underflow at t={}", t));
    }
  }
  return y;
}

}  // namespace pfaffdist
