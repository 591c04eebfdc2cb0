#pragma once

// Literal brute-force counters used as independent references in tests.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <vector>

#include "pfaffdist/metrics.hpp"

namespace oracle {

using pfaffdist::Rational;
using pfaffdist::metrics::PointConfiguration;

inline std::vector<Rational> exact_d2(const PointConfiguration& cfg) {
  std::vector<Rational> d;
  for (const auto& p : cfg.exact_p1()) {
    for (const auto& q : cfg.exact_p2()) {
      const Rational dx = p.x - q.x, dy = p.y - q.y;
      d.push_back(dx * dx + dy * dy);
    }
  }
  return d;
}

inline std::vector<double> float_d2(const PointConfiguration& cfg) {
  std::vector<double> d;
  for (const auto& p : cfg.p1()) {
    for (const auto& q : cfg.p2()) d.push_back(pfaffdist::squared_distance(p, q));
  }
  return d;
}

// Quadruples (p_i, p_j, q_a, q_b) with |p_i q_a| = |p_j q_b|, |i - j| <= wm
// and |a - b| <= wn, looping over all (mn)^2 candidates.
inline std::int64_t quadruples(const PointConfiguration& cfg, double tol, std::int64_t wm,
                               std::int64_t wn) {
  const std::int64_t m = cfg.m(), n = cfg.n();
  std::int64_t count = 0;
  if (cfg.is_exact()) {
    const auto d = exact_d2(cfg);
    for (std::int64_t i = 0; i < m; ++i)
      for (std::int64_t a = 0; a < n; ++a)
        for (std::int64_t j = 0; j < m; ++j)
          for (std::int64_t b = 0; b < n; ++b)
            if (std::llabs(i - j) <= wm && std::llabs(a - b) <= wn && d[i * n + a] == d[j * n + b]) ++count;
  } else {
    const auto d = float_d2(cfg);
    for (std::int64_t i = 0; i < m; ++i)
      for (std::int64_t a = 0; a < n; ++a)
        for (std::int64_t j = 0; j < m; ++j)
          for (std::int64_t b = 0; b < n; ++b) {
            const double u = d[i * n + a], v = d[j * n + b];
            if (std::llabs(i - j) <= wm && std::llabs(a - b) <= wn &&
                std::fabs(u - v) <= tol * std::max(std::fabs(u), std::fabs(v)))
              ++count;
          }
  }
  return count;
}

inline std::int64_t quadruples(const PointConfiguration& cfg, double tol = 1e-9) {
  return quadruples(cfg, tol, static_cast<std::int64_t>(cfg.m()), static_cast<std::int64_t>(cfg.n()));
}

}  // namespace oracle
