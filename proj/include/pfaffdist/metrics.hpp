#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pfaffdist/common.hpp"

namespace pfaffdist::metrics {

// Two finite point sets, each sorted by strictly increasing x. Exact rational
// coordinates are kept when the configuration was built from them.
class PointConfiguration {
 public:
  PointConfiguration() = default;
  // Sorts both lists by x. Throws Configuration on tied x within a list or a
  // point shared by both lists.
  static PointConfiguration make(std::vector<Point2> p1, std::vector<Point2> p2,
                                 std::string provenance = {});
  static PointConfiguration make_exact(std::vector<RationalPoint> p1,
                                       std::vector<RationalPoint> p2,
                                       std::string provenance = {});

  const std::vector<Point2>& p1() const { return p1_; }
  const std::vector<Point2>& p2() const { return p2_; }
  std::size_t m() const { return p1_.size(); }
  std::size_t n() const { return p2_.size(); }
  bool is_exact() const { return exact1_.has_value(); }
  const std::vector<RationalPoint>& exact_p1() const { return *exact1_; }
  const std::vector<RationalPoint>& exact_p2() const { return *exact2_; }
  const std::string& provenance() const { return provenance_; }

 private:
  std::vector<Point2> p1_;
  std::vector<Point2> p2_;
  std::optional<std::vector<RationalPoint>> exact1_;
  std::optional<std::vector<RationalPoint>> exact2_;
  std::string provenance_;
};

struct DistanceClass {
  double d_squared = 0.0;              // smallest member
  std::optional<Rational> exact;       // exact value for rational inputs
  std::int64_t multiplicity = 0;
};

struct DistanceHistogram {
  std::vector<DistanceClass> classes;  // increasing d_squared
  std::int64_t total = 0;
  double tol = 0.0;
  bool exact = false;

  std::size_t distinct() const { return classes.size(); }
};

// Class index of each pair (i, i'), stored row-major as ids[i * n + i'].
struct PairClasses {
  DistanceHistogram histogram;
  std::vector<std::int32_t> ids;
};

PairClasses classify_pairs(const PointConfiguration& cfg, double tol = 1e-9);
DistanceHistogram distance_histogram(const PointConfiguration& cfg, double tol = 1e-9);

BigInt energy(const DistanceHistogram& hist);

// Index window floor(c * size); a 1e-9 guard absorbs products such as
// 0.29 * 100 landing just below an integer.
std::int64_t proximity_window(double c, std::size_t size);

BigInt proximity_energy(const PointConfiguration& cfg, double c, double tol = 1e-9);

struct BoundsReport {
  Rational cs_lower;           // (mn)^2 / |D|
  bool cs_satisfied = false;   // E >= cs_lower
  double theorem_bound = 0.0;  // min(m^{3/4} n^{3/4}, m^2, n^2)
  double theorem_ratio = 0.0;  // |D| / theorem_bound
  double ps_bound = 0.0;       // m^{k/(2k-1)} n^{(2k-2)/(2k-1)} + m + n
};

BoundsReport bounds_report(std::int64_t m, std::int64_t n, std::int64_t dcount, const BigInt& e,
                           int k = 2);
double theorem_bound(double m, double n);
double ps_bound(double m, double n, int k);

// Least-squares slope of log(value) against log(size).
double exponent_fit(const std::vector<std::pair<double, double>>& samples);

// Histogram CSV with header `d_squared,multiplicity`.
void write_histogram_csv(std::ostream& out, const DistanceHistogram& hist);
DistanceHistogram read_histogram_csv(std::istream& in);

}  // namespace pfaffdist::metrics
