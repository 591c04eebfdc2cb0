#include "pfaffdist/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>

#include <fmt/format.h>

namespace pfaffdist::metrics {

namespace {

using Int128 = __int128;

template <class P, class X>
void sort_by_x(std::vector<P>& pts, X get_x, const char* which) {
  std::stable_sort(pts.begin(), pts.end(), [&](const P& a, const P& b) { return get_x(a) < get_x(b); });
  for (std::size_t k = 1; k < pts.size(); ++k) {
    if (!(get_x(pts[k - 1]) < get_x(pts[k]))) {
      throw Error(ErrorCode::Configuration, fmt::format("tied x-coordinates in {}", which));
    }
  }
}

// Groups sorted keys into classes; `same(a, b)` decides whether the key at
// sorted position b joins the class of its predecessor a.
template <class Same>
std::vector<std::int32_t> group(const std::vector<std::uint32_t>& order, Same same,
                                std::vector<std::uint32_t>& class_first) {
  std::vector<std::int32_t> ids(order.size());
  std::int32_t cls = -1;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k == 0 || !same(order[k - 1], order[k])) {
      ++cls;
      class_first.push_back(order[k]);
    }
    ids[order[k]] = cls;
  }
  return ids;
}

BigInt lcm_big(const BigInt& a, const BigInt& b) {
  return a / boost::multiprecision::gcd(a, b) * b;
}

}  // namespace

PointConfiguration PointConfiguration::make(std::vector<Point2> p1, std::vector<Point2> p2,
                                            std::string provenance) {
  for (const auto* list : {&p1, &p2}) {
    for (const Point2& p : *list) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        throw Error(ErrorCode::Configuration, "non-finite point coordinate");
      }
    }
  }
  sort_by_x(p1, [](const Point2& p) { return p.x; }, "P1");
  sort_by_x(p2, [](const Point2& p) { return p.x; }, "P2");
  std::set<std::pair<double, double>> seen;
  for (const Point2& p : p1) seen.insert({p.x, p.y});
  for (const Point2& p : p2) {
    if (seen.count({p.x, p.y})) {
      throw Error(ErrorCode::Configuration,
                  fmt::format("duplicate point ({}, {}) in both sets", p.x, p.y));
    }
  }
  PointConfiguration cfg;
  cfg.p1_ = std::move(p1);
  cfg.p2_ = std::move(p2);
  cfg.provenance_ = std::move(provenance);
  return cfg;
}

PointConfiguration PointConfiguration::make_exact(std::vector<RationalPoint> p1,
                                                  std::vector<RationalPoint> p2,
                                                  std::string provenance) {
  sort_by_x(p1, [](const RationalPoint& p) -> const Rational& { return p.x; }, "P1");
  sort_by_x(p2, [](const RationalPoint& p) -> const Rational& { return p.x; }, "P2");
  std::set<std::pair<Rational, Rational>> seen;
  for (const auto& a : p1) seen.insert({a.x, a.y});
  for (const auto& b : p2) {
    if (seen.count({b.x, b.y})) throw Error(ErrorCode::Configuration, "duplicate point in both sets");
  }
  auto to_float = [](const std::vector<RationalPoint>& v) {
    std::vector<Point2> out;
    out.reserve(v.size());
    for (const auto& p : v) out.push_back({p.x.convert_to<double>(), p.y.convert_to<double>()});
    return out;
  };
  PointConfiguration cfg;
  cfg.p1_ = to_float(p1);
  cfg.p2_ = to_float(p2);
  cfg.exact1_ = std::move(p1);
  cfg.exact2_ = std::move(p2);
  cfg.provenance_ = std::move(provenance);
  return cfg;
}

// Index order by (key, index).
template <class K>
void sort_by_key(const std::vector<K>& key, std::vector<std::uint32_t>& order) {
  std::vector<std::pair<K, std::uint32_t>> kv(key.size());
  for (std::uint32_t i = 0; i < key.size(); ++i) kv[i] = {key[i], i};
  std::sort(kv.begin(), kv.end(), [](const auto& a, const auto& b) { return a.first < b.first || (a.first == b.first && a.second < b.second); });
  for (std::size_t i = 0; i < kv.size(); ++i) order[i] = kv[i].second;
}

PairClasses classify_pairs(const PointConfiguration& cfg, double tol) {
  const std::size_t m = cfg.m(), n = cfg.n();
  if (m == 0 || n == 0) throw Error(ErrorCode::Parameter, "both point sets must be non-empty");
  if (!(tol >= 0.0)) throw Error(ErrorCode::Parameter, "tolerance must be non-negative");
  const std::size_t mn = m * n;
  std::vector<std::uint32_t> order(mn);
  std::iota(order.begin(), order.end(), 0u);
  std::vector<std::uint32_t> first;
  PairClasses out;
  out.histogram.tol = tol;
  out.histogram.total = static_cast<std::int64_t>(mn);

  if (cfg.is_exact()) {
    out.histogram.exact = true;
    BigInt den = 1;
    for (const auto* list : {&cfg.exact_p1(), &cfg.exact_p2()}) {
      for (const auto& p : *list) {
        den = lcm_big(den, boost::multiprecision::denominator(p.x));
        den = lcm_big(den, boost::multiprecision::denominator(p.y));
      }
    }
    auto scale = [&](const std::vector<RationalPoint>& v) {
      std::vector<std::pair<BigInt, BigInt>> s;
      for (const auto& p : v) {
        s.emplace_back(boost::multiprecision::numerator(p.x) * (den / boost::multiprecision::denominator(p.x)),
                       boost::multiprecision::numerator(p.y) * (den / boost::multiprecision::denominator(p.y)));
      }
      return s;
    };
    const auto s1 = scale(cfg.exact_p1());
    const auto s2 = scale(cfg.exact_p2());
    const BigInt limit = BigInt(1) << 61;
    bool small = true;
    for (const auto* list : {&s1, &s2}) {
      for (const auto& [x, y] : *list) small = small && abs(x) < limit && abs(y) < limit;
    }
    const Rational den2 = Rational(den * den);
    if (small) {
      auto narrow = [](const std::vector<std::pair<BigInt, BigInt>>& v) {
        std::vector<std::pair<long long, long long>> r;
        for (const auto& [x, y] : v) r.emplace_back(static_cast<long long>(x), static_cast<long long>(y));
        return r;
      };
      const auto t1 = narrow(s1);
      const auto t2 = narrow(s2);
      std::vector<Int128> key(mn);
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          const Int128 dx = static_cast<Int128>(t1[i].first) - t2[j].first;
          const Int128 dy = static_cast<Int128>(t1[i].second) - t2[j].second;
          key[i * n + j] = dx * dx + dy * dy;
        }
      }
      sort_by_key(key, order);
      out.ids = group(order, [&](auto a, auto b) { return key[a] == key[b]; }, first);
      for (auto idx : first) {
        const Int128 v = key[idx];
        const BigInt hi = BigInt(static_cast<unsigned long long>(v >> 64)) << 64;
        const BigInt big = hi + BigInt(static_cast<unsigned long long>(v & ~0ULL));
        const Rational exact = Rational(big) / den2;
        out.histogram.classes.push_back({exact.convert_to<double>(), exact, 0});
      }
    } else {
      std::vector<BigInt> key(mn);
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          const BigInt dx = s1[i].first - s2[j].first;
          const BigInt dy = s1[i].second - s2[j].second;
          key[i * n + j] = dx * dx + dy * dy;
        }
      }
      sort_by_key(key, order);
      out.ids = group(order, [&](auto a, auto b) { return key[a] == key[b]; }, first);
      for (auto idx : first) {
        const Rational exact = Rational(key[idx]) / den2;
        out.histogram.classes.push_back({exact.convert_to<double>(), exact, 0});
      }
    }
  } else {
    std::vector<double> key(mn);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) key[i * n + j] = squared_distance(cfg.p1()[i], cfg.p2()[j]);
    }
    sort_by_key(key, order);
    out.ids = group(order, [&](auto a, auto b) {
      return key[b] - key[a] <= tol * std::max(std::fabs(key[a]), std::fabs(key[b]));
    }, first);
    for (auto idx : first) out.histogram.classes.push_back({key[idx], std::nullopt, 0});
  }
  for (auto id : out.ids) ++out.histogram.classes[id].multiplicity;
  return out;
}

DistanceHistogram distance_histogram(const PointConfiguration& cfg, double tol) {
  return classify_pairs(cfg, tol).histogram;
}

BigInt energy(const DistanceHistogram& hist) {
  BigInt e = 0;
  for (const auto& c : hist.classes) e += BigInt(c.multiplicity) * c.multiplicity;
  return e;
}

std::int64_t proximity_window(double c, std::size_t size) {
  if (!(c > 0.0 && c <= 1.0)) {
    throw Error(ErrorCode::Parameter, fmt::format("proximity parameter c = {} outside (0, 1]", c));
  }
  return static_cast<std::int64_t>(std::floor(c * static_cast<double>(size) + 1e-9));
}

BigInt proximity_energy(const PointConfiguration& cfg, double c, double tol) {
  const std::int64_t wm = proximity_window(c, cfg.m());
  const std::int64_t wn = proximity_window(c, cfg.n());
  const PairClasses pc = classify_pairs(cfg, tol);
  const std::size_t n = cfg.n();
  // Members of each class in increasing pair index, hence increasing i.
  std::vector<std::vector<std::uint32_t>> members(pc.histogram.classes.size());
  for (std::size_t idx = 0; idx < pc.ids.size(); ++idx) members[pc.ids[idx]].push_back(static_cast<std::uint32_t>(idx));
  BigInt total = 0;
  for (const auto& mem : members) {
    std::int64_t off = 0;
    for (std::size_t a = 0; a < mem.size(); ++a) {
      const std::int64_t ia = mem[a] / n, ja = mem[a] % n;
      for (std::size_t b = a + 1; b < mem.size(); ++b) {
        const std::int64_t ib = mem[b] / n, jb = mem[b] % n;
        if (ib - ia > wm) break;
        if (std::llabs(jb - ja) <= wn) ++off;
      }
    }
    total += BigInt(2 * off + static_cast<std::int64_t>(mem.size()));
  }
  return total;
}

double theorem_bound(double m, double n) {
  return std::min({std::pow(m, 0.75) * std::pow(n, 0.75), m * m, n * n});
}

double ps_bound(double m, double n, int k) {
  if (k < 1) throw Error(ErrorCode::Parameter, "degrees of freedom k must be at least 1");
  const double den = 2.0 * k - 1.0;
  return std::pow(m, k / den) * std::pow(n, (2.0 * k - 2.0) / den) + m + n;
}

BoundsReport bounds_report(std::int64_t m, std::int64_t n, std::int64_t dcount, const BigInt& e,
                           int k) {
  if (dcount < 1) throw Error(ErrorCode::UndefinedInput, "Cauchy-Schwarz bound needs |D| >= 1");
  if (m < 1 || n < 1) throw Error(ErrorCode::Parameter, "m and n must be positive");
  BoundsReport r;
  const BigInt mn = BigInt(m) * n;
  r.cs_lower = Rational(mn * mn, BigInt(dcount));
  r.cs_satisfied = Rational(e) >= r.cs_lower;
  r.theorem_bound = theorem_bound(static_cast<double>(m), static_cast<double>(n));
  r.theorem_ratio = static_cast<double>(dcount) / r.theorem_bound;
  r.ps_bound = ps_bound(static_cast<double>(m), static_cast<double>(n), k);
  return r;
}

double exponent_fit(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 3) throw Error(ErrorCode::Parameter, "exponent fit needs at least 3 samples");
  double sx = 0, sy = 0;
  for (const auto& [size, value] : samples) {
    if (!(size > 0) || !(value > 0)) {
      throw Error(ErrorCode::Domain, fmt::format("non-positive sample ({}, {})", size, value));
    }
    sx += std::log(size);
    sy += std::log(value);
  }
  const double k = static_cast<double>(samples.size());
  const double mx = sx / k, my = sy / k;
  double sxx = 0, sxy = 0;
  for (const auto& [size, value] : samples) {
    const double dx = std::log(size) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(value) - my);
  }
  if (sxx == 0.0) throw Error(ErrorCode::Degenerate, "exponent fit needs at least two distinct sizes");
  return sxy / sxx;
}

void write_histogram_csv(std::ostream& out, const DistanceHistogram& hist) {
  out << "d_squared,multiplicity\n";
  for (const auto& c : hist.classes) out << fmt::format("{:.17g},{}\n", c.d_squared, c.multiplicity);
}

DistanceHistogram read_histogram_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "d_squared,multiplicity") {
    throw Error(ErrorCode::Parse, "histogram CSV must start with 'd_squared,multiplicity'");
  }
  DistanceHistogram h;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw Error(ErrorCode::Parse, fmt::format("row {}: missing comma", row));
    try {
      std::size_t used = 0;
      const double d = std::stod(line.substr(0, comma), &used);
      const long long mult = std::stoll(line.substr(comma + 1));
      if (mult < 1) throw std::invalid_argument("multiplicity");
      h.classes.push_back({d, std::nullopt, mult});
      h.total += mult;
    } catch (const std::exception&) {
      throw Error(ErrorCode::Parse, fmt::format("row {}: bad value '{}'", row, line));
    }
  }
  return h;
}

}  // namespace pfaffdist::metrics
