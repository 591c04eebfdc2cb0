#include "pfaffdist/configurations.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "pfaffdist/pfaffian.hpp"

namespace pfaffdist::configurations {

namespace {

constexpr double pi = std::numbers::pi;

using pfaffian::BuiltinSpec;
using pfaffian::PfaffianFunction;

template <class E>
struct Names {
  E value;
  std::string_view name;
};

constexpr Names<Family> family_names[] = {
    {Family::ParallelLines, "parallel"},  {Family::OrthogonalLines, "orthogonal"},
    {Family::GenericLines, "generic"},    {Family::ConcentricCircles, "concentric"},
    {Family::OnCurve, "oncurve"},         {Family::LogCircles, "logcircles"},
};

constexpr Names<SchemeKind> scheme_names[] = {
    {SchemeKind::Uniform, "uniform"},
    {SchemeKind::Arithmetic, "arithmetic"},
    {SchemeKind::Geometric, "geometric"},
};

double parse_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double out = 0;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || v.empty()) throw Error(ErrorCode::Parse, fmt::format("bad number for {}: '{}'", key, v));
  return out;
}

long long parse_int(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  long long out = 0;
  try {
    out = std::stoll(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || v.empty()) throw Error(ErrorCode::Parse, fmt::format("bad integer for {}: '{}'", key, v));
  return out;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Positions along a line for the line families.
std::vector<double> line_positions(const ConfigSpec& spec, int count, std::uint64_t seed, bool integer_uniform) {
  // Exact coordinates tolerate a 2^63 spread; floating ones keep squared
  // distances resolvable at the default tolerance.
  const double span_log2 = integer_uniform ? 63.0 : 10.0;
  std::vector<double> t(count);
  switch (spec.scheme.kind) {
    case SchemeKind::Arithmetic:
      for (int k = 0; k < count; ++k) t[k] = k;
      break;
    case SchemeKind::Geometric: {
      const double r =
          spec.scheme.ratio > 0 ? spec.scheme.ratio : std::pow(2.0, std::min(1.0, span_log2 / std::max(1, count - 1)));
      for (int k = 0; k < count; ++k) t[k] = std::pow(r, k);
      if (!std::isfinite(t.back())) {
        throw Error(ErrorCode::Parameter, fmt::format("ratio {} overflows over {} points", r, count));
      }
      break;
    }
    case SchemeKind::Uniform: {
      std::mt19937_64 rng(seed);
      if (integer_uniform) {
        std::vector<int> pool(4 * count);
        for (int k = 0; k < 4 * count; ++k) pool[k] = k;
        std::shuffle(pool.begin(), pool.end(), rng);
        for (int k = 0; k < count; ++k) t[k] = pool[k];
      } else {
        std::uniform_real_distribution<double> u(0.0, count);
        std::set<double> seen;
        for (int k = 0; k < count; ++k) {
          double v = u(rng);
          while (!seen.insert(v).second) v = u(rng);
          t[k] = v;
        }
      }
      std::sort(t.begin(), t.end());
      break;
    }
  }
  return t;
}

struct Preset {
  std::string expr;
  BuiltinSpec chain;
  double xlo, xhi, seed_x;
  double ylo, yhi;  // bracket of the seed ordinate
};

const std::map<std::string, Preset, std::less<>>& presets() {
  static const std::map<std::string, Preset, std::less<>> table = {
      {"exp", {"y - q1", BuiltinSpec::exp(1.0, 2), 0.0, 1.0, 0.5, 0.0, 5.0}},
      {"circle", {"(x - 3)^2 + y^2 - 4", BuiltinSpec::empty(2), 1.1, 2.9, 2.0, 0.0, 3.0}},
      {"line", {"y - 0.5*x - 3", BuiltinSpec::empty(2), 0.0, 2.0, 1.0, 0.0, 5.0}},
      {"parabola", {"y - x^2 - 1", BuiltinSpec::empty(2), 0.2, 1.5, 1.0, 0.0, 5.0}},
      {"cubic", {"y - x^3", BuiltinSpec::empty(2), -1.0, 1.0, 0.5, 0.0, 1.0}},
      {"log", {"y - q2", BuiltinSpec::recip_ln(2), 1.0, 3.0, 2.0, 0.0, 5.0}},
  };
  return table;
}

double line_distance(Point2 p, Point2 origin, Vec2 dir) { return std::fabs(cross(p - origin, dir)) / norm(dir); }

}  // namespace

std::string_view to_string(Family f) {
  for (const auto& e : family_names) {
    if (e.value == f) return e.name;
  }
  return "?";
}

std::string_view to_string(SchemeKind s) {
  for (const auto& e : scheme_names) {
    if (e.value == s) return e.name;
  }
  return "?";
}

Family parse_family(std::string_view text) {
  for (const auto& e : family_names) {
    if (e.name == text) return e.value;
  }
  throw Error(ErrorCode::Parse, fmt::format("unknown family '{}'", text));
}

SchemeKind parse_scheme(std::string_view text) {
  for (const auto& e : scheme_names) {
    if (e.name == text) return e.value;
  }
  throw Error(ErrorCode::Parse, fmt::format("unknown scheme '{}'", text));
}

void ConfigSpec::validate() const {
  if (m < 1 || n < 1) throw Error(ErrorCode::Parameter, "m and n must be at least 1");
  if (scheme.kind == SchemeKind::Geometric && scheme.ratio != 0.0 && !(scheme.ratio > 1.0)) {
    throw Error(ErrorCode::Parameter, "geometric ratio must exceed 1");
  }
  if (family == Family::ConcentricCircles) {
    if (!(r1 > 0) || !(r2 > 0) || r1 == r2) {
      throw Error(ErrorCode::Parameter, "concentric circles need distinct positive radii");
    }
    if (scheme.kind == SchemeKind::Geometric) {
      throw Error(ErrorCode::Parameter, "concentric circles take arithmetic or uniform angles");
    }
  }
  if (family == Family::GenericLines && std::fabs(std::cos(angle)) < 1e-9) {
    throw Error(ErrorCode::Parameter, "a vertical second line puts its points on one x-coordinate");
  }
  if (family == Family::OnCurve) {
    arc_preset(arc1);
    arc_preset(arc2);
  }
}

std::string ConfigSpec::to_text() const {
  std::string out = fmt::format("family={}\nm={}\nn={}\nscheme={}\nratio={:.17g}\nseed={}\n", to_string(family), m,
                                n, to_string(scheme.kind), scheme.ratio, seed);
  switch (family) {
    case Family::GenericLines:
      out += fmt::format("angle={:.17g}\n", angle);
      break;
    case Family::ConcentricCircles:
      out += fmt::format("r1={:.17g}\nr2={:.17g}\n", r1, r2);
      break;
    case Family::OnCurve:
      out += fmt::format("arc1={}\narc2={}\n", arc1, arc2);
      break;
    case Family::LogCircles:
      out += fmt::format("A={:.17g}\nB={:.17g}\nD={:.17g}\nmixed={}\n", log.A, log.B, log.D, mixed_branches ? 1 : 0);
      break;
    default:
      break;
  }
  return out;
}

ConfigSpec ConfigSpec::parse(std::string_view text) {
  ConfigSpec spec;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::Parse, fmt::format("expected key=value, got '{}'", line));
    const std::string key = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
    if (key == "family") spec.family = parse_family(v);
    else if (key == "m") spec.m = static_cast<int>(parse_int(key, v));
    else if (key == "n") spec.n = static_cast<int>(parse_int(key, v));
    else if (key == "scheme") spec.scheme.kind = parse_scheme(v);
    else if (key == "ratio") spec.scheme.ratio = parse_double(key, v);
    else if (key == "seed") spec.seed = static_cast<std::uint64_t>(parse_int(key, v));
    else if (key == "angle") spec.angle = parse_double(key, v);
    else if (key == "r1") spec.r1 = parse_double(key, v);
    else if (key == "r2") spec.r2 = parse_double(key, v);
    else if (key == "arc1") spec.arc1 = v;
    else if (key == "arc2") spec.arc2 = v;
    else if (key == "A") spec.log.A = parse_double(key, v);
    else if (key == "B") spec.log.B = parse_double(key, v);
    else if (key == "D") spec.log.D = parse_double(key, v);
    else if (key == "mixed") spec.mixed_branches = parse_int(key, v) != 0;
    else throw Error(ErrorCode::Parse, fmt::format("unknown key '{}'", key));
  }
  spec.validate();
  return spec;
}

std::string ConfigSpec::label() const {
  std::string base = std::string(to_string(family));
  if (family == Family::OnCurve) base += fmt::format("-{}-{}", arc1, arc2);
  return fmt::format("{}-{}", base, to_string(scheme.kind));
}

std::shared_ptr<const curves::PlanarArc> arc_preset(std::string_view name) {
  const auto& table = presets();
  const auto it = table.find(name);
  if (it == table.end()) throw Error(ErrorCode::Parameter, fmt::format("unknown arc preset '{}'", name));
  static std::map<std::string, std::shared_ptr<const curves::PlanarArc>, std::less<>> cache;
  static std::mutex mu;
  const std::lock_guard lock(mu);
  if (const auto c = cache.find(name); c != cache.end()) return c->second;
  const Preset& p = it->second;
  const PfaffianFunction f = PfaffianFunction::from_expression(pfaffian::builtin_chain(p.chain), p.expr);
  const double y = curves::solve_on_vertical(f, p.seed_x, p.ylo, p.yhi);
  auto arc = std::make_shared<const curves::PlanarArc>(f, p.xlo, p.xhi, Point2{p.seed_x, y});
  cache.emplace(std::string(name), arc);
  return arc;
}

std::vector<std::string> arc_preset_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : presets()) out.push_back(k);
  return out;
}

std::vector<double> scheme_values(const Scheme& scheme, int count, double lo, double hi, std::uint64_t seed) {
  if (count < 1) throw Error(ErrorCode::Parameter, "need at least one point");
  if (!(hi > lo)) throw Error(ErrorCode::Window, "empty window");
  const double len = hi - lo;
  std::vector<double> x(count);
  switch (scheme.kind) {
    case SchemeKind::Arithmetic:
      for (int k = 0; k < count; ++k) x[k] = lo + len * (k + 1) / (count + 1);
      break;
    case SchemeKind::Uniform: {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> u(lo, hi);
      std::set<double> seen;
      for (int k = 0; k < count; ++k) {
        double v = u(rng);
        while (v <= lo || !seen.insert(v).second) v = u(rng);
        x[k] = v;
      }
      std::sort(x.begin(), x.end());
      break;
    }
    case SchemeKind::Geometric: {
      if (count == 1) {
        x[0] = lo + 0.5 * len;
        break;
      }
      const double r = scheme.ratio > 0 ? scheme.ratio : std::pow(19.0, 1.0 / (count - 1));
      if (!(r > 1)) throw Error(ErrorCode::Parameter, "geometric ratio must exceed 1");
      // Offsets from lo form the progression, ending at 95% of the window.
      for (int k = 0; k < count; ++k) x[k] = lo + 0.95 * len * std::pow(r, k - (count - 1));
      for (int k = 1; k < count; ++k) {
        if (!(x[k] > x[k - 1]) || !(x[0] > lo)) {
          throw Error(ErrorCode::Window, fmt::format("ratio {} collapses {} points onto the window", r, count));
        }
      }
      break;
    }
  }
  return x;
}

metrics::PointConfiguration generate(const ConfigSpec& spec) {
  spec.validate();
  const std::string prov = fmt::format("{} m={} n={} seed={}", spec.label(), spec.m, spec.n, spec.seed);
  switch (spec.family) {
    case Family::ParallelLines: {
      const auto t1 = line_positions(spec, spec.m, spec.seed, true);
      const auto t2 = line_positions(spec, spec.n, spec.seed + 1, true);
      std::vector<RationalPoint> p1, p2;
      for (double t : t1) p1.push_back({Rational(t), Rational(0)});
      for (double t : t2) p2.push_back({Rational(t), Rational(1)});
      return metrics::PointConfiguration::make_exact(std::move(p1), std::move(p2), prov);
    }
    case Family::OrthogonalLines: {
      // Lines y = x and y = -x; arithmetic schemes space the squared
      // distances to the crossing, so every distance^2 is i + j.
      auto t1 = line_positions(spec, spec.m, spec.seed, false);
      auto t2 = line_positions(spec, spec.n, spec.seed + 1, false);
      const double h = std::sqrt(0.5);
      std::vector<Point2> p1, p2;
      for (double t : t1) {
        const double r = spec.scheme.kind == SchemeKind::Arithmetic ? std::sqrt(t + 1) : t + 1;
        p1.push_back({h * r, h * r});
      }
      for (double t : t2) {
        const double r = spec.scheme.kind == SchemeKind::Arithmetic ? std::sqrt(t + 1) : t + 1;
        p2.push_back({h * r, -h * r});
      }
      return metrics::PointConfiguration::make(std::move(p1), std::move(p2), prov);
    }
    case Family::GenericLines: {
      const auto t1 = line_positions(spec, spec.m, spec.seed, false);
      const auto t2 = line_positions(spec, spec.n, spec.seed + 1, false);
      const Vec2 dir{std::cos(spec.angle), std::sin(spec.angle)};
      std::vector<Point2> p1, p2;
      for (double t : t1) p1.push_back({t, 0.0});
      for (double t : t2) p2.push_back(Point2{0.0, 1.0} + (t + 0.5) * dir);
      return metrics::PointConfiguration::make(std::move(p1), std::move(p2), prov);
    }
    case Family::ConcentricCircles: {
      auto angles = [&](int count, std::uint64_t seed) {
        std::vector<double> a(count);
        if (spec.scheme.kind == SchemeKind::Arithmetic) {
          // The half-step offset keeps x-coordinates distinct.
          for (int k = 0; k < count; ++k) a[k] = 2 * pi * k / count + pi / (2.0 * count);
        } else {
          a = scheme_values(spec.scheme, count, 0.0, pi, seed);
        }
        return a;
      };
      std::vector<Point2> p1, p2;
      for (double a : angles(spec.m, spec.seed)) p1.push_back({spec.r1 * std::cos(a), spec.r1 * std::sin(a)});
      for (double a : angles(spec.n, spec.seed + 1)) p2.push_back({spec.r2 * std::cos(a), spec.r2 * std::sin(a)});
      return metrics::PointConfiguration::make(std::move(p1), std::move(p2), prov);
    }
    case Family::OnCurve: {
      auto place = [&](const std::string& name, int count, std::uint64_t seed) {
        const auto arc = arc_preset(name);
        const curves::Parameterization g(*arc);
        std::vector<Point2> pts;
        for (double x : scheme_values(spec.scheme, count, arc->xlo(), arc->xhi(), seed)) pts.push_back(g.point(x));
        return pts;
      };
      return metrics::PointConfiguration::make(place(spec.arc1, spec.m, spec.seed),
                                               place(spec.arc2, spec.n, spec.seed + 1), prov);
    }
    case Family::LogCircles:
      throw Error(ErrorCode::Type, "log-circle configurations live in R^3; use gen_log_circles");
  }
  throw Error(ErrorCode::Parameter, "unknown family");
}

double curve_residual(const ConfigSpec& spec, const metrics::PointConfiguration& cfg) {
  double worst = 0;
  auto each = [&](const std::vector<Point2>& pts, auto residual) {
    for (const auto& p : pts) worst = std::max(worst, residual(p));
  };
  switch (spec.family) {
    case Family::ParallelLines:
      each(cfg.p1(), [](Point2 p) { return std::fabs(p.y); });
      each(cfg.p2(), [](Point2 p) { return std::fabs(p.y - 1); });
      break;
    case Family::OrthogonalLines:
      each(cfg.p1(), [](Point2 p) { return line_distance(p, {0, 0}, {1, 1}); });
      each(cfg.p2(), [](Point2 p) { return line_distance(p, {0, 0}, {1, -1}); });
      break;
    case Family::GenericLines:
      each(cfg.p1(), [](Point2 p) { return std::fabs(p.y); });
      each(cfg.p2(), [&](Point2 p) {
        return line_distance(p, {0, 1}, {std::cos(spec.angle), std::sin(spec.angle)});
      });
      break;
    case Family::ConcentricCircles:
      each(cfg.p1(), [&](Point2 p) { return std::fabs(norm(p) - spec.r1); });
      each(cfg.p2(), [&](Point2 p) { return std::fabs(norm(p) - spec.r2); });
      break;
    case Family::OnCurve:
      for (const auto& [name, pts] : {std::pair{spec.arc1, &cfg.p1()}, std::pair{spec.arc2, &cfg.p2()}}) {
        const auto arc = arc_preset(name);
        each(*pts, [&](Point2 p) {
          const double at[2] = {p.x, p.y};
          const auto grad = arc->function().gradient(at);
          return std::fabs(arc->function()(at)) / std::hypot(grad[0], grad[1]);
        });
      }
      break;
    case Family::LogCircles:
      throw Error(ErrorCode::Type, "log-circle configurations live in R^3");
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Log-circles

double log_radicand1(const LogCircleParams& p, double x) {
  if (!(x > 0)) throw Error(ErrorCode::Domain, fmt::format("ln x needs x > 0, got {}", x));
  return p.D + p.A * std::log(x) - (x - p.B) * (x - p.B);
}

double log_radicand2(const LogCircleParams& p, double x) {
  if (!(x > p.B)) throw Error(ErrorCode::Domain, fmt::format("ln(x - B) needs x > {}, got {}", p.B, x));
  return p.D + p.A * std::log(x - p.B) - x * x;
}

Window feasible_window(const LogCircleParams& p, int which, double lo, double hi) {
  constexpr int grid = 1000;
  Window best{0, 0};
  bool found = false;
  double run_lo = 0;
  bool in_run = false;
  for (int k = 0; k <= grid; ++k) {
    const double x = lo + (hi - lo) * k / grid;
    double r = -1;
    try {
      r = which == 1 ? log_radicand1(p, x) : log_radicand2(p, x);
    } catch (const Error&) {
    }
    const bool ok = r > 0;
    if (ok && !in_run) {
      run_lo = x;
      in_run = true;
    }
    if (in_run && (!ok || k == grid)) {
      const double run_hi = ok ? x : lo + (hi - lo) * (k - 1) / grid;
      if (!found || run_hi - run_lo > best.hi - best.lo) best = {run_lo, run_hi};
      found = true;
      in_run = false;
    }
  }
  if (!found) throw Error(ErrorCode::Window, fmt::format("radicand {} is nowhere positive on [{}, {}]", which, lo, hi));
  return best;
}

LogCirclePoints gen_log_circles(const LogCircleParams& p, int m, int n, const Scheme& scheme, std::uint64_t seed,
                                bool mixed_branches, Window x_window, Window xp_window) {
  if (m < 1 || n < 1) throw Error(ErrorCode::Parameter, "m and n must be at least 1");
  LogCirclePoints out;
  out.x_window = x_window;
  out.xp_window = xp_window;

  auto check = [&](int which, const Window& w, const std::vector<double>& xs) {
    for (double x : xs) {
      double r = -1;
      try {
        r = which == 1 ? log_radicand1(p, x) : log_radicand2(p, x);
      } catch (const Error&) {
      }
      if (!(r >= 0)) {
        std::string feasible = "none";
        try {
          const Window f = feasible_window(p, which, w.lo - (w.hi - w.lo), w.hi + (w.hi - w.lo));
          feasible = fmt::format("[{:.6g}, {:.6g}]", f.lo, f.hi);
        } catch (const Error&) {
        }
        throw Error(ErrorCode::Window,
                    fmt::format("negative radicand on circle {} at x = {:.17g}; feasible range {}", which, x, feasible));
      }
    }
  };

  std::vector<double> xs, xps;
  if (scheme.kind == SchemeKind::Geometric) {
    // x and x' - B share one ratio so that u = x (x' - B) takes at most
    // m + n - 1 values.
    const double u_lo = xp_window.lo - p.B, u_hi = xp_window.hi - p.B;
    if (!(x_window.lo > 0) || !(u_lo > 0)) {
      throw Error(ErrorCode::Window, "geometric schemes need x > 0 and x' > B");
    }
    double r = scheme.ratio;
    if (r == 0.0) {
      const int steps = std::max(m, n) - 1;
      const double span = std::min(x_window.hi / x_window.lo, u_hi / u_lo);
      r = steps > 0 ? std::pow(span, 1.0 / steps) : 2.0;
    }
    if (!(r > 1)) throw Error(ErrorCode::Parameter, "geometric ratio must exceed 1");
    for (int i = 0; i < m; ++i) xs.push_back(x_window.lo * std::pow(r, i));
    for (int j = 0; j < n; ++j) xps.push_back(p.B + u_lo * std::pow(r, j));
  } else {
    auto fill = [&](int count, Window w, std::uint64_t s) {
      if (scheme.kind == SchemeKind::Arithmetic) {
        std::vector<double> v(count);
        for (int k = 0; k < count; ++k) v[k] = count == 1 ? w.lo : w.lo + (w.hi - w.lo) * k / (count - 1);
        return v;
      }
      return scheme_values(scheme, count, w.lo, w.hi, s);
    };
    xs = fill(m, x_window, seed);
    xps = fill(n, xp_window, seed + 1);
  }
  check(1, x_window, xs);
  check(2, xp_window, xps);

  for (int i = 0; i < m; ++i) {
    const double s = mixed_branches && (i % 2) ? -1.0 : 1.0;
    out.p.push_back({xs[i], s * std::sqrt(log_radicand1(p, xs[i])), 0.0});
  }
  for (int j = 0; j < n; ++j) {
    const double s = mixed_branches && (j % 2) ? -1.0 : 1.0;
    out.q.push_back({xps[j], 0.0, s * std::sqrt(log_radicand2(p, xps[j]))});
  }
  return out;
}

double log_circle_residual(const LogCircleParams& p, const LogCirclePoints& pts) {
  double worst = 0;
  for (const auto& a : pts.p) {
    const double lhs = (a.x - p.B) * (a.x - p.B) + a.y * a.y;
    worst = std::max({worst, std::fabs(lhs - p.D - p.A * std::log(a.x)), std::fabs(a.z)});
  }
  for (const auto& b : pts.q) {
    const double lhs = b.x * b.x + b.z * b.z;
    worst = std::max({worst, std::fabs(lhs - p.D - p.A * std::log(b.x - p.B)), std::fabs(b.y)});
  }
  return worst;
}

std::int64_t distinct_distances_3d(const std::vector<Point3>& p, const std::vector<Point3>& q, double tol) {
  if (p.empty() || q.empty()) throw Error(ErrorCode::Parameter, "empty point set");
  std::vector<double> d;
  d.reserve(p.size() * q.size());
  for (const auto& a : p) {
    for (const auto& b : q) {
      const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
      d.push_back(dx * dx + dy * dy + dz * dz);
    }
  }
  std::sort(d.begin(), d.end());
  std::int64_t classes = 1;
  for (std::size_t k = 1; k < d.size(); ++k) {
    if (d[k] - d[k - 1] > tol * std::max(std::fabs(d[k - 1]), std::fabs(d[k]))) ++classes;
  }
  return classes;
}

double log_circle_invariant(const LogCircleParams& params, const std::vector<Point3>& p, const std::vector<Point3>& q) {
  double worst = 0;
  for (const auto& a : p) {
    for (const auto& b : q) {
      const double u = a.x * (b.x - params.B);
      if (!(u > 0)) throw Error(ErrorCode::Domain, fmt::format("u = x (x' - B) must be positive, got {}", u));
      const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
      const double d2 = dx * dx + dy * dy + dz * dz;
      const double closed = -2 * u + params.A * std::log(u) + 2 * params.D - params.B * params.B;
      worst = std::max(worst, std::fabs(d2 - closed));
    }
  }
  return worst;
}

void write_points_csv(std::ostream& out, const std::vector<Point2>& pts) {
  out << "x,y\n";
  for (const auto& p : pts) out << fmt::format("{:.17g},{:.17g}\n", p.x, p.y);
}

void write_points_csv(std::ostream& out, const std::vector<Point3>& pts) {
  out << "x,y,z\n";
  for (const auto& p : pts) out << fmt::format("{:.17g},{:.17g},{:.17g}\n", p.x, p.y, p.z);
}

}  // namespace pfaffdist::configurations
