#include "pfaffdist/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "pfaffdist/incidence.hpp"

namespace pfaffdist::experiment {

namespace fs = std::filesystem;

namespace {

std::string stem(const SweepRow& row) { return fmt::format("{}_{}x{}", row.family, row.m, row.n); }

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, fmt::format("cannot write {}", p.string()));
  return out;
}

}  // namespace

ExperimentResult run_sweep(const configurations::ConfigSpec& tmpl, const std::vector<int>& sizes,
                           const SweepOptions& options) {
  if (sizes.size() < 3) throw Error(ErrorCode::Precondition, "a sweep needs at least three sizes");
  if (!std::is_sorted(sizes.begin(), sizes.end()) ||
      std::adjacent_find(sizes.begin(), sizes.end()) != sizes.end()) {
    throw Error(ErrorCode::Precondition, "sweep sizes must be strictly ascending");
  }
  if (tmpl.family == configurations::Family::LogCircles) {
    throw Error(ErrorCode::Type, "log-circle configurations are not planar; use the logcircles command");
  }
  ExperimentResult res;
  res.spec = tmpl;
  res.options = options;
  std::vector<std::pair<double, double>> fit;
  for (int size : sizes) {
    configurations::ConfigSpec spec = tmpl;
    spec.n = size;
    if (!options.fixed_m) spec.m = size;
    const metrics::PointConfiguration cfg = configurations::generate(spec);
    const metrics::DistanceHistogram hist = metrics::distance_histogram(cfg, options.tol);

    SweepRow row;
    row.family = spec.label();
    row.m = spec.m;
    row.n = spec.n;
    row.c = options.c;
    row.distinct = static_cast<std::int64_t>(hist.distinct());
    row.energy = metrics::energy(hist);
    row.proximity_energy = metrics::proximity_energy(cfg, options.c, options.tol);
    row.incidences = incidence::count_incidences(cfg, options.c, options.tol);
    const metrics::BoundsReport b = metrics::bounds_report(row.m, row.n, row.distinct, row.energy);
    row.cs_lower = b.cs_lower;
    row.theorem_bound = b.theorem_bound;
    row.ratio = b.theorem_ratio;
    row.ec_ratio = row.proximity_energy.convert_to<double>() / (options.c * row.energy.convert_to<double>());
    if (row.m * row.n <= options.multiplicity_limit) {
      row.max_multiplicity = incidence::empirical_multiplicity(cfg, options.c, options.tol);
    }

    if (hist.total != row.m * row.n) {
      throw Error(ErrorCode::IdentityViolation,
                  fmt::format("row {}: multiplicities sum to {}, expected {}", stem(row), hist.total, row.m * row.n));
    }
    if (row.proximity_energy != row.incidences) {
      throw Error(ErrorCode::IdentityViolation,
                  fmt::format("row {}: E_c = {} but I(P_c, Gamma) = {}", stem(row), row.proximity_energy.str(),
                              row.incidences.str()));
    }
    if (!b.cs_satisfied) {
      throw Error(ErrorCode::IdentityViolation,
                  fmt::format("row {}: E |D| < (mn)^2 with E = {}, |D| = {}", stem(row), row.energy.str(), row.distinct));
    }
    fit.emplace_back(static_cast<double>(row.n), static_cast<double>(row.distinct));
    res.rows.push_back(std::move(row));
    res.configs.push_back(cfg);
    res.histograms.push_back(hist);
  }
  try {
    res.exponent = metrics::exponent_fit(fit);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Degenerate) throw;
    res.exponent = 0.0;
  }
  res.passed = true;
  return res;
}

std::string report_header() {
  return "family,m,n,c,distinct,energy,proximity_energy,cs_lower,theorem_bound,ratio,incidences,ec_ratio,"
         "max_multiplicity";
}

std::string report_line(const SweepRow& r) {
  return fmt::format("{},{},{},{:.17g},{},{},{},{},{:.17g},{:.17g},{},{:.17g},{}", r.family, r.m, r.n, r.c,
                     r.distinct, r.energy.str(), r.proximity_energy.str(), r.cs_lower.str(), r.theorem_bound,
                     r.ratio, r.incidences.str(), r.ec_ratio, r.max_multiplicity);
}

std::string loglog_svg(const std::vector<ExperimentResult>& results) {
  constexpr double width = 640, height = 480, margin = 60;
  double nlo = 1e300, nhi = 0, dlo = 1e300, dhi = 0;
  for (const auto& res : results) {
    for (const auto& r : res.rows) {
      nlo = std::min(nlo, double(r.n));
      nhi = std::max(nhi, double(r.n));
      dlo = std::min({dlo, double(r.distinct), r.theorem_bound / 16});
      dhi = std::max({dhi, double(r.distinct), r.theorem_bound});
    }
  }
  if (nhi <= 0) throw Error(ErrorCode::Parameter, "no rows to plot");
  if (nhi == nlo) nhi = nlo * 2;
  if (dhi <= dlo) dhi = dlo * 2;
  const double lx0 = std::log10(nlo), lx1 = std::log10(nhi), ly0 = std::log10(dlo), ly1 = std::log10(dhi);
  auto px = [&](double v) { return margin + (std::log10(v) - lx0) / (lx1 - lx0) * (width - 2 * margin); };
  auto py = [&](double v) { return height - margin - (std::log10(v) - ly0) / (ly1 - ly0) * (height - 2 * margin); };

  static constexpr const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n"
      "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n"
      "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"14\">n (log scale)</text>\n"
      "<text x=\"16\" y=\"{}\" font-size=\"14\" transform=\"rotate(-90 16 {})\">distinct distances (log scale)</text>\n",
      width, height, width, height, margin, height - margin, width - margin, height - margin, margin, margin, margin,
      height - margin, width / 2, height - 20, height / 2, height / 2);
  svg += fmt::format("<text x=\"{:.2f}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n", px(nlo),
                     height - margin + 16, nlo);
  svg += fmt::format("<text x=\"{:.2f}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n", px(nhi),
                     height - margin + 16, nhi);

  // Reference: min(m^{3/4} n^{3/4}, m^2, n^2) at m = n, i.e. n^{3/2}.
  std::string ref;
  const int steps = 32;
  for (int k = 0; k <= steps; ++k) {
    const double n = nlo * std::pow(nhi / nlo, double(k) / steps);
    const double b = std::min({std::pow(n, 1.5), n * n});
    if (b < dlo || b > dhi) continue;
    ref += fmt::format("{:.2f},{:.2f} ", px(n), py(b));
  }
  svg += fmt::format(
      "<polyline class=\"reference\" points=\"{}\" fill=\"none\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>\n", ref);
  svg += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"gray\">reference n^(3/4) n^(3/4)</text>\n",
                     width - margin - 200, margin - 20);

  int idx = 0;
  for (const auto& res : results) {
    const char* color = colors[idx % std::size(colors)];
    std::string pts;
    for (const auto& r : res.rows) pts += fmt::format("{:.2f},{:.2f} ", px(double(r.n)), py(double(r.distinct)));
    const std::string name = res.rows.empty() ? res.spec.label() : res.rows.front().family;
    svg += fmt::format("<polyline class=\"series\" data-family=\"{}\" points=\"{}\" fill=\"none\" stroke=\"{}\"/>\n",
                       name, pts, color);
    svg += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"{}\">{} (slope {:.3f})</text>\n", margin + 10,
                       margin + 16 * idx, color, name, res.exponent);
    ++idx;
  }
  svg += "</svg>\n";
  return svg;
}

void emit_report(const std::vector<ExperimentResult>& results, const fs::path& dir) {
  std::size_t total = 0;
  for (const auto& r : results) total += r.rows.size();
  if (total == 0) throw Error(ErrorCode::Parameter, "empty experiment result");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, fmt::format("cannot create {}: {}", dir.string(), ec.message()));

  auto report = open_out(dir / "report.csv");
  report << report_header() << '\n';
  for (const auto& res : results) {
    for (std::size_t k = 0; k < res.rows.size(); ++k) {
      const SweepRow& row = res.rows[k];
      report << report_line(row) << '\n';
      auto p1 = open_out(dir / fmt::format("points_{}_1.csv", stem(row)));
      configurations::write_points_csv(p1, res.configs.at(k).p1());
      auto p2 = open_out(dir / fmt::format("points_{}_2.csv", stem(row)));
      configurations::write_points_csv(p2, res.configs.at(k).p2());
      auto h = open_out(dir / fmt::format("hist_{}.csv", stem(row)));
      metrics::write_histogram_csv(h, res.histograms.at(k));
    }
  }
  if (!report) throw Error(ErrorCode::Io, "failed writing report.csv");
  auto svg = open_out(dir / "loglog.svg");
  svg << loglog_svg(results);
}

void emit_report(const ExperimentResult& result, const fs::path& dir) {
  emit_report(std::vector<ExperimentResult>{result}, dir);
}

std::vector<SweepRow> load_report(const fs::path& dir) {
  std::ifstream in(dir / "report.csv");
  if (!in) throw Error(ErrorCode::Io, fmt::format("cannot read {}", (dir / "report.csv").string()));
  std::string line;
  if (!std::getline(in, line) || line != report_header()) throw Error(ErrorCode::Parse, "unexpected report header");
  std::vector<SweepRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 13) throw Error(ErrorCode::Parse, fmt::format("report line {}: expected 13 columns", lineno));
    SweepRow r;
    try {
      r.family = cells[0];
      r.m = std::stoll(cells[1]);
      r.n = std::stoll(cells[2]);
      r.c = std::stod(cells[3]);
      r.distinct = std::stoll(cells[4]);
      r.energy = BigInt(cells[5]);
      r.proximity_energy = BigInt(cells[6]);
      r.cs_lower = Rational(cells[7]);
      r.theorem_bound = std::stod(cells[8]);
      r.ratio = std::stod(cells[9]);
      r.incidences = BigInt(cells[10]);
      r.ec_ratio = std::stod(cells[11]);
      r.max_multiplicity = std::stoll(cells[12]);
    } catch (const std::exception& e) {
      throw Error(ErrorCode::Parse, fmt::format("report line {}: {}", lineno, e.what()));
    }
    std::ifstream hin(dir / fmt::format("hist_{}.csv", stem(r)));
    if (!hin) throw Error(ErrorCode::Io, fmt::format("missing histogram for {}", stem(r)));
    const metrics::DistanceHistogram h = metrics::read_histogram_csv(hin);
    if (h.total != r.m * r.n) {
      throw Error(ErrorCode::IdentityViolation,
                  fmt::format("row {}: multiplicities sum to {}, expected {}", stem(r), h.total, r.m * r.n));
    }
    if (static_cast<std::int64_t>(h.distinct()) != r.distinct) {
      throw Error(ErrorCode::IdentityViolation, fmt::format("row {}: histogram has {} classes, report says {}",
                                                            stem(r), h.distinct(), r.distinct));
    }
    if (r.proximity_energy != r.incidences) {
      throw Error(ErrorCode::IdentityViolation, fmt::format("row {}: E_c differs from the incidence count", stem(r)));
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace pfaffdist::experiment
