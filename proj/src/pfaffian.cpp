#include "pfaffdist/pfaffian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

namespace pfaffdist::pfaffian {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> concat(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

void check_point(const PfaffianChain& chain, std::span<const double> point) {
  if (static_cast<int>(point.size()) != chain.dim()) {
    throw Error(ErrorCode::Parameter,
                fmt::format("point has {} coordinates, chain dimension is {}", point.size(),
                            chain.dim()));
  }
  if (!chain.domain().contains(point)) {
    throw Error(ErrorCode::Domain, fmt::format("point ({}) outside the open domain",
                                               fmt::join(point, ", ")));
  }
}

std::string format_bound(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  return fmt::format("{:.17g}", v);
}

double parse_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw Error(ErrorCode::Parse, "bad number '" + s + "'");
    return v;
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw Error(ErrorCode::Parse, "bad number '" + s + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string piece;
  std::istringstream in(s);
  while (std::getline(in, piece, sep)) out.push_back(piece);
  return out;
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  if (s.empty()) return out;
  for (const auto& piece : split(s, ',')) out.push_back(parse_double(piece));
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Box

Box Box::whole(std::size_t dim) {
  return {std::vector<double>(dim, -kInf), std::vector<double>(dim, kInf)};
}

bool Box::contains(std::span<const double> x) const {
  if (x.size() != lo.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > lo[i] && x[i] < hi[i])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// BuiltinSpec text

std::string BuiltinSpec::to_text() const {
  switch (kind) {
    case BuiltinKind::Empty: return fmt::format("empty,{}", dim);
    case BuiltinKind::Exp: return fmt::format("exp,{},{:.17g}", dim, a);
    case BuiltinKind::ExpTower: return fmt::format("exptower,{},{},{:.17g}", dim, depth, a);
    case BuiltinKind::Tan: return fmt::format("tan,{},{}", dim, period);
    case BuiltinKind::RecipLn: return fmt::format("recipln,{}", dim);
    case BuiltinKind::RecipPower: return fmt::format("recippower,{},{:.17g}", dim, m);
    case BuiltinKind::MonomialMulti:
      return fmt::format("monomial,{},{}", dim, fmt::join(exponents, ","));
  }
  return {};
}

BuiltinSpec BuiltinSpec::parse(std::string_view text) {
  const auto parts = split(std::string(text), ',');
  if (parts.size() < 2) throw Error(ErrorCode::Parse, "bad builtin chain '" + std::string(text) + "'");
  const std::string& name = parts[0];
  const int dim = static_cast<int>(parse_double(parts[1]));
  auto need = [&](std::size_t count) {
    if (parts.size() != count) {
      throw Error(ErrorCode::Parse, "wrong parameter count for builtin '" + std::string(text) + "'");
    }
  };
  if (name == "empty") {
    need(2);
    return empty(dim);
  }
  if (name == "exp") {
    need(3);
    return exp(parse_double(parts[2]), dim);
  }
  if (name == "exptower") {
    need(4);
    return exp_tower(static_cast<int>(parse_double(parts[2])), parse_double(parts[3]), dim);
  }
  if (name == "tan") {
    need(3);
    return tan(static_cast<int>(parse_double(parts[2])), dim);
  }
  if (name == "recipln") {
    need(2);
    return recip_ln(dim);
  }
  if (name == "recippower") {
    need(3);
    return recip_power(parse_double(parts[2]), dim);
  }
  if (name == "monomial") {
    std::vector<double> exps;
    for (std::size_t k = 2; k < parts.size(); ++k) exps.push_back(parse_double(parts[k]));
    if (static_cast<int>(exps.size()) != dim) throw Error(ErrorCode::Parse, "monomial exponent count");
    return monomial_multi(std::move(exps));
  }
  throw Error(ErrorCode::Parse, "unknown builtin chain '" + name + "'");
}

// ---------------------------------------------------------------------------
// PfaffianChain

PfaffianChain::PfaffianChain(int dim, std::vector<std::vector<Polynomial>> derivs, Box domain,
                             ChainEvaluator evaluator, OdeOptions ode)
    : dim_(dim),
      derivs_(std::move(derivs)),
      domain_(std::move(domain)),
      evaluator_(std::move(evaluator)),
      ode_(ode) {
  if (dim_ < 1) throw Error(ErrorCode::Parameter, "chain dimension must be positive");
  if (static_cast<int>(domain_.dim()) != dim_) {
    throw Error(ErrorCode::Parameter, "domain dimension does not match chain dimension");
  }
  for (int i = 0; i < dim_; ++i) {
    if (!(domain_.lo[i] < domain_.hi[i])) throw Error(ErrorCode::Parameter, "empty domain box");
  }
  const std::size_t nvars = static_cast<std::size_t>(dim_) + derivs_.size();
  for (std::size_t j = 0; j < derivs_.size(); ++j) {
    if (static_cast<int>(derivs_[j].size()) != dim_) {
      throw Error(ErrorCode::Parameter, fmt::format("chain function {} needs {} derivative "
                                                    "polynomials", j + 1, dim_));
    }
    for (const Polynomial& p : derivs_[j]) {
      if (p.num_vars() != nvars) {
        throw Error(ErrorCode::Parameter, "derivative polynomial has wrong variable count");
      }
      for (std::size_t k = j + 1; k < derivs_.size(); ++k) {
        if (p.degree_in(static_cast<std::size_t>(dim_) + k) > 0) {
          throw Error(ErrorCode::Parameter,
                      fmt::format("derivative of q{} references q{}; chain must be triangular",
                                  j + 1, k + 1));
        }
      }
      alpha_ = std::max(alpha_, p.degree());
    }
  }
  if (const auto* anchor = std::get_if<OdeAnchor>(&evaluator_)) {
    if (static_cast<int>(anchor->point.size()) != dim_ ||
        anchor->values.size() != derivs_.size()) {
      throw Error(ErrorCode::Parameter, "anchor point or values have wrong size");
    }
    if (!domain_.contains(anchor->point)) {
      throw Error(ErrorCode::Domain, "anchor point outside the domain");
    }
  }
}

std::vector<double> PfaffianChain::values(std::span<const double> point) const {
  check_point(*this, point);
  if (const auto* anchor = std::get_if<OdeAnchor>(&evaluator_)) {
    return integrate_from_anchor(*anchor, point);
  }
  return closed_form_values(point);
}

std::vector<double> PfaffianChain::closed_form_values(std::span<const double> point) const {
  const auto* closed = std::get_if<ClosedForm>(&evaluator_);
  if (!closed) throw Error(ErrorCode::Type, "chain has no closed-form evaluator");
  check_point(*this, point);
  const BuiltinSpec& s = closed->spec;
  const double x = point[0];
  switch (s.kind) {
    case BuiltinKind::Empty: return {};
    case BuiltinKind::Exp: return {std::exp(s.a * x)};
    case BuiltinKind::ExpTower: {
      std::vector<double> q;
      double v = std::exp(s.a * x);
      q.push_back(v);
      for (int k = 1; k < s.depth; ++k) {
        v = std::exp(v);
        q.push_back(v);
      }
      return q;
    }
    case BuiltinKind::Tan: return {std::tan(x)};
    case BuiltinKind::RecipLn: return {1.0 / x, std::log(x)};
    case BuiltinKind::RecipPower: return {1.0 / x, std::pow(x, s.m)};
    case BuiltinKind::MonomialMulti: {
      std::vector<double> q;
      double mono = 1.0;
      for (int i = 0; i < s.dim; ++i) {
        q.push_back(1.0 / point[i]);
        mono *= std::pow(point[i], s.exponents[i]);
      }
      q.push_back(mono);
      return q;
    }
  }
  return {};
}

std::vector<double> PfaffianChain::integrate_from_anchor(const OdeAnchor& anchor,
                                                         std::span<const double> point) const {
  const std::vector<double> target(point.begin(), point.end());
  std::vector<double> dir(dim_);
  for (int i = 0; i < dim_; ++i) dir[i] = target[i] - anchor.point[i];
  std::vector<double> vars(static_cast<std::size_t>(dim_) + derivs_.size());
  auto rhs = [&](double t, std::span<const double> q, std::span<double> dq) {
    for (int i = 0; i < dim_; ++i) vars[i] = anchor.point[i] + t * dir[i];
    if (!domain_.contains(std::span<const double>(vars.data(), dim_))) {
      throw Error(ErrorCode::Path, "integration segment leaves the domain");
    }
    std::copy(q.begin(), q.end(), vars.begin() + dim_);
    for (std::size_t j = 0; j < derivs_.size(); ++j) {
      double s = 0.0;
      for (int i = 0; i < dim_; ++i) {
        if (dir[i] != 0.0) s += derivs_[j][i].evaluate(vars) * dir[i];
      }
      dq[j] = s;
    }
  };
  return integrate_dopri5(rhs, 0.0, 1.0, anchor.values, ode_);
}

std::string PfaffianChain::eval_text() const {
  if (const auto* closed = std::get_if<ClosedForm>(&evaluator_)) {
    return "builtin:" + closed->spec.to_text();
  }
  const auto& anchor = std::get<OdeAnchor>(evaluator_);
  std::vector<std::string> pts, vals;
  for (double v : anchor.point) pts.push_back(fmt::format("{:.17g}", v));
  for (double v : anchor.values) vals.push_back(fmt::format("{:.17g}", v));
  return fmt::format("ode:{}|{}", fmt::join(pts, ","), fmt::join(vals, ","));
}

PfaffianChain builtin_chain(const BuiltinSpec& spec) {
  const int d = spec.dim;
  if (d < 1) throw Error(ErrorCode::Parameter, "builtin chain dimension must be positive");
  Box domain = Box::whole(d);
  int r = 0;
  switch (spec.kind) {
    case BuiltinKind::Empty: r = 0; break;
    case BuiltinKind::Exp:
      if (spec.a == 0.0 || !std::isfinite(spec.a)) throw Error(ErrorCode::Parameter, "Exp rate a must be nonzero");
      r = 1;
      break;
    case BuiltinKind::ExpTower:
      if (spec.a == 0.0 || !std::isfinite(spec.a)) throw Error(ErrorCode::Parameter, "ExpTower rate a must be nonzero");
      if (spec.depth < 1) throw Error(ErrorCode::Parameter, "ExpTower depth must be positive");
      r = spec.depth;
      break;
    case BuiltinKind::Tan:
      r = 1;
      domain.lo[0] = spec.period * std::numbers::pi - std::numbers::pi / 2;
      domain.hi[0] = spec.period * std::numbers::pi + std::numbers::pi / 2;
      break;
    case BuiltinKind::RecipLn:
      r = 2;
      domain.lo[0] = 0.0;
      break;
    case BuiltinKind::RecipPower:
      if (!(spec.m > 0.0) || !std::isfinite(spec.m)) throw Error(ErrorCode::Parameter, "RecipPower exponent m must be positive");
      r = 2;
      domain.lo[0] = 0.0;
      break;
    case BuiltinKind::MonomialMulti:
      if (static_cast<int>(spec.exponents.size()) != d) {
        throw Error(ErrorCode::Parameter, "MonomialMulti needs one exponent per coordinate");
      }
      for (double m : spec.exponents) {
        if (!std::isfinite(m)) throw Error(ErrorCode::Parameter, "MonomialMulti exponent must be finite");
      }
      r = d + 1;
      for (int i = 0; i < d; ++i) domain.lo[i] = 0.0;
      break;
  }

  const std::size_t nvars = static_cast<std::size_t>(d + r);
  auto var = [&](int k) { return Polynomial::variable(nvars, static_cast<std::size_t>(k)); };
  auto y = [&](int j) { return var(d + j); };  // 0-based chain index
  auto zero = [&] { return Polynomial(nvars); };
  std::vector<std::vector<Polynomial>> derivs(r, std::vector<Polynomial>(d, zero()));

  switch (spec.kind) {
    case BuiltinKind::Empty: break;
    case BuiltinKind::Exp: derivs[0][0] = Coeff::from_double(spec.a) * y(0); break;
    case BuiltinKind::ExpTower: {
      Polynomial prod = Coeff::from_double(spec.a) * y(0);
      derivs[0][0] = prod;
      for (int k = 1; k < r; ++k) {
        prod = prod * y(k);
        derivs[k][0] = prod;
      }
      break;
    }
    case BuiltinKind::Tan:
      derivs[0][0] = Polynomial::constant(nvars, Coeff(1)) + y(0) * y(0);
      break;
    case BuiltinKind::RecipLn:
      derivs[0][0] = -(y(0) * y(0));
      derivs[1][0] = y(0);
      break;
    case BuiltinKind::RecipPower:
      derivs[0][0] = -(y(0) * y(0));
      derivs[1][0] = Coeff::from_double(spec.m) * (y(0) * y(1));
      break;
    case BuiltinKind::MonomialMulti:
      for (int i = 0; i < d; ++i) {
        derivs[i][i] = -(y(i) * y(i));
        derivs[d][i] = Coeff::from_double(spec.exponents[i]) * (y(i) * y(d));
      }
      break;
  }
  return PfaffianChain(d, std::move(derivs), std::move(domain), ClosedForm{spec});
}

PfaffianChain with_ode_anchor(const PfaffianChain& chain, std::vector<double> anchor,
                              OdeOptions ode) {
  std::vector<double> values = chain.values(anchor);
  std::vector<std::vector<Polynomial>> derivs;
  for (int j = 0; j < chain.order(); ++j) {
    std::vector<Polynomial> row;
    for (int i = 0; i < chain.dim(); ++i) row.push_back(chain.derivative_poly(i, j));
    derivs.push_back(std::move(row));
  }
  return PfaffianChain(chain.dim(), std::move(derivs), chain.domain(),
                       OdeAnchor{std::move(anchor), std::move(values)}, ode);
}

std::vector<double> chain_values(const PfaffianChain& chain, std::span<const double> point) {
  return chain.values(point);
}

// ---------------------------------------------------------------------------
// PfaffianFunction

std::vector<std::string> variable_names(int dim, int order) {
  std::vector<std::string> names;
  if (dim == 1) {
    names.push_back("x");
  } else if (dim == 2) {
    names = {"x", "y"};
  } else {
    for (int i = 1; i <= dim; ++i) names.push_back("x" + std::to_string(i));
  }
  for (int j = 1; j <= order; ++j) names.push_back("q" + std::to_string(j));
  return names;
}

PfaffianFunction::PfaffianFunction(PfaffianChain chain, Polynomial q)
    : chain_(std::move(chain)), q_(std::move(q)) {
  const std::size_t nvars = static_cast<std::size_t>(chain_.dim() + chain_.order());
  if (q_.num_vars() != nvars) {
    throw Error(ErrorCode::Parameter,
                fmt::format("defining polynomial has {} variables, expected d + r = {}",
                            q_.num_vars(), nvars));
  }
  for (std::size_t k = 0; k < nvars; ++k) dq_.push_back(q_.derivative(k));
}

PfaffianFunction PfaffianFunction::from_expression(PfaffianChain chain, std::string_view expr) {
  auto names = variable_names(chain.dim(), chain.order());
  Polynomial q = Polynomial::parse_expression(expr, names);
  return PfaffianFunction(std::move(chain), std::move(q));
}

double PfaffianFunction::operator()(std::span<const double> point) const {
  const auto q = chain_.values(point);
  return q_.evaluate(concat(point, q));
}

double PfaffianFunction::eval(double x, double y) const {
  const double p[2] = {x, y};
  return (*this)(p);
}

std::vector<double> PfaffianFunction::gradient(std::span<const double> point) const {
  const auto q = chain_.values(point);
  const auto vars = concat(point, q);
  const int d = chain_.dim();
  const int r = chain_.order();
  std::vector<double> dq_vals(dq_.size());
  for (std::size_t k = 0; k < dq_.size(); ++k) dq_vals[k] = dq_[k].evaluate(vars);
  std::vector<double> grad(d);
  for (int i = 0; i < d; ++i) {
    double g = dq_vals[i];
    for (int j = 0; j < r; ++j) {
      const double dqdy = dq_vals[d + j];
      if (dqdy != 0.0) g += dqdy * chain_.derivative_poly(i, j).evaluate(vars);
    }
    grad[i] = g;
  }
  return grad;
}

std::string PfaffianFunction::to_text() const {
  const int d = chain_.dim();
  const int r = chain_.order();
  std::vector<std::string> box;
  for (int i = 0; i < d; ++i) {
    box.push_back(format_bound(chain_.domain().lo[i]) + "," + format_bound(chain_.domain().hi[i]));
  }
  std::string out = fmt::format("{} {} {} {} domain={} eval={}\n", d, r, chain_.chain_degree(),
                                q_.degree(), fmt::join(box, ";"), chain_.eval_text());
  for (int j = 0; j < r; ++j) {
    for (int i = 0; i < d; ++i) out += chain_.derivative_poly(i, j).to_terms() + "\n";
  }
  out += q_.to_terms() + "\n";
  return out;
}

PfaffianFunction PfaffianFunction::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string header;
  if (!std::getline(in, header)) throw Error(ErrorCode::Parse, "missing header line");
  std::istringstream hs(header);
  int d = 0, r = 0, alpha = 0, beta = 0;
  std::string domain_tok, eval_tok;
  if (!(hs >> d >> r >> alpha >> beta >> domain_tok >> eval_tok)) {
    throw Error(ErrorCode::Parse, "header must be 'd r alpha beta domain=... eval=...'");
  }
  if (d < 1 || r < 0) throw Error(ErrorCode::Parse, "bad dimension or order in header");
  if (domain_tok.rfind("domain=", 0) != 0 || eval_tok.rfind("eval=", 0) != 0) {
    throw Error(ErrorCode::Parse, "header must carry domain= and eval= fields");
  }
  Box box;
  const auto intervals = split(domain_tok.substr(7), ';');
  if (static_cast<int>(intervals.size()) != d) throw Error(ErrorCode::Parse, "domain interval count");
  for (const auto& iv : intervals) {
    const auto bounds = parse_doubles(iv);
    if (bounds.size() != 2) throw Error(ErrorCode::Parse, "domain interval needs lo,hi");
    box.lo.push_back(bounds[0]);
    box.hi.push_back(bounds[1]);
  }
  const std::size_t nvars = static_cast<std::size_t>(d + r);
  std::vector<std::vector<Polynomial>> derivs(r);
  std::string line;
  for (int j = 0; j < r; ++j) {
    for (int i = 0; i < d; ++i) {
      if (!std::getline(in, line)) throw Error(ErrorCode::Parse, "missing derivative polynomial line");
      derivs[j].push_back(Polynomial::parse_terms(line, nvars));
    }
  }
  if (!std::getline(in, line)) throw Error(ErrorCode::Parse, "missing defining polynomial line");
  Polynomial q = Polynomial::parse_terms(line, nvars);

  const std::string ev = eval_tok.substr(5);
  ChainEvaluator evaluator;
  if (ev.rfind("builtin:", 0) == 0) {
    evaluator = ClosedForm{BuiltinSpec::parse(ev.substr(8))};
  } else if (ev.rfind("ode:", 0) == 0) {
    const auto bar = ev.find('|');
    if (bar == std::string::npos) throw Error(ErrorCode::Parse, "ode evaluator needs 'anchor|values'");
    evaluator = OdeAnchor{parse_doubles(ev.substr(4, bar - 4)), parse_doubles(ev.substr(bar + 1))};
  } else {
    throw Error(ErrorCode::Parse, "unknown evaluator '" + ev + "'");
  }
  PfaffianChain chain(d, std::move(derivs), std::move(box), std::move(evaluator));
  if (chain.chain_degree() != alpha || q.degree() != beta) {
    throw Error(ErrorCode::Parse, fmt::format("header format ({}, {}) disagrees with polynomials "
                                              "({}, {})", alpha, beta, chain.chain_degree(),
                                              q.degree()));
  }
  return PfaffianFunction(std::move(chain), std::move(q));
}

double pfaff_eval(const PfaffianFunction& f, std::span<const double> point) { return f(point); }

std::vector<double> pfaff_gradient(const PfaffianFunction& f, std::span<const double> point) {
  return f.gradient(point);
}

// ---------------------------------------------------------------------------
// Component bound

BigInt component_bound(const Format& fmt, int d) {
  if (d < 1) throw Error(ErrorCode::Parameter, "dimension must be at least 1");
  if (fmt.alpha < 0 || fmt.beta < 0 || fmt.order < 0) {
    throw Error(ErrorCode::Parameter, "format entries must be nonnegative");
  }
  if (fmt.beta == 0) throw Error(ErrorCode::UndefinedInput, "component bound needs beta >= 1");
  using boost::multiprecision::pow;
  const long long r = fmt.order;
  const BigInt two_power = pow(BigInt(2), static_cast<unsigned>(r * (r - 1) / 2 + 1));
  const BigInt middle = pow(BigInt(fmt.alpha + 2 * fmt.beta - 1), static_cast<unsigned>(d - 1));
  const BigInt last_base =
      BigInt(2 * d - 1) * BigInt(fmt.alpha + fmt.beta) - BigInt(2 * d) + BigInt(2);
  return two_power * BigInt(fmt.beta) * middle * pow(last_base, static_cast<unsigned>(r));
}

int count_sign_changes(const PfaffianFunction& f, double lo, double hi, int samples) {
  if (f.dim() != 1) throw Error(ErrorCode::Parameter, "sign-change scan needs a univariate function");
  if (samples < 1 || !(lo < hi)) throw Error(ErrorCode::Parameter, "bad scan interval");
  int count = 0;
  int last = 0;
  for (int k = 0; k <= samples; ++k) {
    const double x = lo + (hi - lo) * k / samples;
    const double v = f(std::span<const double>(&x, 1));
    const int s = (v > 0) - (v < 0);
    if (s == 0) {
      if (last != 0 || k == 0) ++count;
      last = 0;
      continue;
    }
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

}  // namespace pfaffdist::pfaffian
