#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pfaffdist/common.hpp"
#include "pfaffdist/ode.hpp"
#include "pfaffdist/polynomial.hpp"

namespace pfaffdist::pfaffian {

// Open axis-aligned box; bounds may be infinite.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  static Box whole(std::size_t dim);
  std::size_t dim() const { return lo.size(); }
  bool contains(std::span<const double> x) const;
};

struct Format {
  int alpha = 0;
  int beta = 0;
  int order = 0;
};

enum class BuiltinKind { Empty, Exp, ExpTower, Tan, RecipLn, RecipPower, MonomialMulti };

// Parameters of a builtin chain. One-variable builtins act on the first
// coordinate of a `dim`-dimensional space; MonomialMulti uses every coordinate.
struct BuiltinSpec {
  BuiltinKind kind = BuiltinKind::Empty;
  int dim = 1;
  double a = 1.0;                  // Exp, ExpTower rate
  int depth = 1;                   // ExpTower
  int period = 0;                  // Tan: domain (period*pi - pi/2, period*pi + pi/2)
  double m = 1.0;                  // RecipPower exponent
  std::vector<double> exponents;   // MonomialMulti

  static BuiltinSpec empty(int dim = 1) { return {BuiltinKind::Empty, dim, 1.0, 1, 0, 1.0, {}}; }
  static BuiltinSpec exp(double a, int dim = 1) { return {BuiltinKind::Exp, dim, a, 1, 0, 1.0, {}}; }
  static BuiltinSpec exp_tower(int depth, double a, int dim = 1) {
    return {BuiltinKind::ExpTower, dim, a, depth, 0, 1.0, {}};
  }
  static BuiltinSpec tan(int period = 0, int dim = 1) {
    return {BuiltinKind::Tan, dim, 1.0, 1, period, 1.0, {}};
  }
  static BuiltinSpec recip_ln(int dim = 1) { return {BuiltinKind::RecipLn, dim, 1.0, 1, 0, 1.0, {}}; }
  static BuiltinSpec recip_power(double m, int dim = 1) {
    return {BuiltinKind::RecipPower, dim, 1.0, 1, 0, m, {}};
  }
  static BuiltinSpec monomial_multi(std::vector<double> exps) {
    return {BuiltinKind::MonomialMulti, static_cast<int>(exps.size()), 1.0, 1, 0, 1.0,
            std::move(exps)};
  }

  std::string to_text() const;
  static BuiltinSpec parse(std::string_view text);
};

struct ClosedForm {
  BuiltinSpec spec;
};

// Chain values known at an anchor point; values elsewhere come from
// integrating the derivative system along the segment from the anchor.
struct OdeAnchor {
  std::vector<double> point;
  std::vector<double> values;
};

using ChainEvaluator = std::variant<ClosedForm, OdeAnchor>;

class PfaffianChain {
 public:
  // derivs[j][i] is P_{i,j}, the derivative of q_j along x_i, as a polynomial
  // over (x_1..x_d, y_1..y_r). Validates the triangular condition.
  PfaffianChain(int dim, std::vector<std::vector<Polynomial>> derivs, Box domain,
                ChainEvaluator evaluator, OdeOptions ode = {});

  int dim() const { return dim_; }
  int order() const { return static_cast<int>(derivs_.size()); }
  int chain_degree() const { return alpha_; }
  const Box& domain() const { return domain_; }
  const ChainEvaluator& evaluator() const { return evaluator_; }
  const OdeOptions& ode_options() const { return ode_; }
  // P_{i,j} with 0-based variable index i and chain index j.
  const Polynomial& derivative_poly(int var, int chain_index) const {
    return derivs_.at(chain_index).at(var);
  }

  std::vector<double> values(std::span<const double> point) const;
  // Always uses the closed form; throws Type when the chain has none.
  std::vector<double> closed_form_values(std::span<const double> point) const;

  // Text form: header "d r alpha beta domain=lo,hi;... eval=..." written by
  // PfaffianFunction; the chain contributes the P lines.
  std::string eval_text() const;

 private:
  std::vector<double> integrate_from_anchor(const OdeAnchor& anchor,
                                            std::span<const double> point) const;

  int dim_;
  int alpha_ = 0;
  std::vector<std::vector<Polynomial>> derivs_;
  Box domain_;
  ChainEvaluator evaluator_;
  OdeOptions ode_;
};

PfaffianChain builtin_chain(const BuiltinSpec& spec);

// Same chain evaluated by integration from `anchor`; anchor values are taken
// from the chain's current evaluator.
PfaffianChain with_ode_anchor(const PfaffianChain& chain, std::vector<double> anchor,
                              OdeOptions ode = {});

class PfaffianFunction {
 public:
  // q is a polynomial over (x_1..x_d, y_1..y_r).
  PfaffianFunction(PfaffianChain chain, Polynomial q);
  // Parses q over variable names x,y (d=2) or x (d=1) or x1..xd, then q1..qr.
  static PfaffianFunction from_expression(PfaffianChain chain, std::string_view expr);

  const PfaffianChain& chain() const { return chain_; }
  const Polynomial& polynomial() const { return q_; }
  int dim() const { return chain_.dim(); }
  Format format() const { return {chain_.chain_degree(), q_.degree(), chain_.order()}; }

  double operator()(std::span<const double> point) const;
  double eval(double x, double y) const;
  std::vector<double> gradient(std::span<const double> point) const;

  std::string to_text() const;
  static PfaffianFunction parse(std::string_view text);

 private:
  PfaffianChain chain_;
  Polynomial q_;
  std::vector<Polynomial> dq_;  // dQ/dx_i then dQ/dy_j
};

std::vector<std::string> variable_names(int dim, int order);

double pfaff_eval(const PfaffianFunction& f, std::span<const double> point);
std::vector<double> pfaff_gradient(const PfaffianFunction& f, std::span<const double> point);
std::vector<double> chain_values(const PfaffianChain& chain, std::span<const double> point);

// Upper bound on connected components of a zero set of format fmt in d
// variables. Throws UndefinedInput for beta = 0.
BigInt component_bound(const Format& fmt, int d);

// Sign changes of a univariate function on a uniform grid over [lo, hi],
// counting exact grid zeros once.
int count_sign_changes(const PfaffianFunction& f, double lo, double hi, int samples);

}  // namespace pfaffdist::pfaffian
