#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pfaffdist/common.hpp"

namespace pfaffdist {

// Polynomial coefficient. Exact rational when built from integer or rational
// input, floating otherwise; any arithmetic touching a floating value yields a
// floating value.
class Coeff {
 public:
  Coeff() : value_(Rational(0)) {}
  Coeff(int v) : value_(Rational(v)) {}
  Coeff(long long v) : value_(Rational(v)) {}
  Coeff(Rational v) : value_(std::move(v)) {}

  static Coeff real(double v) {
    Coeff c;
    c.value_ = v;
    return c;
  }
  // Exact when v is an integer of moderate size, floating otherwise.
  static Coeff from_double(double v);

  bool is_exact() const { return std::holds_alternative<Rational>(value_); }
  bool is_zero() const;
  double to_double() const;
  const Rational& exact() const;

  Coeff operator-() const;
  friend Coeff operator+(const Coeff& a, const Coeff& b);
  friend Coeff operator-(const Coeff& a, const Coeff& b);
  friend Coeff operator*(const Coeff& a, const Coeff& b);
  friend Coeff operator/(const Coeff& a, const Coeff& b);
  // Exact values compare exactly; a floating value never equals an exact one.
  friend bool operator==(const Coeff& a, const Coeff& b);

  // Exact coefficients print as "p" or "p/q"; floating ones always carry a
  // decimal point or exponent so the two kinds survive a text round trip.
  std::string to_string() const;
  static Coeff parse(std::string_view text);

 private:
  std::variant<Rational, double> value_;
};

// Sparse multivariate polynomial over Coeff with a fixed variable count.
class Polynomial {
 public:
  using Exponents = std::vector<int>;
  using TermMap = std::map<Exponents, Coeff>;

  explicit Polynomial(std::size_t num_vars = 0) : num_vars_(num_vars) {}

  static Polynomial constant(std::size_t num_vars, const Coeff& c);
  static Polynomial variable(std::size_t num_vars, std::size_t index);

  // Parses an expression such as "x^2 + 3/2*x*y - 0.5*q1" over the named
  // variables. Supports + - * ^ (nonnegative integer powers) and parentheses.
  static Polynomial parse_expression(std::string_view text,
                                     const std::vector<std::string>& var_names);
  // Sparse term list "coeff:e1,e2,... coeff:e1,e2,..."; empty means zero.
  static Polynomial parse_terms(std::string_view text, std::size_t num_vars);
  std::string to_terms() const;

  std::size_t num_vars() const { return num_vars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_exact() const;
  int degree() const;
  // Highest exponent of one variable across all terms.
  int degree_in(std::size_t var) const;

  void add_term(Exponents exps, const Coeff& c);
  Coeff coefficient(const Exponents& exps) const;

  double evaluate(std::span<const double> point) const;
  Rational evaluate_exact(std::span<const Rational> point) const;

  Polynomial derivative(std::size_t var) const;
  // Replaces variable `var` by `value` (same variable count).
  Polynomial substitute(std::size_t var, const Polynomial& value) const;
  Polynomial pow(int k) const;
  // Same polynomial over a different variable count; dropped variables must be
  // absent.
  Polynomial resized(std::size_t num_vars) const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Coeff& s, const Polynomial& p);
  friend bool operator==(const Polynomial& a, const Polynomial& b);

 private:
  void check_compatible(const Polynomial& other) const;

  std::size_t num_vars_;
  TermMap terms_;
};

}  // namespace pfaffdist
