#include "pfaffdist/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include <fmt/format.h>

namespace pfaffdist {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parameter: return "parameter";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::Path: return "path";
    case ErrorCode::Convergence: return "convergence";
    case ErrorCode::UndefinedInput: return "undefined-input";
    case ErrorCode::Bracket: return "bracket";
    case ErrorCode::GraphCondition: return "graph-condition";
    case ErrorCode::Seed: return "seed";
    case ErrorCode::Configuration: return "configuration";
    case ErrorCode::Tolerance: return "tolerance";
    case ErrorCode::Precondition: return "precondition";
    case ErrorCode::Degenerate: return "degenerate";
    case ErrorCode::Inconclusive: return "inconclusive";
    case ErrorCode::Inconsistency: return "inconsistency";
    case ErrorCode::Window: return "window";
    case ErrorCode::Type: return "type";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Io: return "io";
    case ErrorCode::IdentityViolation: return "identity-violation";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Coeff

Coeff Coeff::from_double(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 9.0e15) {
    return Coeff(static_cast<long long>(v));
  }
  return real(v);
}

bool Coeff::is_zero() const {
  if (is_exact()) return std::get<Rational>(value_) == 0;
  return std::get<double>(value_) == 0.0;
}

double Coeff::to_double() const {
  if (is_exact()) return std::get<Rational>(value_).convert_to<double>();
  return std::get<double>(value_);
}

const Rational& Coeff::exact() const {
  if (!is_exact()) throw Error(ErrorCode::Type, "coefficient is not exact");
  return std::get<Rational>(value_);
}

Coeff Coeff::operator-() const {
  if (is_exact()) return Coeff(Rational(-std::get<Rational>(value_)));
  return real(-std::get<double>(value_));
}

Coeff operator+(const Coeff& a, const Coeff& b) {
  if (a.is_exact() && b.is_exact()) return Coeff(Rational(a.exact() + b.exact()));
  return Coeff::real(a.to_double() + b.to_double());
}

Coeff operator-(const Coeff& a, const Coeff& b) { return a + (-b); }

Coeff operator*(const Coeff& a, const Coeff& b) {
  if (a.is_exact() && b.is_exact()) return Coeff(Rational(a.exact() * b.exact()));
  return Coeff::real(a.to_double() * b.to_double());
}

Coeff operator/(const Coeff& a, const Coeff& b) {
  if (b.is_zero()) throw Error(ErrorCode::UndefinedInput, "division by zero coefficient");
  if (a.is_exact() && b.is_exact()) return Coeff(Rational(a.exact() / b.exact()));
  return Coeff::real(a.to_double() / b.to_double());
}

bool operator==(const Coeff& a, const Coeff& b) {
  if (a.is_exact() != b.is_exact()) return false;
  if (a.is_exact()) return a.exact() == b.exact();
  return a.to_double() == b.to_double();
}

std::string Coeff::to_string() const {
  if (is_exact()) return std::get<Rational>(value_).str();
  std::string s = fmt::format("{:.17g}", std::get<double>(value_));
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

Coeff Coeff::parse(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw Error(ErrorCode::Parse, "empty coefficient");
  const bool floating = s.find_first_of(".eEiInN") != std::string::npos;
  try {
    if (floating) {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw Error(ErrorCode::Parse, "bad coefficient '" + s + "'");
      return real(v);
    }
    const auto slash = s.find('/');
    if (slash == std::string::npos) return Coeff(Rational(BigInt(s)));
    const BigInt num(s.substr(0, slash));
    const BigInt den(s.substr(slash + 1));
    if (den == 0) throw Error(ErrorCode::Parse, "zero denominator in '" + s + "'");
    return Coeff(Rational(num, den));
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw Error(ErrorCode::Parse, "bad coefficient '" + s + "'");
  }
}

// ---------------------------------------------------------------------------
// Polynomial

Polynomial Polynomial::constant(std::size_t num_vars, const Coeff& c) {
  Polynomial p(num_vars);
  p.add_term(Exponents(num_vars, 0), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t num_vars, std::size_t index) {
  if (index >= num_vars) throw Error(ErrorCode::Parameter, "variable index out of range");
  Polynomial p(num_vars);
  Exponents e(num_vars, 0);
  e[index] = 1;
  p.add_term(std::move(e), Coeff(1));
  return p;
}

bool Polynomial::is_exact() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const auto& t) { return t.second.is_exact(); });
}

int Polynomial::degree() const {
  int deg = 0;
  for (const auto& [exps, c] : terms_) {
    int sum = 0;
    for (int e : exps) sum += e;
    deg = std::max(deg, sum);
  }
  return deg;
}

int Polynomial::degree_in(std::size_t var) const {
  int deg = 0;
  for (const auto& [exps, c] : terms_) deg = std::max(deg, exps.at(var));
  return deg;
}

void Polynomial::add_term(Exponents exps, const Coeff& c) {
  if (exps.size() != num_vars_) {
    throw Error(ErrorCode::Parameter,
                fmt::format("exponent vector has {} entries, expected {}", exps.size(), num_vars_));
  }
  if (std::any_of(exps.begin(), exps.end(), [](int e) { return e < 0; })) {
    throw Error(ErrorCode::Parameter, "negative exponent");
  }
  auto it = terms_.find(exps);
  if (it == terms_.end()) {
    if (!c.is_zero()) terms_.emplace(std::move(exps), c);
    return;
  }
  it->second = it->second + c;
  if (it->second.is_zero()) terms_.erase(it);
}

Coeff Polynomial::coefficient(const Exponents& exps) const {
  auto it = terms_.find(exps);
  return it == terms_.end() ? Coeff(0) : it->second;
}

double Polynomial::evaluate(std::span<const double> point) const {
  if (point.size() != num_vars_) {
    throw Error(ErrorCode::Parameter,
                fmt::format("polynomial over {} variables evaluated at {} values", num_vars_,
                            point.size()));
  }
  double sum = 0.0;
  for (const auto& [exps, c] : terms_) {
    double term = c.to_double();
    for (std::size_t k = 0; k < num_vars_; ++k) {
      for (int e = 0; e < exps[k]; ++e) term *= point[k];
    }
    sum += term;
  }
  return sum;
}

Rational Polynomial::evaluate_exact(std::span<const Rational> point) const {
  if (point.size() != num_vars_) throw Error(ErrorCode::Parameter, "wrong point dimension");
  Rational sum = 0;
  for (const auto& [exps, c] : terms_) {
    Rational term = c.exact();
    for (std::size_t k = 0; k < num_vars_; ++k) {
      for (int e = 0; e < exps[k]; ++e) term *= point[k];
    }
    sum += term;
  }
  return sum;
}

Polynomial Polynomial::derivative(std::size_t var) const {
  if (var >= num_vars_) throw Error(ErrorCode::Parameter, "variable index out of range");
  Polynomial out(num_vars_);
  for (const auto& [exps, c] : terms_) {
    if (exps[var] == 0) continue;
    Exponents e = exps;
    const int k = e[var]--;
    out.add_term(std::move(e), Coeff(k) * c);
  }
  return out;
}

Polynomial Polynomial::substitute(std::size_t var, const Polynomial& value) const {
  check_compatible(value);
  if (var >= num_vars_) throw Error(ErrorCode::Parameter, "variable index out of range");
  std::vector<Polynomial> powers{constant(num_vars_, Coeff(1))};
  Polynomial out(num_vars_);
  for (const auto& [exps, c] : terms_) {
    const int k = exps[var];
    while (static_cast<int>(powers.size()) <= k) powers.push_back(powers.back() * value);
    Exponents rest = exps;
    rest[var] = 0;
    Polynomial mono(num_vars_);
    mono.add_term(std::move(rest), c);
    out += mono * powers[k];
  }
  return out;
}

Polynomial Polynomial::pow(int k) const {
  if (k < 0) throw Error(ErrorCode::Parameter, "negative power");
  Polynomial out = constant(num_vars_, Coeff(1));
  for (int i = 0; i < k; ++i) out = out * *this;
  return out;
}

Polynomial Polynomial::resized(std::size_t num_vars) const {
  Polynomial out(num_vars);
  for (const auto& [exps, c] : terms_) {
    Exponents e(num_vars, 0);
    for (std::size_t k = 0; k < exps.size(); ++k) {
      if (k < num_vars) {
        e[k] = exps[k];
      } else if (exps[k] != 0) {
        throw Error(ErrorCode::Parameter, "resize would drop a used variable");
      }
    }
    out.add_term(std::move(e), c);
  }
  return out;
}

Polynomial Polynomial::operator-() const {
  Polynomial out(num_vars_);
  for (const auto& [exps, c] : terms_) out.terms_.emplace(exps, -c);
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  check_compatible(other);
  for (const auto& [exps, c] : other.terms_) add_term(exps, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  check_compatible(other);
  for (const auto& [exps, c] : other.terms_) add_term(exps, -c);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.check_compatible(b);
  Polynomial out(a.num_vars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      Polynomial::Exponents e(a.num_vars_);
      for (std::size_t k = 0; k < e.size(); ++k) e[k] = ea[k] + eb[k];
      out.add_term(std::move(e), ca * cb);
    }
  }
  return out;
}

Polynomial operator*(const Coeff& s, const Polynomial& p) {
  return Polynomial::constant(p.num_vars_, s) * p;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  return a.num_vars_ == b.num_vars_ && a.terms_ == b.terms_;
}

void Polynomial::check_compatible(const Polynomial& other) const {
  if (other.num_vars_ != num_vars_) {
    throw Error(ErrorCode::Parameter,
                fmt::format("polynomials over {} and {} variables mixed", num_vars_,
                            other.num_vars_));
  }
}

// ---------------------------------------------------------------------------
// Text forms

std::string Polynomial::to_terms() const {
  std::string out;
  for (const auto& [exps, c] : terms_) {
    if (!out.empty()) out += ' ';
    out += c.to_string();
    out += ':';
    for (std::size_t k = 0; k < exps.size(); ++k) {
      if (k) out += ',';
      out += std::to_string(exps[k]);
    }
  }
  return out;
}

Polynomial Polynomial::parse_terms(std::string_view text, std::size_t num_vars) {
  Polynomial p(num_vars);
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    const auto colon = token.find(':');
    if (colon == std::string::npos) throw Error(ErrorCode::Parse, "term without ':' in '" + token + "'");
    Exponents exps;
    std::string rest = token.substr(colon + 1);
    if (num_vars > 0) {
      std::istringstream es(rest);
      std::string piece;
      while (std::getline(es, piece, ',')) {
        char* end = nullptr;
        const long v = std::strtol(piece.c_str(), &end, 10);
        if (piece.empty() || *end != '\0') throw Error(ErrorCode::Parse, "bad exponent in '" + token + "'");
        exps.push_back(static_cast<int>(v));
      }
    } else if (!rest.empty()) {
      throw Error(ErrorCode::Parse, "exponents given for a zero-variable polynomial");
    }
    if (exps.size() != num_vars) {
      throw Error(ErrorCode::Parse, fmt::format("term '{}' has {} exponents, expected {}", token,
                                                exps.size(), num_vars));
    }
    p.add_term(std::move(exps), Coeff::parse(token.substr(0, colon)));
  }
  return p;
}

namespace {

class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, const std::vector<std::string>& names)
      : text_(text), names_(names) {}

  Polynomial parse() {
    Polynomial p = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return p;
  }

 private:
  Polynomial expr() {
    Polynomial acc = term();
    for (;;) {
      skip_space();
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  Polynomial term() {
    Polynomial acc = unary();
    for (;;) {
      skip_space();
      if (accept('*')) {
        acc = acc * unary();
      } else if (accept('/')) {
        Polynomial den = unary();
        if (den.degree() != 0 || den.is_zero()) fail("division only by nonzero constants");
        acc = (Coeff(1) / den.coefficient(Polynomial::Exponents(names_.size(), 0))) * acc;
      } else {
        return acc;
      }
    }
  }

  Polynomial unary() {
    skip_space();
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Polynomial power() {
    Polynomial base = atom();
    skip_space();
    if (accept('^')) {
      skip_space();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected integer exponent");
      base = base.pow(std::stoi(std::string(text_.substr(start, pos_ - start))));
    }
    return base;
  }

  Polynomial atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char ch = text_[pos_];
    if (accept('(')) {
      Polynomial p = expr();
      skip_space();
      if (!accept(')')) fail("expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
                                     text_[pos_] == '.')) {
        ++pos_;
      }
      if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
        ++pos_;
        if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
      return Polynomial::constant(names_.size(), Coeff::parse(text_.substr(start, pos_ - start)));
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                     text_[pos_] == '_')) {
        ++pos_;
      }
      const std::string name(text_.substr(start, pos_ - start));
      const auto it = std::find(names_.begin(), names_.end(), name);
      if (it == names_.end()) fail("unknown variable '" + name + "'");
      return Polynomial::variable(names_.size(), static_cast<std::size_t>(it - names_.begin()));
    }
    fail(std::string("unexpected character '") + ch + "'");
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::Parse, fmt::format("{} at offset {} in '{}'", msg, pos_, text_));
  }

  std::string_view text_;
  const std::vector<std::string>& names_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial Polynomial::parse_expression(std::string_view text,
                                        const std::vector<std::string>& var_names) {
  return ExpressionParser(text, var_names).parse();
}

}  // namespace pfaffdist
