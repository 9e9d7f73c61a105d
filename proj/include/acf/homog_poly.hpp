#pragma once

// Homogeneous polynomials over the rationals in a fixed number of variables.

#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <utility>

#include "acf/error.hpp"
#include "acf/monomial.hpp"
#include "acf/rational.hpp"

namespace acf {

class HomogPoly {
 public:
  // Descending lex keeps x^k first, which is also the serialization order.
  using Terms = std::map<Exponent, Rational, std::greater<Exponent>>;

  HomogPoly() = default;
  HomogPoly(unsigned num_vars, unsigned degree) : num_vars_(num_vars), degree_(degree) {
    if (num_vars == 0) throw ContractError("HomogPoly needs at least one variable");
  }

  static HomogPoly monomial(unsigned num_vars, const Exponent& exp, const Rational& coeff = 1) {
    HomogPoly p(num_vars, total_degree(exp));
    p.add_term(exp, coeff);
    return p;
  }

  static HomogPoly constant(unsigned num_vars, const Rational& c) {
    return monomial(num_vars, Exponent(num_vars, 0), c);
  }

  // The coordinate function x_i as a degree-1 polynomial.
  static HomogPoly variable(unsigned num_vars, unsigned index) {
    if (index >= num_vars) throw MismatchError("variable index " + std::to_string(index) + " out of range");
    Exponent e(num_vars, 0);
    e[index] = 1;
    return monomial(num_vars, e);
  }

  unsigned num_vars() const { return num_vars_; }
  unsigned degree() const { return degree_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Rational coeff(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void set_coeff(const Exponent& e, const Rational& c) {
    check_exponent(e);
    if (acf::is_zero(c)) {
      terms_.erase(e);
    } else {
      terms_[e] = c;
    }
  }

  void add_term(const Exponent& e, const Rational& c) {
    check_exponent(e);
    if (acf::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (acf::is_zero(it->second)) terms_.erase(it);
    }
  }

  HomogPoly& operator+=(const HomogPoly& o) {
    check_same_shape(o, "add");
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }

  HomogPoly& operator-=(const HomogPoly& o) {
    check_same_shape(o, "sub");
    for (const auto& [e, c] : o.terms_) add_term(e, Rational(-c));
    return *this;
  }

  HomogPoly& operator*=(const Rational& s) {
    if (acf::is_zero(s)) {
      terms_.clear();
    } else {
      for (auto& [e, c] : terms_) c *= s;
    }
    return *this;
  }

  friend bool operator==(const HomogPoly& a, const HomogPoly& b) {
    return a.num_vars_ == b.num_vars_ && a.degree_ == b.degree_ && a.terms_ == b.terms_;
  }

 private:
  void check_exponent(const Exponent& e) const {
    if (e.size() != num_vars_) {
      throw MismatchError("exponent has " + std::to_string(e.size()) + " entries, polynomial has " +
                          std::to_string(num_vars_) + " variables");
    }
    if (total_degree(e) != degree_) {
      throw MismatchError("exponent of degree " + std::to_string(total_degree(e)) +
                          " in homogeneous polynomial of degree " + std::to_string(degree_));
    }
  }

  void check_same_shape(const HomogPoly& o, const char* op) const {
    if (num_vars_ != o.num_vars_) {
      throw MismatchError(std::string(op) + ": num_vars mismatch (" + std::to_string(num_vars_) + " vs " +
                          std::to_string(o.num_vars_) + ")");
    }
    if (degree_ != o.degree_) {
      throw MismatchError(std::string(op) + ": degree mismatch (" + std::to_string(degree_) + " vs " +
                          std::to_string(o.degree_) + ")");
    }
  }

  unsigned num_vars_ = 1;
  unsigned degree_ = 0;
  Terms terms_;
};

inline HomogPoly operator+(HomogPoly a, const HomogPoly& b) { return a += b; }
inline HomogPoly operator-(HomogPoly a, const HomogPoly& b) { return a -= b; }
inline HomogPoly operator-(HomogPoly a) { return a *= Rational(-1); }
inline HomogPoly operator*(HomogPoly a, const Rational& s) { return a *= s; }
inline HomogPoly operator*(const Rational& s, HomogPoly a) { return a *= s; }

inline HomogPoly operator*(const HomogPoly& a, const HomogPoly& b) {
  if (a.num_vars() != b.num_vars()) {
    throw MismatchError("mul: num_vars mismatch (" + std::to_string(a.num_vars()) + " vs " +
                        std::to_string(b.num_vars()) + ")");
  }
  HomogPoly r(a.num_vars(), a.degree() + b.degree());
  for (const auto& [ea, ca] : a.terms()) {
    for (const auto& [eb, cb] : b.terms()) r.add_term(add_exponents(ea, eb), ca * cb);
  }
  return r;
}

inline HomogPoly multiply_monomial(const HomogPoly& p, const Exponent& m) {
  if (m.size() != p.num_vars()) throw MismatchError("monomial/polynomial num_vars mismatch");
  HomogPoly r(p.num_vars(), p.degree() + total_degree(m));
  for (const auto& [e, c] : p.terms()) r.add_term(add_exponents(e, m), c);
  return r;
}

// The derivative of a degree-0 polynomial is the zero polynomial of degree 0.
inline HomogPoly partial(const HomogPoly& p, unsigned var) {
  if (var >= p.num_vars()) {
    throw MismatchError("partial: variable index " + std::to_string(var) + " out of range for " +
                        std::to_string(p.num_vars()) + " variables");
  }
  HomogPoly r(p.num_vars(), p.degree() == 0 ? 0 : p.degree() - 1);
  for (const auto& [e, c] : p.terms()) {
    if (e[var] == 0) continue;
    Exponent f = e;
    f[var] -= 1;
    r.add_term(f, c * e[var]);
  }
  return r;
}

// Monomial-wise antiderivative: x^e -> x^{e + e_var} / (e_var + 1). The result
// has no terms free of the integration variable.
inline HomogPoly antiderivative(const HomogPoly& p, unsigned var) {
  if (var >= p.num_vars()) {
    throw MismatchError("antiderivative: variable index " + std::to_string(var) + " out of range");
  }
  HomogPoly r(p.num_vars(), p.degree() + 1);
  for (const auto& [e, c] : p.terms()) {
    Exponent f = e;
    f[var] += 1;
    r.add_term(f, c / Rational(f[var]));
  }
  return r;
}

// Max absolute coefficient; zero for the zero polynomial.
inline Rational coeff_norm(const HomogPoly& p) {
  Rational m = 0;
  for (const auto& [e, c] : p.terms()) {
    Rational a = abs_value(c);
    if (a > m) m = a;
  }
  return m;
}

inline std::string format_poly(const HomogPoly& p, const std::vector<std::string>& names = {}) {
  if (p.is_zero()) return "0";
  static const char* defaults[] = {"x", "y", "z", "w"};
  std::string out;
  bool first = true;
  for (const auto& [e, c] : p.terms()) {
    std::string mono;
    for (unsigned i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      std::string name = i < names.size() ? names[i] : (i < 4 ? defaults[i] : "x" + std::to_string(i));
      if (!mono.empty()) mono += "*";
      mono += name;
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    Rational a = abs_value(c);
    std::string coeff = to_string(a);
    std::string term = mono.empty() ? coeff : (a == 1 ? mono : coeff + "*" + mono);
    if (first) {
      out += (sgn(c) < 0 ? "-" : "") + term;
    } else {
      out += (sgn(c) < 0 ? " - " : " + ") + term;
    }
    first = false;
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const HomogPoly& p) { return os << format_poly(p); }

}  // namespace acf
