#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <vector>

namespace acf {

using Exponent = std::vector<unsigned>;

inline unsigned total_degree(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0u); }

// All exponents of total degree `degree` in `num_vars` variables, in
// descending lexicographic order (x^k first, then x^{k-1}y, ...).
inline std::vector<Exponent> exponents_of_degree(unsigned num_vars, unsigned degree) {
  std::vector<Exponent> out;
  Exponent e(num_vars, 0);
  std::function<void(unsigned, unsigned)> rec = [&](unsigned var, unsigned remaining) {
    if (var + 1 == num_vars) {
      e[var] = remaining;
      out.push_back(e);
      return;
    }
    for (unsigned a = remaining + 1; a-- > 0;) {
      e[var] = a;
      rec(var + 1, remaining - a);
    }
  };
  if (num_vars > 0) rec(0, degree);
  return out;
}

inline std::size_t count_monomials(unsigned num_vars, unsigned degree) {
  // binomial(degree + num_vars - 1, num_vars - 1)
  std::size_t r = 1;
  for (unsigned i = 1; i < num_vars; ++i) r = r * (degree + i) / i;
  return r;
}

inline Exponent add_exponents(const Exponent& a, const Exponent& b) {
  Exponent r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

// Dense coordinates on the monomials of degrees [lo, hi), graded ascending and
// descending-lex inside each degree.
class MonomialIndex {
 public:
  MonomialIndex(unsigned num_vars, unsigned lo, unsigned hi) : num_vars_(num_vars), lo_(lo), hi_(hi) {
    for (unsigned k = lo; k < hi; ++k) {
      for (auto& e : exponents_of_degree(num_vars, k)) {
        index_.emplace(e, order_.size());
        order_.push_back(std::move(e));
      }
    }
  }

  std::size_t size() const { return order_.size(); }
  unsigned num_vars() const { return num_vars_; }
  unsigned lo() const { return lo_; }
  unsigned hi() const { return hi_; }
  const Exponent& at(std::size_t i) const { return order_[i]; }

  // npos when the exponent is outside the indexed degree window.
  std::size_t find(const Exponent& e) const {
    auto it = index_.find(e);
    return it == index_.end() ? npos : it->second;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  unsigned num_vars_;
  unsigned lo_;
  unsigned hi_;
  std::vector<Exponent> order_;
  std::map<Exponent, std::size_t> index_;
};

}  // namespace acf
