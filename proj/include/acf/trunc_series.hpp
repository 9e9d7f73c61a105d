#pragma once

// Graded power series known below a truncation order, plus one-forms built
// from them.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "acf/homog_poly.hpp"

namespace acf {

class TruncSeries {
 public:
  using Components = std::map<unsigned, HomogPoly>;

  TruncSeries() = default;
  TruncSeries(unsigned num_vars, unsigned trunc_order) : num_vars_(num_vars), trunc_order_(trunc_order) {
    if (num_vars == 0) throw ContractError("TruncSeries needs at least one variable");
    if (trunc_order == 0) throw ContractError("TruncSeries truncation order must be positive");
  }

  // Sum of the given homogeneous parts, known below `trunc_order`.
  static TruncSeries from_parts(unsigned num_vars, unsigned trunc_order, const std::vector<HomogPoly>& parts) {
    TruncSeries s(num_vars, trunc_order);
    for (const auto& p : parts) s.add_component(p);
    return s;
  }

  unsigned num_vars() const { return num_vars_; }
  unsigned trunc_order() const { return trunc_order_; }
  const Components& components() const { return components_; }
  bool is_zero() const { return components_.empty(); }

  HomogPoly component(unsigned k) const {
    if (k >= trunc_order_) {
      throw TruncationError("component of degree " + std::to_string(k) + " requested from a series truncated at order " +
                            std::to_string(trunc_order_));
    }
    auto it = components_.find(k);
    return it == components_.end() ? HomogPoly(num_vars_, k) : it->second;
  }

  void set_component(const HomogPoly& p) {
    check_part(p);
    if (p.is_zero()) {
      components_.erase(p.degree());
    } else {
      components_[p.degree()] = p;
    }
  }

  void add_component(const HomogPoly& p) {
    check_part(p);
    if (p.is_zero()) return;
    auto it = components_.find(p.degree());
    if (it == components_.end()) {
      components_.emplace(p.degree(), p);
    } else {
      it->second += p;
      if (it->second.is_zero()) components_.erase(it);
    }
  }

  // Lowest degree with a nonzero stored component.
  std::optional<unsigned> lowest_degree() const {
    if (components_.empty()) return std::nullopt;
    return components_.begin()->first;
  }

  // Drops everything of degree >= order (order <= trunc_order).
  TruncSeries truncated(unsigned order) const {
    if (order > trunc_order_) {
      throw TruncationError("cannot raise truncation order from " + std::to_string(trunc_order_) + " to " +
                            std::to_string(order));
    }
    TruncSeries r(num_vars_, order);
    for (const auto& [k, p] : components_) {
      if (k < order) r.components_.emplace(k, p);
    }
    return r;
  }

  // The polynomial made of the parts of degree <= max_degree, regarded as
  // exact through `new_order` (its higher parts are zero by definition).
  TruncSeries polynomial_part(unsigned max_degree, unsigned new_order) const {
    if (max_degree >= trunc_order_) {
      throw TruncationError("polynomial part up to degree " + std::to_string(max_degree) +
                            " needs truncation order > " + std::to_string(max_degree));
    }
    if (new_order <= max_degree) throw ContractError("polynomial part: new order must exceed max_degree");
    TruncSeries r(num_vars_, new_order);
    for (const auto& [k, p] : components_) {
      if (k <= max_degree) r.components_.emplace(k, p);
    }
    return r;
  }

  friend bool operator==(const TruncSeries& a, const TruncSeries& b) {
    return a.num_vars_ == b.num_vars_ && a.trunc_order_ == b.trunc_order_ && a.components_ == b.components_;
  }

 private:
  void check_part(const HomogPoly& p) const {
    if (p.num_vars() != num_vars_) {
      throw MismatchError("component has " + std::to_string(p.num_vars()) + " variables, series has " +
                          std::to_string(num_vars_));
    }
    if (p.degree() >= trunc_order_) {
      throw TruncationError("component of degree " + std::to_string(p.degree()) +
                            " does not fit below truncation order " + std::to_string(trunc_order_));
    }
  }

  unsigned num_vars_ = 1;
  unsigned trunc_order_ = 1;
  Components components_;
};

namespace detail {
inline void check_vars(const TruncSeries& a, const TruncSeries& b, const char* op) {
  if (a.num_vars() != b.num_vars()) {
    throw MismatchError(std::string(op) + ": num_vars mismatch (" + std::to_string(a.num_vars()) + " vs " +
                        std::to_string(b.num_vars()) + ")");
  }
}
}  // namespace detail

inline TruncSeries operator+(const TruncSeries& a, const TruncSeries& b) {
  detail::check_vars(a, b, "add");
  TruncSeries r = a.truncated(std::min(a.trunc_order(), b.trunc_order()));
  for (const auto& [k, p] : b.components()) {
    if (k < r.trunc_order()) r.add_component(p);
  }
  return r;
}

inline TruncSeries operator-(const TruncSeries& a) {
  TruncSeries r(a.num_vars(), a.trunc_order());
  for (const auto& [k, p] : a.components()) r.add_component(-p);
  return r;
}

inline TruncSeries operator-(const TruncSeries& a, const TruncSeries& b) { return a + (-b); }

inline TruncSeries operator*(const Rational& s, const TruncSeries& a) {
  TruncSeries r(a.num_vars(), a.trunc_order());
  for (const auto& [k, p] : a.components()) r.add_component(s * p);
  return r;
}

// The degree-k part of a product only uses parts of degree <= k, so the
// product is exact below the smaller truncation order.
inline TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
  detail::check_vars(a, b, "mul");
  TruncSeries r(a.num_vars(), std::min(a.trunc_order(), b.trunc_order()));
  for (const auto& [i, p] : a.components()) {
    if (i >= r.trunc_order()) break;
    for (const auto& [j, q] : b.components()) {
      if (i + j >= r.trunc_order()) break;
      r.add_component(p * q);
    }
  }
  return r;
}

// Truncation order drops by one.
inline TruncSeries partial(const TruncSeries& s, unsigned var) {
  if (var >= s.num_vars()) {
    throw MismatchError("partial: variable index " + std::to_string(var) + " out of range for " +
                        std::to_string(s.num_vars()) + " variables");
  }
  if (s.trunc_order() < 2) throw TruncationError("partial of a series truncated at order 1 carries no information");
  TruncSeries r(s.num_vars(), s.trunc_order() - 1);
  for (const auto& [k, p] : s.components()) {
    if (k > 0) r.add_component(partial(p, var));
  }
  return r;
}

// Sum_i omega_i dx_i.
class OneForm {
 public:
  OneForm() = default;
  explicit OneForm(std::vector<TruncSeries> components) : components_(std::move(components)) {
    if (components_.empty()) throw ContractError("one-form needs at least one component");
    const unsigned n = components_.front().num_vars();
    const unsigned t = components_.front().trunc_order();
    if (components_.size() != n) {
      throw MismatchError("one-form on " + std::to_string(n) + " variables needs " + std::to_string(n) +
                          " components, got " + std::to_string(components_.size()));
    }
    for (const auto& c : components_) {
      if (c.num_vars() != n) throw MismatchError("one-form components disagree on num_vars");
      if (c.trunc_order() != t) throw MismatchError("one-form components disagree on trunc_order");
    }
  }

  unsigned num_vars() const { return static_cast<unsigned>(components_.size()); }
  unsigned trunc_order() const { return components_.front().trunc_order(); }
  const std::vector<TruncSeries>& components() const { return components_; }
  const TruncSeries& operator[](std::size_t i) const { return components_.at(i); }

  // Minimum over components; nullopt for the zero form.
  std::optional<unsigned> lowest_degree() const {
    std::optional<unsigned> best;
    for (const auto& c : components_) {
      auto l = c.lowest_degree();
      if (l && (!best || *l < *best)) best = l;
    }
    return best;
  }

  friend bool operator==(const OneForm& a, const OneForm& b) { return a.components_ == b.components_; }

 private:
  std::vector<TruncSeries> components_;
};

// dPhi, known one order below Phi.
inline OneForm differential(const TruncSeries& phi) {
  std::vector<TruncSeries> comps;
  for (unsigned i = 0; i < phi.num_vars(); ++i) comps.push_back(partial(phi, i));
  return OneForm(std::move(comps));
}

}  // namespace acf
