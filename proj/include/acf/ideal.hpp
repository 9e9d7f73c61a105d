#pragma once

// Graded linear algebra for ideals of the complete local ring at the origin
// that contain a power of the maximal ideal m.
//
// Everything reduces to ranks inside R/m^M, coordinatized by the monomials of
// degree < M (see MonomialIndex).

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "acf/linalg.hpp"
#include "acf/trunc_series.hpp"

namespace acf {

struct TruncatedIdeal {
  std::vector<TruncSeries> generators;

  TruncatedIdeal() = default;
  explicit TruncatedIdeal(std::vector<TruncSeries> gens) : generators(std::move(gens)) { validate(); }

  void validate() const {
    if (generators.empty()) throw ContractError("ideal needs at least one generator");
    for (const auto& g : generators) {
      if (g.num_vars() != generators.front().num_vars()) throw MismatchError("ideal generators disagree on num_vars");
      if (g.trunc_order() != generators.front().trunc_order()) {
        throw MismatchError("ideal generators disagree on trunc_order");
      }
    }
  }

  unsigned num_vars() const { return generators.front().num_vars(); }
  unsigned trunc_order() const { return generators.front().trunc_order(); }
};

inline TruncatedIdeal ideal_of(const OneForm& form) { return TruncatedIdeal(form.components()); }

// Coefficients of the degree window of `index`, read from the series.
inline Vector coordinates(const TruncSeries& s, const MonomialIndex& index) {
  Vector v(index.size());
  for (const auto& [k, p] : s.components()) {
    if (k < index.lo() || k >= index.hi()) continue;
    for (const auto& [e, c] : p.terms()) v[index.find(e)] = c;
  }
  return v;
}

inline Vector coordinates(const HomogPoly& p, const MonomialIndex& index) {
  Vector v(index.size());
  if (p.degree() < index.lo() || p.degree() >= index.hi()) return v;
  for (const auto& [e, c] : p.terms()) v[index.find(e)] = c;
  return v;
}

namespace detail {
// m * s restricted to degrees < index.hi(), as coordinates.
inline Vector shifted_coordinates(const TruncSeries& s, const Exponent& m, const MonomialIndex& index) {
  Vector v(index.size());
  const unsigned shift = total_degree(m);
  for (const auto& [k, p] : s.components()) {
    if (k + shift >= index.hi()) break;
    if (k + shift < index.lo()) continue;
    for (const auto& [e, c] : p.terms()) v[index.find(add_exponents(e, m))] += c;
  }
  return v;
}

inline void require_order(const TruncatedIdeal& I, unsigned M, const char* op) {
  if (M > I.trunc_order()) {
    throw TruncationError(std::string(op) + ": order " + std::to_string(M) + " exceeds generator truncation order " +
                          std::to_string(I.trunc_order()));
  }
}
}  // namespace detail

// Span of all monomial multiples of the generators inside R/m^M.
inline EchelonBasis ideal_span_mod(const TruncatedIdeal& I, unsigned M, const MonomialIndex& index) {
  EchelonBasis basis(index.size());
  for (const auto& g : I.generators) {
    auto low = g.lowest_degree();
    if (!low || *low >= M) continue;
    for (unsigned j = 0; j + *low < M; ++j) {
      for (const auto& m : exponents_of_degree(I.num_vars(), j)) basis.insert(detail::shifted_coordinates(g, m, index));
    }
  }
  return basis;
}

// Whether m^n is spanned, modulo m^{n+1}, by monomial multiples of the
// generators' lowest-degree parts.
inline bool graded_cover_check(const TruncatedIdeal& I, unsigned n) {
  I.validate();
  if (n >= I.trunc_order()) {
    throw TruncationError("graded_cover_check: degree " + std::to_string(n) + " not below truncation order " +
                          std::to_string(I.trunc_order()));
  }
  const MonomialIndex index(I.num_vars(), n, n + 1);
  EchelonBasis basis(index.size());
  for (const auto& g : I.generators) {
    auto low = g.lowest_degree();
    if (!low || *low > n) continue;
    const HomogPoly& lead = g.components().at(*low);
    for (const auto& m : exponents_of_degree(I.num_vars(), n - *low)) {
      basis.insert(coordinates(multiply_monomial(lead, m), index));
      if (basis.rank() == index.size()) return true;
    }
  }
  return basis.rank() == index.size();
}

// Least N <= max_n passing graded_cover_check; by successive approximation
// this proves m^N is contained in the ideal. nullopt means "not detected".
inline std::optional<unsigned> min_power_in_ideal(const TruncatedIdeal& I, unsigned max_n) {
  I.validate();
  if (max_n >= I.trunc_order()) {
    throw TruncationError("min_power_in_ideal: max_n must be below the truncation order");
  }
  for (unsigned n = 0; n <= max_n; ++n) {
    if (graded_cover_check(I, n)) return n;
  }
  return std::nullopt;
}

// dim R/I, computed in R/m^N once m^N is known to lie in I; nullopt when no
// such N <= max_n is detected.
inline std::optional<std::size_t> colength(const TruncatedIdeal& I, unsigned max_n) {
  auto N = min_power_in_ideal(I, max_n);
  if (!N) return std::nullopt;
  if (*N == 0) return 0;
  const MonomialIndex index(I.num_vars(), 0, *N);
  return index.size() - ideal_span_mod(I, *N, index).rank();
}

// Whether I and J have the same image in R/m^M.
inline bool ideal_equal_mod(const TruncatedIdeal& I, const TruncatedIdeal& J, unsigned M) {
  I.validate();
  J.validate();
  if (I.num_vars() != J.num_vars()) throw MismatchError("ideal_equal_mod: num_vars mismatch");
  detail::require_order(I, M, "ideal_equal_mod");
  detail::require_order(J, M, "ideal_equal_mod");
  const MonomialIndex index(I.num_vars(), 0, M);
  const EchelonBasis span_i = ideal_span_mod(I, M, index);
  const EchelonBasis span_j = ideal_span_mod(J, M, index);
  return span_i.rank() == span_j.rank() && [&] {
    for (const auto& g : J.generators) {
      if (!span_i.contains(coordinates(g, index))) return false;
    }
    for (const auto& g : I.generators) {
      if (!span_j.contains(coordinates(g, index))) return false;
    }
    return true;
  }();
}

struct MembershipWitness {
  TruncSeries target;
  std::vector<TruncSeries> cofactors;  // polynomials, one per generator
  unsigned valid_order = 0;
};

struct MembershipFailure {
  unsigned degree;  // lowest residual degree outside the graded span
};

using MembershipOutcome = std::variant<MembershipWitness, MembershipFailure>;

// Residual target - sum cofactor_i * generator_i below valid_order; the
// witness is valid iff this is zero.
inline TruncSeries witness_residual(const MembershipWitness& w, const TruncatedIdeal& I) {
  if (w.cofactors.size() != I.generators.size()) throw MismatchError("witness/ideal generator count mismatch");
  TruncSeries r = w.target.truncated(w.valid_order);
  for (std::size_t i = 0; i < w.cofactors.size(); ++i) r = r - w.cofactors[i] * I.generators[i];
  return r.truncated(w.valid_order);
}

inline bool verify_witness(const MembershipWitness& w, const TruncatedIdeal& I) {
  return witness_residual(w, I).is_zero();
}

// Successive approximation: peel off the lowest nonzero residual degree n by
// solving  r_n = sum_i h_i * lead(g_i)  for homogeneous h_i of degree
// n - ord(g_i), add h_i to the cofactors and subtract h_i * g_i in full.
inline MembershipOutcome membership_witness(const TruncSeries& f, const TruncatedIdeal& I, unsigned M) {
  I.validate();
  if (f.num_vars() != I.num_vars()) throw MismatchError("membership_witness: num_vars mismatch");
  detail::require_order(I, M, "membership_witness");
  if (M > f.trunc_order()) throw TruncationError("membership_witness: order exceeds target truncation order");
  const unsigned n_vars = I.num_vars();
  MembershipWitness w;
  w.target = f.truncated(M);
  w.valid_order = M;
  for (std::size_t i = 0; i < I.generators.size(); ++i) w.cofactors.emplace_back(n_vars, M);
  TruncSeries residual = w.target;

  for (unsigned n = 0; n < M; ++n) {
    const HomogPoly rn = residual.component(n);
    if (rn.is_zero()) continue;
    const MonomialIndex rows(n_vars, n, n + 1);
    struct Unknown {
      std::size_t gen;
      Exponent mono;
    };
    std::vector<Unknown> unknowns;
    std::vector<Vector> columns;
    for (std::size_t i = 0; i < I.generators.size(); ++i) {
      auto low = I.generators[i].lowest_degree();
      if (!low || *low > n) continue;
      const HomogPoly& lead = I.generators[i].components().at(*low);
      for (const auto& m : exponents_of_degree(n_vars, n - *low)) {
        unknowns.push_back({i, m});
        columns.push_back(coordinates(multiply_monomial(lead, m), rows));
      }
    }
    if (unknowns.empty()) return MembershipFailure{n};
    AffineSystem sys;
    sys.matrix = Matrix(rows.size(), unknowns.size());
    for (std::size_t c = 0; c < unknowns.size(); ++c) {
      for (std::size_t r = 0; r < rows.size(); ++r) sys.matrix(r, c) = columns[c][r];
      sys.column_labels.push_back(std::to_string(c));
    }
    sys.rhs = coordinates(rn, rows);
    auto solved = solve_affine(sys);
    if (std::holds_alternative<FarkasCertificate>(solved)) return MembershipFailure{n};
    const auto& point = std::get<SolutionSet>(solved).particular;
    std::vector<HomogPoly> pieces;
    for (std::size_t i = 0; i < I.generators.size(); ++i) {
      auto low = I.generators[i].lowest_degree();
      pieces.emplace_back(n_vars, low && *low <= n ? n - *low : 0);
    }
    for (std::size_t c = 0; c < unknowns.size(); ++c) pieces[unknowns[c].gen].add_term(unknowns[c].mono, point[c]);
    for (std::size_t i = 0; i < I.generators.size(); ++i) {
      if (pieces[i].is_zero()) continue;
      w.cofactors[i].add_component(pieces[i]);
      for (const auto& [k, g] : I.generators[i].components()) {
        if (k + pieces[i].degree() >= M) break;
        residual.add_component(-(pieces[i] * g));
      }
    }
  }
  return w;
}

}  // namespace acf
