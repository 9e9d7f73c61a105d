#pragma once

// Order-by-order construction of almost closed 1-forms A dx + B dy on the
// formal neighbourhood of the origin in the plane, starting at degree d and
// solving  A_y - B_x = C A + D B  one homogeneous degree at a time.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "acf/homog_poly.hpp"
#include "acf/random.hpp"
#include "acf/trunc_series.hpp"

namespace acf {

enum class BuildMode { generic, lemma1_bounded };

inline std::string to_string(BuildMode m) { return m == BuildMode::generic ? "generic" : "lemma1_bounded"; }

inline BuildMode parse_build_mode(const std::string& s) {
  if (s == "generic") return BuildMode::generic;
  if (s == "lemma1_bounded") return BuildMode::lemma1_bounded;
  throw ContractError("unknown build mode '" + s + "' (expected generic or lemma1_bounded)");
}

struct Instance {
  unsigned d = 2;  // leading degree
  unsigned N = 3;  // sigma is built in degrees d..N-1
  TruncSeries C{2, 1};
  TruncSeries D{2, 1};
  std::uint64_t seed = 0;
  std::uint64_t coeff_bound = 10;
  BuildMode mode = BuildMode::generic;

  void validate() const {
    if (d < 2) throw ContractError("instance invariant violated: d must be >= 2, got " + std::to_string(d));
    if (N <= d) {
      throw ContractError("instance invariant violated: N > d required, got N=" + std::to_string(N) +
                          " d=" + std::to_string(d));
    }
    if (coeff_bound == 0) throw ContractError("instance invariant violated: coeff_bound must be positive");
    for (const auto* s : {&C, &D}) {
      if (s->num_vars() != 2) throw ContractError("instance invariant violated: C and D must be series in 2 variables");
    }
    // extend_order at k = N-1 reads C_i, D_i for i <= N-2-d.
    const unsigned needed = N - d - 1;
    if (C.trunc_order() < needed || D.trunc_order() < needed) {
      throw ContractError("instance invariant violated: C and D must be known below order " + std::to_string(needed));
    }
    if (mode == BuildMode::lemma1_bounded) {
      for (const auto* s : {&C, &D}) {
        if (s->trunc_order() < 2) {
          throw ContractError("instance invariant violated: lemma1_bounded mode needs C_0, C_1, D_0, D_1 known");
        }
        for (const auto& [k, p] : s->components()) {
          if (k >= 2) {
            throw ContractError("instance invariant violated: lemma1_bounded mode requires C and D to vanish in degrees >= 2");
          }
        }
      }
    }
  }
};

struct FreeChoice {
  unsigned degree;  // k: the choice made when building A_k, B_k
  HomogPoly F;      // degree k-1
  Rational top_a;   // coefficient of x^k added to A_k
  Rational top_b;   // coefficient of y^k added to B_k
  Rational scale;   // lemma1_bounded: factor applied to the integer draw of F
};

struct NormRecord {
  unsigned degree;
  Rational norm_a;  // |A_k|
  Rational norm_b;  // |B_k|
  Rational calA;    // max(|A_k|, |B_k|, |A_{k-1}|, |B_{k-1}|)
};

struct ConstructionState {
  Instance instance;
  HomogPoly P;                 // degree d+1 primitive of the leading pair
  std::vector<HomogPoly> A;    // A[i] has degree d+i
  std::vector<HomogPoly> B;
  std::vector<FreeChoice> free_choice_log;
  std::vector<NormRecord> norm_log;
  std::optional<Rational> C_const;  // lemma1_bounded only

  // Highest degree built so far plus one.
  unsigned next_degree() const { return instance.d + static_cast<unsigned>(A.size()); }

  const HomogPoly& A_at(unsigned k) const { return A.at(k - instance.d); }
  const HomogPoly& B_at(unsigned k) const { return B.at(k - instance.d); }
};

// (P_x, P_y), a closed leading pair of degree d.
inline std::pair<HomogPoly, HomogPoly> init_leading(unsigned d, const HomogPoly& P) {
  if (P.num_vars() != 2) throw ContractError("init_leading: P must be bivariate, got " + std::to_string(P.num_vars()) + " variables");
  if (P.degree() != d + 1) {
    throw ContractError("init_leading: P must have degree d+1 = " + std::to_string(d + 1) + ", got " +
                        std::to_string(P.degree()));
  }
  return {partial(P, 0), partial(P, 1)};
}

// Degree k-1 part of C A + D B from the parts built so far.
inline HomogPoly graded_rhs(const ConstructionState& st, unsigned k) {
  const unsigned d = st.instance.d;
  HomogPoly E(2, k - 1);
  for (unsigned i = 0; i + d <= k - 1; ++i) {
    const unsigned j = k - 1 - i;
    E += st.instance.C.component(i) * st.A_at(j);
    E += st.instance.D.component(i) * st.B_at(j);
  }
  return E;
}

// A_k = int_y F + top_a x^k,  B_k = int_x (F - E) + top_b y^k, so that
// A_{k,y} - B_{k,x} = E with E the degree k-1 part of C A + D B.
inline std::pair<HomogPoly, HomogPoly> extend_order(const ConstructionState& st, unsigned k, const HomogPoly& F,
                                                    const Rational& top_a, const Rational& top_b) {
  const unsigned d = st.instance.d;
  if (k <= d) throw ContractError("extend_order: k must exceed d");
  if (st.A.size() < k - d || st.B.size() < k - d) {
    throw ContractError("extend_order: degrees " + std::to_string(d) + ".." + std::to_string(k - 1) +
                        " must be built before degree " + std::to_string(k));
  }
  if (F.num_vars() != 2 || F.degree() != k - 1) {
    throw MismatchError("extend_order: F must be bivariate of degree " + std::to_string(k - 1) + ", got degree " +
                        std::to_string(F.degree()));
  }
  const HomogPoly E = graded_rhs(st, k);
  HomogPoly Ak = antiderivative(F, 1);
  Ak.add_term({k, 0}, top_a);
  HomogPoly Bk = antiderivative(F - E, 0);
  Bk.add_term({0, k}, top_b);
  return {std::move(Ak), std::move(Bk)};
}

namespace detail {
inline HomogPoly draw_poly(SeededStream& stream, unsigned degree, std::uint64_t bound) {
  HomogPoly p(2, degree);
  for (const auto& e : exponents_of_degree(2, degree)) p.add_term(e, Rational(stream.uniform_symmetric(bound)));
  return p;
}

inline Rational max_of(std::initializer_list<Rational> xs) {
  Rational m = 0;
  for (const auto& x : xs) {
    if (x > m) m = x;
  }
  return m;
}
}  // namespace detail

struct ConvergenceBound {
  Rational C_const;  // max(|C_0|, |D_0|, 2|C_1|, 2|D_1|)
  Rational beta;     // max(1, 8 C_const)
  Rational radius_lower_bound;
};

// Coefficient-growth bound for C, D vanishing in degrees >= 2.
inline ConvergenceBound convergence_bound(const TruncSeries& C, const TruncSeries& D) {
  for (const auto* s : {&C, &D}) {
    if (s->num_vars() != 2) throw MismatchError("convergence_bound: C and D must be bivariate");
    if (s->trunc_order() < 2) throw TruncationError("convergence_bound: C_1 and D_1 must be known");
    for (const auto& [k, p] : s->components()) {
      if (k >= 2) {
        throw ContractError("convergence_bound: hypothesis C_{>=2} = 0 = D_{>=2} violated (nonzero component of degree " +
                            std::to_string(k) + ")");
      }
    }
  }
  ConvergenceBound b;
  b.C_const = detail::max_of({abs_value(C.component(0).coeff({0, 0})), abs_value(D.component(0).coeff({0, 0})),
                              Rational(2) * coeff_norm(C.component(1)), Rational(2) * coeff_norm(D.component(1))});
  b.beta = detail::max_of({Rational(1), Rational(8) * b.C_const});
  b.radius_lower_bound = 1 / b.beta;
  return b;
}

struct BuildResult {
  OneForm sigma;
  ConstructionState state;
};

inline NormRecord norm_record(const ConstructionState& st, unsigned k) {
  const unsigned d = st.instance.d;
  NormRecord r{k, coeff_norm(st.A_at(k)), coeff_norm(st.B_at(k)), 0};
  Rational prev_a = k > d ? coeff_norm(st.A_at(k - 1)) : Rational(0);
  Rational prev_b = k > d ? coeff_norm(st.B_at(k - 1)) : Rational(0);
  r.calA = detail::max_of({r.norm_a, r.norm_b, prev_a, prev_b});
  return r;
}

inline OneForm assemble_form(const ConstructionState& st) {
  const unsigned order = st.next_degree();
  return OneForm({TruncSeries::from_parts(2, order, st.A), TruncSeries::from_parts(2, order, st.B)});
}

// Draw order from SeededStream(seed): the d+2 coefficients of P (descending
// lex), then for each k = d+1..N-1 the k coefficients of F_{k-1} followed, in
// generic mode, by top_a and top_b.
inline BuildResult build(const Instance& inst) {
  inst.validate();
  SeededStream stream(inst.seed);
  ConstructionState st;
  st.instance = inst;
  st.P = detail::draw_poly(stream, inst.d + 1, inst.coeff_bound);
  auto [Ad, Bd] = init_leading(inst.d, st.P);
  st.A.push_back(std::move(Ad));
  st.B.push_back(std::move(Bd));
  st.norm_log.push_back(norm_record(st, inst.d));

  if (inst.mode == BuildMode::lemma1_bounded) st.C_const = convergence_bound(inst.C, inst.D).C_const;

  for (unsigned k = inst.d + 1; k < inst.N; ++k) {
    HomogPoly F = detail::draw_poly(stream, k - 1, inst.coeff_bound);
    FreeChoice choice{k, HomogPoly(2, k - 1), 0, 0, 1};
    if (inst.mode == BuildMode::generic) {
      choice.top_a = Rational(stream.uniform_symmetric(inst.coeff_bound));
      choice.top_b = Rational(stream.uniform_symmetric(inst.coeff_bound));
    } else {
      // |F| <= b/(b+1) * 4 C calA_{k-1} < 4 C calA_{k-1}; the bound is vacuous
      // (and F = 0) when C calA_{k-1} = 0.
      const Rational limit = Rational(4) * *st.C_const * st.norm_log.back().calA;
      choice.scale = limit / Rational(inst.coeff_bound + 1);
    }
    F *= choice.scale;
    choice.F = F;
    auto [Ak, Bk] = extend_order(st, k, F, choice.top_a, choice.top_b);
    st.A.push_back(std::move(Ak));
    st.B.push_back(std::move(Bk));
    st.free_choice_log.push_back(std::move(choice));
    st.norm_log.push_back(norm_record(st, k));
  }
  return {assemble_form(st), std::move(st)};
}

struct DegreeResidual {
  unsigned degree;
  HomogPoly residual;
};

struct AlmostClosedReport {
  bool pass = true;
  std::optional<unsigned> first_failure;
  unsigned first_degree = 0;
  unsigned last_degree = 0;  // highest fully determined degree
  std::vector<DegreeResidual> residuals;
};

// Residual A_y - B_x - (C A + D B) degree by degree, from d-1 (d the lowest
// degree of sigma) to the highest degree determined by the truncation orders.
inline AlmostClosedReport verify_almost_closed(const OneForm& sigma, const TruncSeries& C, const TruncSeries& D) {
  if (sigma.num_vars() != 2 || C.num_vars() != 2 || D.num_vars() != 2) {
    throw MismatchError("verify_almost_closed: sigma, C and D must all be bivariate");
  }
  const TruncSeries& A = sigma[0];
  const TruncSeries& B = sigma[1];
  AlmostClosedReport rep;
  const unsigned d = sigma.lowest_degree().value_or(sigma.trunc_order());
  rep.first_degree = d == 0 ? 0 : d - 1;
  if (sigma.trunc_order() < 2) return rep;
  // degree k needs A_{k+1}, and C_i, D_i for i <= k - d.
  long last = static_cast<long>(sigma.trunc_order()) - 2;
  last = std::min(last, static_cast<long>(C.trunc_order()) + static_cast<long>(d) - 1);
  last = std::min(last, static_cast<long>(D.trunc_order()) + static_cast<long>(d) - 1);
  if (last < static_cast<long>(rep.first_degree)) {
    rep.last_degree = rep.first_degree;
    return rep;
  }
  rep.last_degree = static_cast<unsigned>(last);
  for (unsigned k = rep.first_degree; k <= rep.last_degree; ++k) {
    HomogPoly r = partial(A.component(k + 1), 1) - partial(B.component(k + 1), 0);
    for (unsigned i = 0; i + d <= k; ++i) {
      r -= C.component(i) * A.component(k - i);
      r -= D.component(i) * B.component(k - i);
    }
    if (!r.is_zero() && rep.pass) {
      rep.pass = false;
      rep.first_failure = k;
    }
    rep.residuals.push_back({k, std::move(r)});
  }
  return rep;
}

}  // namespace acf
