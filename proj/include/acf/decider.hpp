#pragma once

// Truncated potential problem for a one-form A dx + B dy.
//
// A potential Phi with (Phi_x, Phi_y) = (A, B) exists iff there are series
// X, Y, Z, W with
//     Phi_x = (1+X) A + Y B,   Phi_y = Z A + (1+W) B,
// whose matrix is invertible (constant-term determinant
// (1+X_0)(1+W_0) - Y_0 Z_0 != 0) and which satisfy the integrability
// condition  -A_y + B_x = (XA+YB)_y - (ZA+WB)_x.  Up to order M this is a
// finite linear system in the coefficients of X, Y, Z, W.
//
// The system is linear in (1+X, Y, Z, 1+W), so its solutions form a cone and
// any solution with nonzero determinant can be rescaled into one of three
// affine charts: 1+X_0 = 1, 1+W_0 = 1, or Y_0 = 1. The problem is infeasible
// exactly when all three charts are, and each chart then carries its own
// Farkas certificate.

#include <array>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "acf/digest.hpp"
#include "acf/ideal.hpp"
#include "acf/linalg.hpp"
#include "acf/trunc_series.hpp"

namespace acf {

inline constexpr std::array<char, 4> kUnknownNames{'X', 'Y', 'Z', 'W'};

inline std::string coefficient_label(char unknown, const Exponent& e) {
  std::string s(1, unknown);
  s += "[";
  for (std::size_t i = 0; i < e.size(); ++i) s += (i ? "," : "") + std::to_string(e[i]);
  return s + "]";
}

struct PotentialSystem {
  AffineSystem system;
  unsigned lowest_degree = 0;  // d
  unsigned order = 0;          // M: equations in degrees d-1 .. M-1
  unsigned max_block = 0;      // unknowns X_j..W_j for j = 0..M-d
  // rows_through[k - (d-1)] = number of rows in degrees d-1..k
  std::vector<std::size_t> rows_through;

  std::size_t rows_through_degree(unsigned k) const { return rows_through.at(k - (lowest_degree - 1)); }
  unsigned first_degree() const { return lowest_degree - 1; }
};

// Canonical text form of a system; its SHA-256 identifies the system in
// certificates.
inline std::string canonical_bytes(const AffineSystem& sys) {
  std::ostringstream os;
  os << sys.rows() << " " << sys.cols() << "\n";
  for (const auto& l : sys.column_labels) os << l << "\n";
  for (std::size_t r = 0; r < sys.rows(); ++r) {
    for (std::size_t c = 0; c < sys.cols(); ++c) os << (c ? " " : "") << sys.matrix(r, c).get_str();
    os << " | " << sys.rhs[r].get_str() << "\n";
  }
  return os.str();
}

inline std::string system_digest(const AffineSystem& sys) { return sha256_hex(canonical_bytes(sys)); }

inline unsigned require_form_degree(const OneForm& sigma) {
  if (sigma.num_vars() != 2) throw MismatchError("potential problems are posed for bivariate one-forms");
  auto low = sigma.lowest_degree();
  if (!low) throw ContractError("one-form is zero below its truncation order");
  if (*low < 1) throw ContractError("one-form must vanish at the origin (lowest degree >= 1)");
  return *low;
}

inline PotentialSystem assemble_system(const OneForm& sigma, unsigned M) {
  const unsigned d = require_form_degree(sigma);
  if (M < d) throw ContractError("order M = " + std::to_string(M) + " is below the lowest degree " + std::to_string(d));
  if (sigma.trunc_order() < M + 1) {
    throw TruncationError("truncation too short: order " + std::to_string(M) + " needs the one-form known below " +
                          std::to_string(M + 1) + ", have " + std::to_string(sigma.trunc_order()));
  }
  const TruncSeries& A = sigma[0];
  const TruncSeries& B = sigma[1];
  PotentialSystem ps;
  ps.lowest_degree = d;
  ps.order = M;
  ps.max_block = M - d;

  std::vector<std::pair<char, Exponent>> cols;
  for (unsigned j = 0; j <= ps.max_block; ++j) {
    for (char u : kUnknownNames) {
      for (const auto& e : exponents_of_degree(2, j)) cols.emplace_back(u, e);
    }
  }
  for (const auto& [u, e] : cols) ps.system.column_labels.push_back(coefficient_label(u, e));
  ps.system.matrix = Matrix(0, cols.size());

  std::size_t count = 0;
  for (unsigned k = d - 1; k < M; ++k) {
    const MonomialIndex rows(2, k, k + 1);
    std::vector<Vector> block(rows.size(), Vector(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const auto& [u, m] = cols[c];
      const unsigned j = total_degree(m);
      if (j > k + 1) continue;
      // coefficient of this unknown in the degree-k part of the right side
      const TruncSeries& G = (u == 'X' || u == 'Z') ? A : B;
      const HomogPoly g = G.component(k + 1 - j);
      if (g.is_zero()) continue;
      const HomogPoly prod = multiply_monomial(g, m);
      const HomogPoly term = (u == 'X' || u == 'Y') ? partial(prod, 1) : -partial(prod, 0);
      for (const auto& [e, v] : term.terms()) block[rows.find(e)][c] = v;
    }
    // -A_y + B_x, degree k
    const HomogPoly lhs = partial(B.component(k + 1), 0) - partial(A.component(k + 1), 1);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      ps.system.append_equation(block[r], lhs.coeff(rows.at(r)), coefficient_label('E', rows.at(r)));
    }
    count += rows.size();
    ps.rows_through.push_back(count);
  }
  return ps;
}

enum class Chart { x0, w0, y0 };
inline constexpr std::array<Chart, 3> kCharts{Chart::x0, Chart::w0, Chart::y0};

inline std::string to_string(Chart c) {
  switch (c) {
    case Chart::x0: return "X0";
    case Chart::w0: return "W0";
    case Chart::y0: return "Y0";
  }
  return "?";
}

inline Chart parse_chart(const std::string& s) {
  if (s == "X0") return Chart::x0;
  if (s == "W0") return Chart::w0;
  if (s == "Y0") return Chart::y0;
  throw ContractError("unknown chart '" + s + "'");
}

// Equations of degrees d-1..through plus the chart normalization row.
inline AffineSystem chart_system(const PotentialSystem& ps, Chart chart, unsigned through) {
  if (through < ps.first_degree() || through >= ps.order) throw ContractError("prefix degree out of range");
  AffineSystem s = ps.system.prefix(ps.rows_through_degree(through));
  Vector row(s.cols());
  const Exponent zero{0, 0};
  switch (chart) {
    case Chart::x0:  // 1 + X_0 = 1
      row[*s.column_index(coefficient_label('X', zero))] = 1;
      s.append_equation(row, 0, "chart:X0");
      break;
    case Chart::w0:  // 1 + W_0 = 1
      row[*s.column_index(coefficient_label('W', zero))] = 1;
      s.append_equation(row, 0, "chart:W0");
      break;
    case Chart::y0:  // Y_0 = 1
      row[*s.column_index(coefficient_label('Y', zero))] = 1;
      s.append_equation(row, 1, "chart:Y0");
      break;
  }
  return s;
}

inline std::vector<std::string> block_labels(unsigned j) {
  std::vector<std::string> out;
  for (char u : kUnknownNames) {
    for (const auto& e : exponents_of_degree(2, j)) out.push_back(coefficient_label(u, e));
  }
  return out;
}

struct UnitCheck {
  bool vanishes_identically = false;
  std::optional<Vector> unit_point;
  std::size_t samples_tried = 0;
  bool symbolic_check = false;
};

namespace detail {
struct UnitColumns {
  std::size_t x, y, z, w;
};

inline UnitColumns unit_columns(const SolutionSet& set) {
  auto find = [&](char u) {
    const auto label = coefficient_label(u, {0, 0});
    for (std::size_t i = 0; i < set.column_labels.size(); ++i) {
      if (set.column_labels[i] == label) return i;
    }
    throw ContractError("solution set has no column " + label);
  };
  return {find('X'), find('Y'), find('Z'), find('W')};
}

inline Rational unit_value(const Vector& p, const UnitColumns& u) {
  return (1 + p[u.x]) * (1 + p[u.w]) - p[u.y] * p[u.z];
}
}  // namespace detail

// Tests (1+X_0)(1+W_0) - Y_0 Z_0 on an affine solution set: the particular
// point, then `samples` seeded points, then an exact expansion of the
// restricted quadratic.
inline UnitCheck check_unit_condition(const SolutionSet& set, std::uint64_t seed, std::size_t samples,
                                      std::uint64_t bound) {
  const auto cols = detail::unit_columns(set);
  UnitCheck out;
  if (!is_zero(detail::unit_value(set.particular, cols))) {
    out.unit_point = set.particular;
    return out;
  }
  for (std::size_t i = 0; i < samples; ++i) {
    ++out.samples_tried;
    Vector p = sample_generic(set, mix_seed(seed + i), bound);
    if (!is_zero(detail::unit_value(p, cols))) {
      out.unit_point = std::move(p);
      return out;
    }
  }
  out.symbolic_check = true;
  // Affine forms f(t) = p + sum t_i v_i for the four constant terms.
  const std::size_t r = set.nullspace_basis.size();
  auto form = [&](std::size_t col) {
    Vector f(r + 1);
    f[0] = set.particular[col];
    for (std::size_t i = 0; i < r; ++i) f[i + 1] = set.nullspace_basis[i][col];
    return f;
  };
  Vector fx = form(cols.x), fy = form(cols.y), fz = form(cols.z), fw = form(cols.w);
  fx[0] += 1;
  fw[0] += 1;
  // q = fx*fw - fy*fz as a quadratic in (1, t_1..t_r).
  bool nonzero = false;
  for (std::size_t a = 0; a <= r && !nonzero; ++a) {
    for (std::size_t b = a; b <= r && !nonzero; ++b) {
      Rational c = fx[a] * fw[b] - fy[a] * fz[b];
      if (a != b) c += fx[b] * fw[a] - fy[b] * fz[a];
      nonzero = !is_zero(c);
    }
  }
  if (!nonzero) {
    out.vanishes_identically = true;
    return out;
  }
  // A nonzero quadratic stays nonzero on a generic line, and a nonzero
  // univariate quadratic is nonzero at one of s = 0, 1, 2.
  SeededStream stream(mix_seed(seed ^ 0x756e6974ULL));
  for (int attempt = 0; attempt < 256; ++attempt) {
    Vector dir(set.particular.size());
    for (const auto& v : set.nullspace_basis) {
      const Rational c(stream.uniform_symmetric(bound + static_cast<std::uint64_t>(attempt)));
      for (std::size_t i = 0; i < dir.size(); ++i) dir[i] += c * v[i];
    }
    for (int s = 0; s <= 2; ++s) {
      Vector p = set.particular;
      for (std::size_t i = 0; i < p.size(); ++i) p[i] += Rational(s) * dir[i];
      if (!is_zero(detail::unit_value(p, cols))) {
        out.unit_point = std::move(p);
        return out;
      }
    }
  }
  throw std::logic_error("unit condition is not identically zero but no witness point was found");
}

// Formal Poincare lemma: Phi_{k+1} = (sum_i x_i eta_{i,k}) / (k+1). Phi is
// known below M+1 and is normalized by Phi(0) = 0.
inline TruncSeries integrate_closed(const OneForm& eta, unsigned M) {
  const unsigned n = eta.num_vars();
  if (eta.trunc_order() < M) {
    throw TruncationError("integrate_closed: one-form known below " + std::to_string(eta.trunc_order()) +
                          ", need " + std::to_string(M));
  }
  for (unsigned k = 0; k + 1 < M; ++k) {
    for (unsigned i = 0; i < n; ++i) {
      for (unsigned j = i + 1; j < n; ++j) {
        const HomogPoly r = partial(eta[i].component(k + 1), j) - partial(eta[j].component(k + 1), i);
        if (!r.is_zero()) {
          throw NotClosedError(k, "integrate_closed: one-form is not closed in degree " + std::to_string(k));
        }
      }
    }
  }
  TruncSeries phi(n, M + 1);
  for (unsigned k = 0; k < M; ++k) {
    HomogPoly acc(n, k + 1);
    for (unsigned i = 0; i < n; ++i) acc += HomogPoly::variable(n, i) * eta[i].component(k);
    acc *= Rational(1, k + 1);
    phi.add_component(acc);
  }
  return phi;
}

// (d Phi) and omega generate the same ideal modulo m^M.
inline bool verify_potential(const TruncSeries& phi, const OneForm& omega, unsigned M) {
  if (phi.num_vars() != omega.num_vars()) throw MismatchError("verify_potential: num_vars mismatch");
  if (phi.trunc_order() < M + 1) {
    throw TruncationError("verify_potential: Phi must be known below order " + std::to_string(M + 1) +
                          " so that its derivatives are known below " + std::to_string(M));
  }
  if (omega.trunc_order() < M) throw TruncationError("verify_potential: one-form truncation below M");
  return ideal_equal_mod(ideal_of(differential(phi)), ideal_of(omega), M);
}

// C_{1,x} + D_{1,y}.
inline Rational obstruction(const TruncSeries& C, const TruncSeries& D) {
  if (C.num_vars() != 2 || D.num_vars() != 2) throw MismatchError("obstruction: C and D must be bivariate");
  return C.component(1).coeff({1, 0}) + D.component(1).coeff({0, 1});
}

// C~_1 = C_1 + C_0 (D_0 x - C_0 y),  D~_1 = D_1 + D_0 (D_0 x - C_0 y).
inline std::pair<HomogPoly, HomogPoly> tilde_transform(const TruncSeries& C, const TruncSeries& D) {
  if (C.num_vars() != 2 || D.num_vars() != 2) throw MismatchError("tilde_transform: C and D must be bivariate");
  const Rational c0 = C.component(0).coeff({0, 0});
  const Rational d0 = D.component(0).coeff({0, 0});
  HomogPoly L(2, 1);
  L.add_term({1, 0}, d0);
  L.add_term({0, 1}, -c0);
  return {C.component(1) + c0 * L, D.component(1) + d0 * L};
}

struct RankCheck {
  std::string name;
  std::size_t expected;
  std::size_t observed;
  bool ok() const { return expected == observed; }
};

struct GuardReport {
  unsigned d = 0;
  std::vector<RankCheck> checks;
  bool passes() const {
    for (const auto& c : checks) {
      if (!c.ok()) return false;
    }
    return !checks.empty();
  }
};

// Rank conditions behind the degree-by-degree elimination, checked on the
// concrete leading parts A_d, B_d, A_{d+1}, B_{d+1}. Expected values are the
// span dimensions when the only relations are the closedness relation and the
// Euler relations.
inline GuardReport genericity_guard(const OneForm& sigma) {
  const unsigned d = require_form_degree(sigma);
  if (sigma.trunc_order() < d + 2) throw TruncationError("genericity_guard: needs the parts of degree d and d+1");
  const HomogPoly Ad = sigma[0].component(d), Bd = sigma[1].component(d);
  const HomogPoly A1 = sigma[0].component(d + 1), B1 = sigma[1].component(d + 1);
  auto mono = [](unsigned a, unsigned b) { return Exponent{a, b}; };
  auto times = [](const HomogPoly& p, const std::vector<Exponent>& ms) {
    std::vector<HomogPoly> out;
    for (const auto& m : ms) out.push_back(multiply_monomial(p, m));
    return out;
  };
  auto span_rank = [](const std::vector<HomogPoly>& ps, unsigned degree) {
    const MonomialIndex idx(2, degree, degree + 1);
    EchelonBasis b(idx.size());
    for (const auto& p : ps) b.insert(coordinates(p, idx));
    return b.rank();
  };
  auto append = [](std::vector<HomogPoly>& to, const std::vector<HomogPoly>& from) {
    to.insert(to.end(), from.begin(), from.end());
  };
  const std::vector<Exponent> deg0{mono(0, 0)}, deg1{mono(1, 0), mono(0, 1)},
      deg2{mono(2, 0), mono(1, 1), mono(0, 2)}, deg3{mono(3, 0), mono(2, 1), mono(1, 2), mono(0, 3)};

  // A, B with their first partials shifted up by `shift` degrees.
  auto family = [&](const HomogPoly& A, const HomogPoly& B, const std::vector<Exponent>& base,
                    const std::vector<Exponent>& derivs) {
    std::vector<HomogPoly> out;
    for (const auto* p : {&A, &B}) {
      append(out, times(*p, base));
      append(out, times(partial(*p, 0), derivs));
      append(out, times(partial(*p, 1), derivs));
    }
    return out;
  };

  GuardReport rep;
  rep.d = d;
  rep.checks.push_back({"leading parts nonzero", 2, static_cast<std::size_t>(!Ad.is_zero()) + !Bd.is_zero()});
  // degree d: A_d, x A_{d,x}, ... ; 10 polynomials, 4 relations
  rep.checks.push_back({"degree d independence (d>=5)", 6, span_rank(family(Ad, Bd, deg0, deg1), d)});
  // degree d+1: the subspace V, 16 polynomials, 7 relations
  const auto V = family(Ad, Bd, deg1, deg2);
  rep.checks.push_back({"degree d+1 span of leading pair (d>=7)", 9, span_rank(V, d + 1)});
  auto V_plus = V;
  append(V_plus, family(A1, B1, deg0, deg1));
  rep.checks.push_back({"degree d+1 joint span with next pair (d>=13)", 15, span_rank(V_plus, d + 1)});
  // degree d+2: the 12-dimensional span W, then W with the next pair
  const auto W = family(Ad, Bd, deg2, deg3);
  rep.checks.push_back({"degree d+2 span of leading pair", 12, span_rank(W, d + 2)});
  auto W_plus = W;
  append(W_plus, family(A1, B1, deg1, deg2));
  rep.checks.push_back({"degree d+2 joint span with next pair (d>=18)", 21, span_rank(W_plus, d + 2)});
  return rep;
}

enum class Verdict { infeasible, feasible_up_to_M, degenerate };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::infeasible: return "infeasible";
    case Verdict::feasible_up_to_M: return "feasible_up_to_M";
    case Verdict::degenerate: return "degenerate";
  }
  return "?";
}

struct ChartCertificate {
  Chart chart;
  unsigned through_degree;
  FarkasCertificate certificate;
  std::string system_hash;  // of chart_system(ps, chart, through_degree)
};

struct PotentialWitness {
  Chart chart;
  TruncSeries X, Y, Z, W;  // polynomials, exact through degree M
  TruncSeries phi;         // known below M+2
  bool ideals_equal = false;  // (Phi_x, Phi_y) = (A, B) modulo m^M
};

struct BlockView {
  unsigned block;
  std::size_t dimension;
  std::optional<std::array<HomogPoly, 4>> forced;  // X_j, Y_j, Z_j, W_j when dimension is 0
};

struct StagedRecord {
  unsigned through_degree;
  bool feasible;
  std::vector<BlockView> blocks;
};

struct ChartResult {
  Chart chart;
  bool solvable;
  std::optional<unsigned> min_infeasible_degree;
  bool unit_vanishes = false;
};

struct DeciderOutcome {
  Verdict verdict = Verdict::infeasible;
  unsigned lowest_degree = 0;
  unsigned order = 0;
  std::size_t equations = 0;
  std::size_t unknowns = 0;
  std::optional<unsigned> failing_degree;
  std::optional<ChartCertificate> certificate;       // chart X0
  std::vector<ChartCertificate> chart_certificates;  // all three charts
  std::optional<PotentialWitness> witness;
  std::vector<ChartResult> charts;
  std::vector<StagedRecord> staged;
};

struct DecideOptions {
  std::uint64_t seed = 0;
  std::size_t unit_samples = 16;
  std::uint64_t sample_bound = 10;
  bool staged = true;
};

inline std::optional<SolutionSet> solve_prefix(const PotentialSystem& ps, Chart chart, unsigned through) {
  auto r = solve_affine(chart_system(ps, chart, through));
  if (auto* s = std::get_if<SolutionSet>(&r)) return std::move(*s);
  return std::nullopt;
}

inline std::array<HomogPoly, 4> block_polys(const std::vector<std::string>& labels, const Vector& values,
                                            unsigned j) {
  std::array<HomogPoly, 4> out{HomogPoly(2, j), HomogPoly(2, j), HomogPoly(2, j), HomogPoly(2, j)};
  const auto exps = exponents_of_degree(2, j);
  std::size_t i = 0;
  for (std::size_t u = 0; u < 4; ++u) {
    for (const auto& e : exps) {
      (void)labels;
      out[u].add_term(e, values[i++]);
    }
  }
  return out;
}

// Per cumulative degree, the projection of the chart-X0 solution set onto
// each unknown block.
inline std::vector<StagedRecord> staged_records(const PotentialSystem& ps) {
  std::vector<StagedRecord> out;
  for (unsigned k = ps.first_degree(); k < ps.order; ++k) {
    StagedRecord rec{k, false, {}};
    auto set = solve_prefix(ps, Chart::x0, k);
    if (set) {
      rec.feasible = true;
      for (unsigned j = 0; j <= ps.max_block; ++j) {
        const auto labels = block_labels(j);
        auto proj = project_solution_set(*set, labels);
        BlockView view{j, proj.affine_dimension, std::nullopt};
        if (proj.affine_dimension == 0) view.forced = block_polys(labels, proj.base_point, j);
        rec.blocks.push_back(std::move(view));
      }
    }
    out.push_back(std::move(rec));
  }
  return out;
}

inline PotentialWitness make_witness(const OneForm& sigma, const PotentialSystem& ps, Chart chart,
                                     const Vector& point) {
  const unsigned M = ps.order;
  PotentialWitness w{chart, TruncSeries(2, M + 1), TruncSeries(2, M + 1), TruncSeries(2, M + 1),
                     TruncSeries(2, M + 1), TruncSeries(2, M + 2), false};
  std::array<TruncSeries*, 4> target{&w.X, &w.Y, &w.Z, &w.W};
  for (unsigned j = 0; j <= ps.max_block; ++j) {
    const auto labels = block_labels(j);
    Vector vals;
    for (const auto& l : labels) vals.push_back(point[*ps.system.column_index(l)]);
    auto polys = block_polys(labels, vals, j);
    for (std::size_t u = 0; u < 4; ++u) target[u]->add_component(polys[u]);
  }
  const TruncSeries A = sigma[0].truncated(M + 1), B = sigma[1].truncated(M + 1);
  const TruncSeries eta1 = A + w.X * A + w.Y * B;
  const TruncSeries eta2 = w.Z * A + B + w.W * B;
  w.phi = integrate_closed(OneForm({eta1, eta2}), M + 1);
  w.ideals_equal = ideal_equal_mod(ideal_of(differential(w.phi)), TruncatedIdeal({A, B}), M);
  return w;
}

inline DeciderOutcome decide(const OneForm& sigma, unsigned M, const DecideOptions& opt = {}) {
  const PotentialSystem ps = assemble_system(sigma, M);
  DeciderOutcome out;
  out.lowest_degree = ps.lowest_degree;
  out.order = M;
  out.equations = ps.system.rows();
  out.unknowns = ps.system.cols();
  const unsigned last = M - 1;

  bool any_solvable = false;
  for (Chart chart : kCharts) {
    ChartResult cr{chart, false, std::nullopt, false};
    auto full = solve_prefix(ps, chart, last);
    if (full) {
      cr.solvable = true;
      any_solvable = true;
      auto unit = check_unit_condition(*full, opt.seed, opt.unit_samples, opt.sample_bound);
      cr.unit_vanishes = unit.vanishes_identically;
      out.charts.push_back(cr);
      if (unit.unit_point) {
        out.verdict = Verdict::feasible_up_to_M;
        out.witness = make_witness(sigma, ps, chart, *unit.unit_point);
        break;
      }
      continue;
    }
    // Prefix systems are nested, so infeasibility is monotone in the degree.
    for (unsigned k = ps.first_degree(); k <= last; ++k) {
      if (!solve_prefix(ps, chart, k)) {
        cr.min_infeasible_degree = k;
        break;
      }
    }
    out.charts.push_back(cr);
  }

  if (!out.witness) {
    if (any_solvable) {
      out.verdict = Verdict::degenerate;
    } else {
      out.verdict = Verdict::infeasible;
      unsigned failing = ps.first_degree();
      for (const auto& cr : out.charts) failing = std::max(failing, *cr.min_infeasible_degree);
      out.failing_degree = failing;
      for (Chart chart : kCharts) {
        const AffineSystem sys = chart_system(ps, chart, failing);
        auto r = solve_affine(sys);
        ChartCertificate cc{chart, failing, std::get<FarkasCertificate>(r), system_digest(sys)};
        if (chart == Chart::x0) out.certificate = cc;
        out.chart_certificates.push_back(std::move(cc));
      }
    }
  }
  if (opt.staged) out.staged = staged_records(ps);
  return out;
}

// Rebuilds the chart system a certificate refers to and checks hash and
// Farkas conditions.
inline bool verify_chart_certificate(const OneForm& sigma, unsigned M, const ChartCertificate& cc) {
  const PotentialSystem ps = assemble_system(sigma, M);
  const AffineSystem sys = chart_system(ps, cc.chart, cc.through_degree);
  if (system_digest(sys) != cc.system_hash) return false;
  if (cc.certificate.row_combination.size() != sys.rows()) return false;
  return verify_farkas(sys, cc.certificate);
}

inline std::string staged_report(const DeciderOutcome& outcome) {
  std::ostringstream os;
  os << "through_degree";
  const std::size_t blocks = outcome.staged.empty() ? 0 : outcome.order - outcome.lowest_degree + 1;
  for (std::size_t j = 0; j < blocks; ++j) os << "  dim(X" << j << "..W" << j << ")";
  os << "\n";
  for (const auto& rec : outcome.staged) {
    os << rec.through_degree;
    if (!rec.feasible) {
      os << "  infeasible\n";
      continue;
    }
    for (const auto& b : rec.blocks) os << "  " << b.dimension;
    os << "\n";
    for (const auto& b : rec.blocks) {
      if (!b.forced || b.block == 0) continue;
      os << "    forced block " << b.block << ": X=" << format_poly((*b.forced)[0]) << "  Y=" << format_poly((*b.forced)[1])
         << "  Z=" << format_poly((*b.forced)[2]) << "  W=" << format_poly((*b.forced)[3]) << "\n";
    }
  }
  return os.str();
}

struct PairedDvCheck {
  Rational tilde_obstruction;  // C~_{1,x} + D~_{1,y}
  Rational predicted_first;    // 2 s / (d+3): forced value of Z_{2,xx} - Y_{2,yy} after degree d+1
  Rational predicted_second;   // 2 s / (d+4): the same quantity forced one degree later
  std::optional<Rational> solver_first;   // value read off the solution set, when it is constant there
  std::optional<Rational> solver_second;  // after degree d+2, when that prefix is solvable and the value constant
  bool consistent() const { return predicted_first == predicted_second; }
};

namespace detail {
// Z_{2,xx} - Y_{2,yy} in derivative coordinates, when constant on the set.
inline std::optional<Rational> dv_functional(const SolutionSet& set, const AffineSystem& sys) {
  const std::size_t z = *sys.column_index(coefficient_label('Z', {2, 0}));
  const std::size_t y = *sys.column_index(coefficient_label('Y', {0, 2}));
  for (const auto& v : set.nullspace_basis) {
    if (!is_zero(v[z] - v[y])) return std::nullopt;
  }
  return Rational(2) * (set.particular[z] - set.particular[y]);
}
}  // namespace detail

// The two degree-(d+1)/(d+2) constraints on Z_{2,xx} - Y_{2,yy}. They agree
// iff C~_{1,x} + D~_{1,y} = 0; the solver values cross-check the prediction.
inline PairedDvCheck paired_dv_check(const OneForm& sigma, const TruncSeries& C, const TruncSeries& D) {
  const unsigned d = require_form_degree(sigma);
  const PotentialSystem ps = assemble_system(sigma, d + 3);
  auto [ct, dt] = tilde_transform(C, D);
  PairedDvCheck out;
  out.tilde_obstruction = ct.coeff({1, 0}) + dt.coeff({0, 1});
  out.predicted_first = Rational(2) * out.tilde_obstruction / Rational(d + 3);
  out.predicted_second = Rational(2) * out.tilde_obstruction / Rational(d + 4);
  if (auto s1 = solve_prefix(ps, Chart::x0, d + 1)) out.solver_first = detail::dv_functional(*s1, ps.system);
  if (auto s2 = solve_prefix(ps, Chart::x0, d + 2)) out.solver_second = detail::dv_functional(*s2, ps.system);
  return out;
}

}  // namespace acf
