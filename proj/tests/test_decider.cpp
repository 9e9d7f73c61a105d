#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace acf;

namespace {

TruncSeries mono(unsigned order, Exponent e, Rational c = 1) {
  TruncSeries s(static_cast<unsigned>(e.size()), order);
  s.add_component(HomogPoly::monomial(static_cast<unsigned>(e.size()), e, c));
  return s;
}

TruncSeries linear(unsigned order, Rational c0, Rational cx, Rational cy) {
  TruncSeries s(2, order);
  s.add_component(HomogPoly::constant(2, c0));
  HomogPoly l(2, 1);
  l.add_term({1, 0}, cx);
  l.add_term({0, 1}, cy);
  s.add_component(l);
  return s;
}

Instance instance18(TruncSeries C, TruncSeries D, std::uint64_t seed, unsigned N = 22) {
  Instance inst;
  inst.d = 18;
  inst.N = N;
  inst.C = std::move(C);
  inst.D = std::move(D);
  inst.seed = seed;
  return inst;
}

std::optional<Rational> forced(const SolutionSet& set, const std::string& label) {
  const auto p = project_solution_set(set, {label});
  if (p.affine_dimension != 0) return std::nullopt;
  return p.base_point[0];
}

}  // namespace

TEST(AssembleSystem, RadialFormDegreeZero) {
  const OneForm sigma({mono(4, {1, 0}), mono(4, {0, 1})});
  const auto ps = assemble_system(sigma, 3);
  EXPECT_EQ(ps.lowest_degree, 1u);
  // degree 0 carries one equation: Y_0 - Z_0 = 0
  ASSERT_EQ(ps.rows_through_degree(0), 1u);
  const auto& s = ps.system;
  EXPECT_EQ(s.rhs[0], 0);
  for (std::size_t c = 0; c < s.cols(); ++c) {
    const auto& l = s.column_labels[c];
    const Rational expected = l == "Y[0,0]" ? 1 : l == "Z[0,0]" ? -1 : 0;
    EXPECT_EQ(s.matrix(0, c), expected) << l;
  }
  const auto set = std::get<SolutionSet>(solve_affine(s.prefix(1)));
  EXPECT_FALSE(forced(set, "Y[0,0]"));
  const auto both = project_solution_set(set, {"Y[0,0]", "Z[0,0]"});
  EXPECT_EQ(both.affine_dimension, 1u);
}

TEST(AssembleSystem, SizesAndErrors) {
  TruncSeries C(2, 22);
  C.add_component(HomogPoly::variable(2, 0));
  const auto br = build(instance18(C, TruncSeries(2, 22), 5));
  const auto ps = assemble_system(br.sigma, 21);
  EXPECT_EQ(ps.system.cols(), 40u);  // 4 * (1 + 2 + 3 + 4)
  EXPECT_EQ(ps.system.rows(), 78u);  // 18 + 19 + 20 + 21
  EXPECT_EQ(ps.system.column_labels.front(), "X[0,0]");
  EXPECT_THROW(assemble_system(br.sigma, 22), TruncationError);
  EXPECT_THROW(assemble_system(br.sigma, 17), ContractError);
  EXPECT_THROW(assemble_system(OneForm({TruncSeries(2, 4), TruncSeries(2, 4)}), 3), ContractError);
}

TEST(AssembleSystem, ClosedFormAdmitsZeroSolution) {
  Instance inst;
  inst.d = 5;
  inst.N = 10;
  inst.C = TruncSeries(2, 10);
  inst.D = TruncSeries(2, 10);
  inst.seed = 9;
  const auto br = build(inst);
  const auto ps = assemble_system(br.sigma, 9);
  for (const auto& v : ps.system.rhs) EXPECT_EQ(v, 0);
}

TEST(Decide, ExactDifferential) {
  TruncSeries phi(2, 12);
  phi.add_component(HomogPoly::monomial(2, {7, 0}));
  phi.add_component(HomogPoly::monomial(2, {0, 7}));
  const OneForm sigma = differential(phi);
  const auto out = decide(sigma, 10);
  ASSERT_EQ(out.verdict, Verdict::feasible_up_to_M);
  ASSERT_TRUE(out.witness);
  EXPECT_EQ(out.witness->phi, phi);
  EXPECT_TRUE(out.witness->ideals_equal);
  EXPECT_TRUE(verify_potential(out.witness->phi, sigma, 10));
}

TEST(Decide, WitnessFromSecondChart) {
  // y dx: the potential y^2/2 has Phi_x = 0, so 1 + X_0 = 0 on every solution
  const OneForm sigma({mono(5, {0, 1}), TruncSeries(2, 5)});
  const auto out = decide(sigma, 4);
  ASSERT_EQ(out.verdict, Verdict::feasible_up_to_M);
  EXPECT_EQ(out.witness->chart, Chart::w0);
  EXPECT_TRUE(verify_potential(out.witness->phi, sigma, 4));
}

TEST(Decide, DegenerateWhenUnitConditionFails) {
  const OneForm sigma({mono(5, {1, 1}), TruncSeries(2, 5)});
  const auto out = decide(sigma, 4);
  EXPECT_EQ(out.verdict, Verdict::degenerate);
  EXPECT_FALSE(out.witness);
  EXPECT_FALSE(out.certificate);
}

TEST(Decide, WitnessResidualVanishes) {
  TruncSeries C(2, 14), D(2, 14);
  Instance inst;
  inst.d = 6;
  inst.N = 14;
  inst.C = C;
  inst.D = D;
  inst.seed = 1;
  const auto br = build(inst);
  const auto out = decide(br.sigma, 13);
  ASSERT_EQ(out.verdict, Verdict::feasible_up_to_M);
  const auto& w = *out.witness;
  const TruncSeries A = br.sigma[0].truncated(14), B = br.sigma[1].truncated(14);
  const TruncSeries lhs = partial(B, 0) - partial(A, 1);
  const TruncSeries rhs = partial(w.X * A + w.Y * B, 1) - partial(w.Z * A + w.W * B, 0);
  // equation degrees d-1 .. M-1
  for (unsigned k = 5; k < 13; ++k) EXPECT_EQ(lhs.component(k), rhs.component(k)) << k;
  const Rational q = (1 + w.X.component(0).coeff({0, 0})) * (1 + w.W.component(0).coeff({0, 0})) -
                     w.Y.component(0).coeff({0, 0}) * w.Z.component(0).coeff({0, 0});
  EXPECT_NE(q, 0);
}

TEST(Decide, CounterexampleInfeasibleAtDPlus2) {
  TruncSeries C(2, 24);
  C.add_component(HomogPoly::variable(2, 0));
  const auto br = build(instance18(C, TruncSeries(2, 24), 3, 24));
  ASSERT_TRUE(genericity_guard(br.sigma).passes());
  const auto out = decide(br.sigma, 21, {});
  ASSERT_EQ(out.verdict, Verdict::infeasible);
  EXPECT_EQ(out.failing_degree, 20u);
  ASSERT_TRUE(out.certificate);
  EXPECT_TRUE(verify_chart_certificate(br.sigma, 21, *out.certificate));
  ASSERT_EQ(out.chart_certificates.size(), 3u);
  for (const auto& cc : out.chart_certificates) EXPECT_TRUE(verify_chart_certificate(br.sigma, 21, cc));
  // tampering is detected
  ChartCertificate bad = *out.certificate;
  bad.certificate.row_combination[0] += 1;
  EXPECT_FALSE(verify_chart_certificate(br.sigma, 21, bad));
  // monotone in the order
  for (unsigned M : {22u, 23u}) {
    DecideOptions opt;
    opt.staged = false;
    const auto o = decide(br.sigma, M, opt);
    EXPECT_EQ(o.verdict, Verdict::infeasible);
    EXPECT_EQ(o.failing_degree, 20u);
  }
  // no candidate potential passes
  SeededStream st(8);
  const HomogPoly P = br.state.P;
  for (int trial = 0; trial < 5; ++trial) {
    TruncSeries phi(2, 22);
    phi.add_component(P);
    for (unsigned k = 20; k < 22; ++k) phi.add_component(oracle::random_poly(st, 2, k, 20));
    EXPECT_FALSE(verify_potential(phi, br.sigma, 21));
  }
}

TEST(StagedReport, ForcedLowBlocks) {
  TruncSeries C = linear(22, 2, 1, 0), D = linear(22, 3, 0, 0);
  const auto br = build(instance18(C, D, 11));
  const auto out = decide(br.sigma, 21);
  ASSERT_EQ(out.staged.size(), 4u);
  const auto& through_d = out.staged[1];
  EXPECT_EQ(through_d.through_degree, 18u);
  EXPECT_EQ(through_d.blocks[1].dimension, 2u);
  const auto& through_d1 = out.staged[2];
  ASSERT_TRUE(through_d1.feasible);
  EXPECT_EQ(through_d1.blocks[1].dimension, 0u);
  ASSERT_TRUE(through_d1.blocks[1].forced);
  const auto& f = *through_d1.blocks[1].forced;
  HomogPoly L(2, 1);
  L.add_term({1, 0}, 3);
  L.add_term({0, 1}, -2);
  EXPECT_EQ(f[0], L);
  EXPECT_TRUE(f[1].is_zero());
  EXPECT_TRUE(f[2].is_zero());
  EXPECT_EQ(f[3], L);
  EXPECT_EQ(through_d1.blocks[2].dimension, 3u);
  const auto ps = assemble_system(br.sigma, 21);
  const auto set = *solve_prefix(ps, Chart::x0, 19);
  EXPECT_EQ(forced(set, "Z[0,2]"), Rational(0));
  EXPECT_EQ(forced(set, "Y[2,0]"), Rational(0));
  EXPECT_NE(staged_report(out).find("forced block 1"), std::string::npos);
}

TEST(Obstruction, Examples) {
  EXPECT_EQ(obstruction(mono(3, {1, 0}), TruncSeries(2, 3)), 1);
  EXPECT_EQ(obstruction(mono(3, {1, 0}), mono(3, {0, 1}, -1)), 0);
  EXPECT_EQ(obstruction(mono(3, {0, 1}, 5), TruncSeries(2, 3)), 0);
}

TEST(TildeTransform, ExamplesAndIdentity) {
  {
    auto [ct, dt] = tilde_transform(linear(3, 0, 1, 4), linear(3, 0, -2, 5));
    EXPECT_EQ(ct, linear(3, 0, 1, 4).component(1));
    EXPECT_EQ(dt, linear(3, 0, -2, 5).component(1));
  }
  auto [ct, dt] = tilde_transform(linear(3, 2, 1, 0), linear(3, 3, 0, 0));
  EXPECT_EQ(ct, linear(3, 0, 7, -4).component(1));
  EXPECT_EQ(dt, linear(3, 0, 9, -6).component(1));
  SeededStream st(6);
  for (int i = 0; i < 20; ++i) {
    const auto C = linear(3, st.uniform_symmetric(9), st.uniform_symmetric(9), st.uniform_symmetric(9));
    const auto D = linear(3, st.uniform_symmetric(9), st.uniform_symmetric(9), st.uniform_symmetric(9));
    auto [c, d] = tilde_transform(C, D);
    const Rational c0 = C.component(0).coeff({0, 0}), d0 = D.component(0).coeff({0, 0});
    // expand C~_{1,x} + D~_{1,y} by hand
    const Rational expanded = C.component(1).coeff({1, 0}) + c0 * d0 + D.component(1).coeff({0, 1}) - d0 * c0;
    EXPECT_EQ(c.coeff({1, 0}) + d.coeff({0, 1}), expanded);
    EXPECT_EQ(expanded, obstruction(C, D));
  }
}

TEST(IntegrateClosed, Examples) {
  const OneForm e1({mono(4, {0, 1}), mono(4, {1, 0})});
  EXPECT_EQ(integrate_closed(e1, 4), mono(5, {1, 1}));
  const OneForm e2({mono(4, {1, 0}, 2), mono(4, {0, 1}, 2)});
  TruncSeries expect(2, 5);
  expect.add_component(HomogPoly::monomial(2, {2, 0}));
  expect.add_component(HomogPoly::monomial(2, {0, 2}));
  EXPECT_EQ(integrate_closed(e2, 4), expect);
  SeededStream st(13);
  for (int i = 0; i < 10; ++i) {
    const unsigned n = i % 2 ? 3 : 2;
    TruncSeries phi(n, 8);
    for (unsigned k = 1; k < 8; ++k) phi.add_component(oracle::random_poly(st, n, k));
    EXPECT_EQ(integrate_closed(differential(phi), 7), phi);
  }
  const OneForm ydx({mono(4, {0, 1}), TruncSeries(2, 4)});
  try {
    integrate_closed(ydx, 4);
    FAIL();
  } catch (const NotClosedError& e) {
    EXPECT_EQ(e.degree(), 0u);
  }
}

TEST(VerifyPotential, Examples) {
  TruncSeries F(2, 6);
  F.add_component(HomogPoly::monomial(2, {2, 0}));
  F.add_component(HomogPoly::monomial(2, {0, 2}));
  EXPECT_TRUE(verify_potential(F, OneForm({mono(5, {1, 0}, 2), mono(5, {0, 1}, 2)}), 5));
  EXPECT_FALSE(verify_potential(mono(6, {2, 0}), OneForm({mono(5, {1, 0}, 2), mono(5, {0, 1})}), 5));
  EXPECT_THROW(verify_potential(mono(5, {2, 0}), OneForm({mono(5, {1, 0}), mono(5, {0, 1})}), 5), TruncationError);
}

TEST(VerifyPotential, ThreeVariableExample) {
  // Phi = e^z (x^2 + y^2) below order 8, omega = dF + F dz
  TruncSeries phi(3, 8);
  Rational fact = 1;
  for (unsigned j = 0; j + 2 < 8; ++j) {
    if (j > 0) fact *= j;
    phi.add_component(HomogPoly::monomial(3, {2, 0, j}, 1 / fact));
    phi.add_component(HomogPoly::monomial(3, {0, 2, j}, 1 / fact));
  }
  TruncSeries wx(3, 8), wy(3, 8), wz(3, 8);
  wx.add_component(HomogPoly::monomial(3, {1, 0, 0}, 2));
  wy.add_component(HomogPoly::monomial(3, {0, 1, 0}, 2));
  wz.add_component(HomogPoly::monomial(3, {2, 0, 0}));
  wz.add_component(HomogPoly::monomial(3, {0, 2, 0}));
  const OneForm omega({wx, wy, wz});
  EXPECT_TRUE(verify_potential(phi.truncated(8), omega, 7));
  TruncSeries phi9(3, 9);
  for (const auto& [k, p] : phi.components()) phi9.add_component(p);
  phi9.add_component(HomogPoly::monomial(3, {2, 0, 6}, Rational(1, 720)));
  phi9.add_component(HomogPoly::monomial(3, {0, 2, 6}, Rational(1, 720)));
  EXPECT_TRUE(verify_potential(phi9, omega, 8));
  // x(2e^z + 3x) generates the same ideal as x, so adding x^3 keeps equality
  TruncSeries plus = phi9;
  plus.add_component(HomogPoly::monomial(3, {3, 0, 0}));
  EXPECT_TRUE(verify_potential(plus, omega, 8));
  // dropping the x^2 e^z part leaves the ideal (y)
  TruncSeries only_y(3, 9);
  for (const auto& [k, p] : phi9.components()) {
    for (const auto& [e, c] : p.terms()) {
      if (e[1] == 2) only_y.add_component(HomogPoly::monomial(3, e, c));
    }
  }
  EXPECT_FALSE(verify_potential(only_y, omega, 8));
}

TEST(GenericityGuard, GenericAndDegenerate) {
  TruncSeries C(2, 22);
  C.add_component(HomogPoly::variable(2, 0));
  const auto br = build(instance18(C, TruncSeries(2, 22), 17));
  const auto g = genericity_guard(br.sigma);
  EXPECT_TRUE(g.passes());
  EXPECT_EQ(g.checks.size(), 6u);
  // A = 19 x^18 + ..., B = 0: leading parts are not generic
  const OneForm bad({mono(22, {18, 0}, 19), TruncSeries(2, 22)});
  EXPECT_FALSE(genericity_guard(bad).passes());
}

TEST(PairedDvCheck, Dichotomy) {
  TruncSeries Cx(2, 22);
  Cx.add_component(HomogPoly::variable(2, 0));
  const auto br = build(instance18(Cx, TruncSeries(2, 22), 21));
  const auto pc = paired_dv_check(br.sigma, Cx, TruncSeries(2, 22));
  EXPECT_EQ(pc.tilde_obstruction, 1);
  EXPECT_FALSE(pc.consistent());
  EXPECT_EQ(pc.solver_first, Rational(2, 21));
  EXPECT_FALSE(pc.solver_second);

  const TruncSeries D = mono(22, {0, 1}, -1);
  const auto br0 = build(instance18(Cx, D, 21));
  const auto pc0 = paired_dv_check(br0.sigma, Cx, D);
  EXPECT_EQ(pc0.tilde_obstruction, 0);
  EXPECT_TRUE(pc0.consistent());
  EXPECT_EQ(pc0.solver_first, Rational(0));
}
