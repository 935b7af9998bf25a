#include "breuil/window.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace breuil;

namespace {

Frame frame_of(unsigned p, int r, int e, int a, int N, int D, const std::string& E, int max_level = 0) {
  return Frame(oracle::make_params(p, r, e, a, N, D, 2, E, max_level));
}

SeriesElem poly(const RingPtr& ring, const std::string& text) {
  return SeriesElem::from_poly(ring, parse_int_poly(text, ring->frame_params()->variable_names()));
}

SMatrix mat(const RingPtr& ring, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::vector<SeriesElem>> out;
  for (const auto& row : rows) {
    out.emplace_back();
    for (const auto& x : row) out.back().push_back(poly(ring, x));
  }
  return SMatrix::from_rows(out);
}

SMatrix identity(const RingPtr& ring, int n) { return SMatrix::identity(n, SeriesElem::one(ring)); }

SMatrix random_invertible(std::mt19937_64& rng, const RingPtr& ring, int n) {
  while (true) {
    SMatrix U = oracle::random_matrix(rng, ring, n, n);
    if (U.det().is_unit()) return U;
  }
}

// e = 2 frame with no t-variables and one with a t-variable and e = 1.
Frame frame_a() { return frame_of(3, 0, 2, 2, 4, 0, "u^2 + 3"); }
Frame frame_b() { return frame_of(3, 1, 1, 2, 3, 2, "u + 3 + 3*t1"); }

}  // namespace

TEST(MakeWindow, Examples) {
  Frame f = frame_a();
  auto S = f.series(2);
  Window w1 = make_window(f, 2, 1, 0, identity(S, 1));
  EXPECT_EQ(phi_matrix(w1)(0, 0), f.E(2));
  Window w2 = make_window(f, 2, 0, 1, identity(S, 1));
  EXPECT_EQ(phi_matrix(w2), identity(S, 1));
  Window w3 = make_window(f, 2, 1, 1, mat(S, {{"1", "u"}, {"0", "1"}}));
  EXPECT_EQ(w3.h(), 2);
}

TEST(MakeWindow, Errors) {
  Frame f = frame_a();
  auto S = f.series(2);
  EXPECT_THROW(make_window(f, 2, 1, 1, identity(S, 1)), Error);
  EXPECT_THROW(make_window(f, 2, 1, 0, mat(S, {{"3 + u"}})), ArithmeticError);
  EXPECT_THROW(make_window(f, 2, 0, 0, identity(S, 1)), Error);
  EXPECT_THROW(make_window(f, 1, 1, 0, identity(S, 1)), RingMismatch);
}

TEST(NormalDecompose, AlreadyNormal) {
  Frame f = frame_a();
  auto S = f.series(2);
  SMatrix M = diag2(1, f.E(2), 1, SeriesElem::one(S));
  auto nd = normal_decompose(M);
  EXPECT_EQ(nd.d, 1);
  EXPECT_EQ(nd.c, 1);
  EXPECT_EQ(nd.A, identity(S, 2));
  EXPECT_EQ(nd.U, identity(S, 2));
}

TEST(NormalDecompose, ColumnSwap) {
  Frame f = frame_a();
  auto S = f.series(2);
  SMatrix M = mat(S, {{"0", "u^2 + 3"}, {"1", "0"}});
  auto nd = normal_decompose(M);
  EXPECT_EQ(nd.d, 1);
  EXPECT_EQ(nd.c, 1);
  // Swapping the columns of M gives diag(E, 1) directly.
  SMatrix swap = mat(S, {{"0", "1"}, {"1", "0"}});
  EXPECT_EQ(nd.U, swap);
  EXPECT_EQ(nd.A, identity(S, 2));
  EXPECT_EQ(M * nd.U, nd.A * c_matrix(f, S, 1, 1));
}

TEST(NormalDecompose, DividesByE) {
  Frame f = frame_a();
  auto S = f.series(2);
  SeriesElem x = poly(S, "1 + u");
  SMatrix M = SMatrix::from_rows({{f.E(2) * x}});
  auto nd = normal_decompose(M);
  EXPECT_EQ(nd.d, 1);
  EXPECT_EQ(nd.c, 0);
  EXPECT_EQ(nd.A(0, 0), x);
}

TEST(NormalDecompose, RejectsNonFreeCokernel) {
  Frame f = frame_a();
  auto S = f.series(2);
  EXPECT_THROW(normal_decompose(mat(S, {{"u"}})), ArithmeticError);
  EXPECT_THROW(normal_decompose(mat(S, {{"1", "u"}, {"0", "3"}})), ArithmeticError);
  EXPECT_THROW(normal_decompose(mat(S, {{"u^2 + 3", "0"}, {"0", "u^2 + 3"}}).block(0, 0, 2, 1)), Error);
}

TEST(NormalDecompose, RecoversShapeOnRandomInputs) {
  std::mt19937_64 rng(11);
  for (Frame f : {frame_a(), frame_b()}) {
    auto S = f.series(2);
    for (int trial = 0; trial < 25; ++trial) {
      const int d = static_cast<int>(rng() % 3), c = 3 - d;
      Window w = oracle::random_window(rng, f, 2, d, c);
      SMatrix V = random_invertible(rng, S, 3);
      SMatrix M = phi_matrix(w) * V;
      auto nd = normal_decompose(M);
      EXPECT_EQ(nd.d, d);
      EXPECT_EQ(nd.c, c);
      EXPECT_EQ(M * nd.U, nd.A * c_matrix(f, S, nd.d, nd.c));
      EXPECT_TRUE(nd.U.det().is_unit());
    }
  }
}

TEST(NormalDecompose, WindowFromPhiGivesIsomorphism) {
  std::mt19937_64 rng(12);
  for (Frame f : {frame_a(), frame_b()}) {
    auto S = f.series(2);
    for (int trial = 0; trial < 15; ++trial) {
      const int d = static_cast<int>(rng() % 3), c = 3 - d;
      Window w = oracle::random_window(rng, f, 2, d, c);
      SMatrix V = random_invertible(rng, S, 3);
      // V is a morphism from the φ-matrix M to w.
      SMatrix M = sigma(V).inverse() * phi_matrix(w) * V;
      auto [w2, U2] = window_from_phi(f, 2, M);
      EXPECT_EQ(w2.d, d);
      EXPECT_EQ(M * U2, sigma(U2) * phi_matrix(w2));
      EXPECT_TRUE(check_morphism(w2, w, V * U2));
    }
  }
}

TEST(Triple, RoundtripUnit) {
  Frame f = frame_a();
  auto S = f.series(2);
  Window w = make_window(f, 2, 1, 0, identity(S, 1));
  Triple t = triple_of(w);
  EXPECT_EQ(t.B, identity(S, 1));
  EXPECT_EQ(window_of(f, 2, t).A, w.A);
}

TEST(Triple, RoundtripRandom) {
  std::mt19937_64 rng(13);
  for (Frame f : {frame_a(), frame_b()}) {
    auto S = f.series(2);
    SeriesElem sE = frobenius(f.E(2));
    for (int trial = 0; trial < 20; ++trial) {
      const int d = static_cast<int>(rng() % 3), c = 2 - d;
      if (d + c == 0) continue;
      Window w = oracle::random_window(rng, f, 2, d, c);
      Triple t = triple_of(w);
      EXPECT_EQ(window_of(f, 2, t).A, w.A);
      EXPECT_EQ(t.B * w.A, identity(S, 2));
      EXPECT_EQ(t.F, t.F1 * diag2(d, SeriesElem::one(S), c, sE));
      // F_1 on the L-block: the L-columns of B.
      EXPECT_EQ(t.F1.block(0, d, 2, c), t.B.block(0, d, 2, c));
    }
  }
}

TEST(Lift, UnitAndCap) {
  Frame f = frame_a();
  Window w = make_window(f, 2, 1, 0, identity(f.series(2), 1));
  Window l = lift_window(w);
  EXPECT_EQ(l.level, 3);
  EXPECT_EQ(l.A, identity(f.series(3), 1));
  Window top = make_window(f, f.max_level(), 1, 0, identity(f.series(f.max_level()), 1));
  EXPECT_THROW(lift_window(top), PrecisionError);
}

TEST(Lift, ReduceInvertsLift) {
  std::mt19937_64 rng(14);
  for (Frame f : {frame_a(), frame_b()}) {
    for (int trial = 0; trial < 25; ++trial) {
      const int d = static_cast<int>(rng() % 3), c = 2 - d;
      if (d + c == 0) continue;
      Window w = oracle::random_window(rng, f, 2, d, c);
      Window l = lift_window(w);
      EXPECT_EQ(l.d, d);
      EXPECT_EQ(l.c, c);
      EXPECT_EQ(reduce_window(l, 2).A, w.A);
    }
  }
}

TEST(Morphism, Examples) {
  Frame f = frame_a();
  auto S = f.series(2);
  Window w = make_window(f, 2, 1, 1, mat(S, {{"1", "u"}, {"0", "1"}}));
  EXPECT_TRUE(check_morphism(w, w, identity(S, 2)));
  EXPECT_TRUE(check_morphism(w, w, identity(S, 2).scaled(SeriesElem::constant(S, 3))));
  Window e1 = make_window(f, 2, 1, 0, identity(S, 1));
  // E·u against u^p·E: differ because u^3 ≠ u in 𝔖_2.
  EXPECT_FALSE(check_morphism(e1, e1, mat(S, {{"u"}})));
  EXPECT_THROW(check_morphism(e1, w, identity(S, 1)), Error);
}

TEST(Morphism, TransportIsMorphism) {
  std::mt19937_64 rng(15);
  for (Frame f : {frame_a(), frame_b()}) {
    auto S = f.series(2);
    for (int trial = 0; trial < 20; ++trial) {
      const int d = static_cast<int>(rng() % 3), c = 3 - d;
      Window w = oracle::random_window(rng, f, 2, d, c);
      SMatrix U = oracle::random_window_iso(rng, f, S, d, c);
      Window w2 = transport_window(w, U);
      EXPECT_TRUE(check_morphism(w, w2, U));
      SMatrix bumped = U;
      bumped(0, 0) = bumped(0, 0) + SeriesElem::one(S);
      EXPECT_FALSE(check_morphism(w, w2, bumped));
    }
  }
}

TEST(Rigidity, Examples) {
  Frame f = frame_a();
  auto S = f.series(6);
  Window w = make_window(f, 6, 1, 1, identity(S, 2));
  SMatrix zero(2, 2, SeriesElem::zero(S));
  EXPECT_TRUE(check_rigidity(w, w, zero, 2));
  SMatrix pI = identity(S, 2).scaled(SeriesElem::constant(S, 9));
  ASSERT_TRUE(check_morphism(w, w, pI));
  EXPECT_TRUE(check_rigidity(w, w, pI, 2));
  EXPECT_FALSE(check_rigidity(w, w, identity(S, 2).scaled(poly(S, "u^4")), 2));
}

TEST(Rigidity, TruncatedCoefficientsAdmitTorsionMorphism) {
  // Over coefficients mod p^N the E-torsion element p^{N-1}·u^{ape-e} gives a
  // nonzero morphism vanishing mod u^{ae}; check_rigidity reports it.
  Frame f = frame_a();
  auto S = f.series(6);
  Window w = make_window(f, 6, 1, 0, identity(S, 1));
  SMatrix U = mat(S, {{"27*u^10"}});
  EXPECT_TRUE(check_morphism(w, w, U));
  EXPECT_FALSE(check_rigidity(w, w, U, 2));
}

TEST(Rigidity, NoMorphismVanishingModUae) {
  std::mt19937_64 rng(16);
  struct Case {
    Frame f;
    int a;
  };
  std::vector<Case> cases{{frame_of(3, 0, 1, 1, 4, 0, "u + 3"), 1},
                          {frame_of(3, 0, 2, 1, 4, 0, "u^2 + 3*u + 3"), 1},
                          {frame_of(3, 0, 1, 2, 4, 0, "u + 3"), 2},
                          {frame_of(3, 1, 1, 1, 4, 1, "u + 3 - 3*t1"), 1},
                          {frame_of(5, 0, 1, 1, 3, 0, "u + 5"), 1}};
  for (const auto& [f, a] : cases) {
    for (int trial = 0; trial < 6; ++trial) {
      const int h1 = 1 + static_cast<int>(rng() % 2), h2 = 1 + static_cast<int>(rng() % 2);
      const int d1 = static_cast<int>(rng() % (h1 + 1)), d2 = static_cast<int>(rng() % (h2 + 1));
      auto A1 = oracle::random_int_window(rng, f, h1, d1);
      auto A2 = oracle::random_int_window(rng, f, h2, d2);
      EXPECT_EQ(oracle::rigidity_kernel_dim(f, a * static_cast<int>(f.p()), a, A1, d1, A2, d2), 0);
    }
  }
}

TEST(Rigidity, OracleSeesMorphismsWithoutTheCut) {
  // Control: with no vanishing condition, identity windows have the scalar
  // endomorphisms, so the oracle's kernel is nonzero.
  Frame f = frame_of(3, 0, 1, 1, 4, 0, "u + 3");
  std::vector<std::vector<IntPoly>> I{{IntPoly::constant(1, 1)}};
  EXPECT_GE(oracle::rigidity_kernel_dim(f, 3, 0, I, 0, I, 0), 1);
  EXPECT_GE(oracle::rigidity_kernel_dim(f, 3, 0, I, 1, I, 1), 1);
}

TEST(SpecialFiber, Examples) {
  Frame f = frame_a();
  auto S = f.series(2);
  auto Z = f.scalar();
  SpecialFiber conn = special_fiber(make_window(f, 2, 1, 0, identity(S, 1)));
  EXPECT_EQ(conn.Phi0, identity(Z, 1));
  EXPECT_TRUE(conn.is_nilpotent);
  SpecialFiber et = special_fiber(make_window(f, 2, 0, 1, identity(S, 1)));
  EXPECT_EQ(et.Phi0(0, 0), SeriesElem::constant(Z, 3));
  EXPECT_FALSE(et.is_nilpotent);
  SpecialFiber both = special_fiber(make_window(f, 2, 1, 1, identity(S, 2)));
  EXPECT_EQ(both.height, 2);
  EXPECT_EQ(both.dim, 1);
  EXPECT_FALSE(both.is_nilpotent);
}

TEST(SpecialFiber, NilpotenceUsesA0NotItsInverse) {
  Frame f = frame_a();
  auto S = f.series(2);
  // N_0 = [[0,0],[1,1]] is not nilpotent, while diag(0,1)·A_0^{-1} = [[0,0],[1,0]] is.
  SpecialFiber sf = special_fiber(make_window(f, 2, 1, 1, mat(S, {{"0", "1"}, {"1", "1"}})));
  EXPECT_FALSE(sf.is_nilpotent);
  SpecialFiber nil = special_fiber(make_window(f, 2, 1, 1, mat(S, {{"1", "1"}, {"1", "0"}})));
  EXPECT_TRUE(nil.is_nilpotent);
}

TEST(SpecialFiber, NilpotenceInvariantUnderIsomorphism) {
  std::mt19937_64 rng(17);
  int nil_count = 0;
  for (Frame f : {frame_a(), frame_b()}) {
    auto S = f.series(2);
    for (int trial = 0; trial < 40; ++trial) {
      const int d = static_cast<int>(rng() % 4), c = 3 - d;
      Window w = oracle::random_window(rng, f, 2, d, c);
      // Mix in sparse windows so that both outcomes occur.
      if (trial % 2 == 0) {
        for (int i = d; i < 3; ++i) {
          for (int j = 0; j < 3; ++j) w.A(i, j) = w.A(i, j).p_valuation() > 0 ? w.A(i, j) : w.A(i, j) * SeriesElem::constant(S, 3);
        }
        for (int i = d; i < 3; ++i) w.A(i, i - d) = w.A(i, i - d) + SeriesElem::one(S);
        if (!w.A.det().is_unit()) continue;
      }
      SMatrix U = oracle::random_window_iso(rng, f, S, d, c);
      Window w2 = transport_window(w, U);
      const bool n1 = special_fiber(w).is_nilpotent;
      EXPECT_EQ(n1, special_fiber(w2).is_nilpotent);
      nil_count += n1;
    }
  }
  EXPECT_GT(nil_count, 0);
}

TEST(WindowInvariants, DeterminantOfPhi) {
  std::mt19937_64 rng(18);
  for (Frame f : {frame_a(), frame_b()}) {
    auto S = f.series(2);
    for (int trial = 0; trial < 20; ++trial) {
      const int d = static_cast<int>(rng() % 4), c = 3 - d;
      Window w = oracle::random_window(rng, f, 2, d, c);
      SeriesElem Ed = SeriesElem::one(S);
      for (int i = 0; i < d; ++i) Ed = Ed * f.E(2);
      SeriesElem det = phi_matrix(w).det();
      EXPECT_EQ(det, w.A.det() * Ed);
      if (d < 2) EXPECT_FALSE(det.is_zero());
    }
  }
}

TEST(Lie, Ranks) {
  std::mt19937_64 rng(19);
  Frame f = frame_b();
  auto S = f.series(2);
  EXPECT_EQ(lie(make_window(f, 2, 1, 0, identity(S, 1))).rank, 1);
  EXPECT_EQ(lie(make_window(f, 2, 0, 2, identity(S, 2))).rank, 0);
  for (int trial = 0; trial < 10; ++trial) {
    Window w = oracle::random_window(rng, f, 2, 2, 1);
    LieData ld = lie(w);
    EXPECT_EQ(ld.rank, 2);
    EXPECT_EQ(ld.rank, normal_decompose(phi_matrix(w)).d);
    EXPECT_EQ(ld.presentation.rows(), 3);
  }
}

TEST(Render, Matrix) {
  Frame f = frame_a();
  auto S = f.series(2);
  EXPECT_EQ(to_string(mat(S, {{"1", "u"}, {"0", "-1"}})), "[[1, u], [0, -1]]");
}
