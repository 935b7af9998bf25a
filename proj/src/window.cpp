#include "breuil/window.hpp"

#include <sstream>

namespace breuil {

namespace {

using FpMatrix = std::vector<std::vector<u64>>;

// Rank of a list of vectors over F_p (vectors are reduced in place copies).
int fp_rank(FpMatrix rows, u64 p) {
  int rank = 0;
  const int ncols = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  for (int col = 0; col < ncols && rank < static_cast<int>(rows.size()); ++col) {
    int piv = -1;
    for (int r = rank; r < static_cast<int>(rows.size()); ++r) {
      if (rows[r][col] % p != 0) {
        piv = r;
        break;
      }
    }
    if (piv < 0) continue;
    std::swap(rows[piv], rows[rank]);
    const u64 inv = inv_mod(rows[rank][col], p);
    for (auto& v : rows[rank]) v = mul_mod(v, inv, p);
    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
      if (r == rank || rows[r][col] == 0) continue;
      const u64 f = rows[r][col];
      for (int k = 0; k < ncols; ++k) rows[r][k] = sub_mod(rows[r][k], mul_mod(f, rows[rank][k], p), p);
    }
    ++rank;
  }
  return rank;
}

u64 residue_mod_p(const SeriesElem& x) { return x.constant_term() % x.ring()->p(); }

void require_window_ring(const Frame& frame, int level, const SMatrix& A) {
  RingPtr expected = frame.series(level);
  for (const auto& x : A.entries()) require_same_ring(*expected, *x.ring(), "window");
}

}  // namespace

Window make_window(const Frame& frame, int level, int d, int c, SMatrix A) {
  if (d < 0 || c < 0 || d + c < 1) throw Error("make_window: need d, c >= 0 and d + c >= 1");
  if (A.rows() != d + c || A.cols() != d + c) throw Error("make_window: A must be square of size d + c");
  require_window_ring(frame, level, A);
  if (!A.det().is_unit()) throw ArithmeticError("make_window: det(A) is not a unit");
  return Window{frame, level, d, c, std::move(A)};
}

SMatrix sigma(const SMatrix& M) {
  return M.map([](const SeriesElem& x) { return frobenius(x); });
}

SMatrix c_matrix(const Frame& frame, const RingPtr& ring, int d, int c) {
  SeriesElem E = SeriesElem::from_poly(ring, frame.params().E);
  return diag2(d, E, c, SeriesElem::one(ring));
}

SMatrix phi_matrix(const Window& w) { return w.A * c_matrix(w.frame, w.ring(), w.d, w.c); }

NormalDecomposition normal_decompose(const SMatrix& M) {
  if (!M.square()) throw Error("normal_decompose: matrix must be square");
  const int h = M.rows();
  const RingPtr ring = M(0, 0).ring();
  if (ring->kind() != RingKind::kSeries) throw Error("normal_decompose: expects a matrix over S_a");
  const u64 p = ring->p();

  // Pivot columns over the residue field, leftmost first.
  std::vector<int> pivots, others;
  FpMatrix basis;
  for (int j = 0; j < h; ++j) {
    std::vector<u64> col(h);
    for (int i = 0; i < h; ++i) col[i] = residue_mod_p(M(i, j));
    FpMatrix trial = basis;
    trial.push_back(col);
    if (fp_rank(trial, p) > static_cast<int>(basis.size())) {
      basis.push_back(col);
      pivots.push_back(j);
    } else {
      others.push_back(j);
    }
  }
  const int c = static_cast<int>(pivots.size());
  const int d = h - c;

  // Pivot rows: lowest indices making the pivot block invertible mod p.
  std::vector<int> prow;
  FpMatrix chosen;
  for (int i = 0; i < h && static_cast<int>(prow.size()) < c; ++i) {
    std::vector<u64> row(c);
    for (int k = 0; k < c; ++k) row[k] = residue_mod_p(M(i, pivots[k]));
    FpMatrix trial = chosen;
    trial.push_back(row);
    if (fp_rank(trial, p) > static_cast<int>(chosen.size())) {
      chosen.push_back(row);
      prow.push_back(i);
    }
  }

  const SeriesElem zero = SeriesElem::zero(ring);
  const SeriesElem one = SeriesElem::one(ring);
  SMatrix A(h, h, zero);
  SMatrix Lambda(c > 0 ? c : 1, d > 0 ? d : 1, zero);
  SMatrix KRinv(c > 0 ? c : 1, c > 0 ? c : 1, zero);
  if (c > 0) {
    SMatrix KR(c, c, zero);
    for (int a = 0; a < c; ++a) {
      for (int b = 0; b < c; ++b) KR(a, b) = M(prow[a], pivots[b]);
    }
    KRinv = KR.inverse();
  }
  for (int k = 0; k < d; ++k) {
    const int o = others[k];
    std::vector<SeriesElem> lambda;
    for (int a = 0; a < c; ++a) {
      SeriesElem acc = zero;
      for (int b = 0; b < c; ++b) acc += KRinv(a, b) * M(prow[b], o);
      lambda.push_back(lift_from_quotient(reduce_mod_E(acc), ring));
      Lambda(a, k) = lambda.back();
    }
    for (int i = 0; i < h; ++i) {
      SeriesElem r = M(i, o);
      for (int b = 0; b < c; ++b) r -= M(i, pivots[b]) * lambda[b];
      auto y = divide_by_E(r);
      if (!y) throw ArithmeticError("normal_decompose: cokernel is not free (column " + std::to_string(o) + ")");
      A(i, k) = *y;
    }
  }
  for (int b = 0; b < c; ++b) {
    for (int i = 0; i < h; ++i) A(i, d + b) = M(i, pivots[b]);
  }

  // U = P·[[I_d, 0], [-Λ, I_c]] with M·P = [M_J | K].
  SMatrix P(h, h, zero);
  for (int k = 0; k < d; ++k) P(others[k], k) = one;
  for (int b = 0; b < c; ++b) P(pivots[b], d + b) = one;
  SMatrix N = SMatrix::identity(h, one);
  for (int b = 0; b < c; ++b) {
    for (int k = 0; k < d; ++k) N(d + b, k) = -Lambda(b, k);
  }
  SMatrix U = P * N;
  if (!A.det().is_unit()) throw ArithmeticError("normal_decompose: cokernel is not free (A is singular)");
  return NormalDecomposition{d, c, std::move(A), std::move(U)};
}

std::pair<Window, SMatrix> window_from_phi(const Frame& frame, int level, const SMatrix& M) {
  NormalDecomposition nd = normal_decompose(M);
  SMatrix Aw = sigma(nd.U).inverse() * nd.A;
  return {make_window(frame, level, nd.d, nd.c, std::move(Aw)), std::move(nd.U)};
}

Window transport_window(const Window& w, const SMatrix& U) {
  const int d = w.d, h = w.h();
  SMatrix W = U.inverse();
  const RingPtr ring = w.ring();
  const SeriesElem E = SeriesElem::from_poly(ring, w.frame.params().E);
  // C·U^{-1}·C^{-1}, exact because the (L, J) block of U^{-1} is divisible by E.
  SMatrix conj = W;
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < h; ++j) {
      if (i < d && j >= d) conj(i, j) = E * W(i, j);
      if (i >= d && j < d) {
        auto y = divide_by_E(W(i, j));
        if (!y) throw ArithmeticError("transport_window: U does not preserve Q");
        conj(i, j) = *y;
      }
    }
  }
  return make_window(w.frame, w.level, w.d, w.c, sigma(U) * w.A * conj);
}

Triple triple_of(const Window& w) {
  SMatrix B = w.A.inverse();
  const RingPtr ring = w.ring();
  SeriesElem sE = frobenius(SeriesElem::from_poly(ring, w.frame.params().E));
  SMatrix F = B * diag2(w.d, SeriesElem::one(ring), w.c, sE);
  return Triple{w.d, w.c, B, std::move(F), B};
}

Window window_of(const Frame& frame, int level, const Triple& t) {
  return make_window(frame, level, t.d, t.c, t.B.inverse());
}

Window lift_window(const Window& w) {
  if (w.level + 1 > w.frame.max_level()) throw PrecisionError("lift_window: level cap exceeded");
  SMatrix A = w.A.map([&](const SeriesElem& x) { return change_level(x, w.level + 1); });
  return make_window(w.frame, w.level + 1, w.d, w.c, std::move(A));
}

Window reduce_window(const Window& w, int level) {
  if (level < 1 || level > w.level) throw PrecisionError("reduce_window: invalid target level");
  SMatrix A = w.A.map([&](const SeriesElem& x) { return change_level(x, level); });
  return make_window(w.frame, level, w.d, w.c, std::move(A));
}

bool check_morphism(const Window& source, const Window& target, const SMatrix& U) {
  if (U.rows() != target.h() || U.cols() != source.h())
    throw Error("check_morphism: U must be (target rank) x (source rank)");
  if (source.level != target.level) throw RingMismatch("check_morphism: windows at different levels");
  SMatrix lhs = target.A * c_matrix(target.frame, target.ring(), target.d, target.c) * U;
  SMatrix rhs = sigma(U) * source.A * c_matrix(source.frame, source.ring(), source.d, source.c);
  return lhs == rhs;
}

bool check_rigidity(const Window& source, const Window& target, const SMatrix& U, int a) {
  (void)source;
  (void)target;
  const RingPtr ring = U(0, 0).ring();
  const int T = ring->tcount();
  const int cut = std::min(a * ring->e(), ring->ulen());
  bool vanishes_low = true;
  for (const auto& x : U.entries()) {
    for (int j = 0; j < cut && vanishes_low; ++j) {
      for (int t = 0; t < T; ++t) {
        if (x.coeff(t, j) != 0) {
          vanishes_low = false;
          break;
        }
      }
    }
  }
  return !(vanishes_low && !U.is_zero());
}

SpecialFiber special_fiber(const Window& w) {
  const int h = w.h();
  const u64 p = w.frame.p();
  RingPtr Z = w.frame.scalar();
  SMatrix A0 = w.A.map([&](const SeriesElem& x) { return SeriesElem::constant(Z, static_cast<long long>(x.constant_term())); });
  SeriesElem a0 = SeriesElem::constant(Z, static_cast<long long>(w.frame.E(1).constant_term()));
  SMatrix Phi0 = diag2(w.d, SeriesElem::one(Z), w.c, a0) * A0.inverse();

  // N_0 = diag(0_d, I_c)·A_0 mod p; σ is the identity on F_p.
  FpMatrix N(h, std::vector<u64>(h, 0));
  for (int i = w.d; i < h; ++i) {
    for (int j = 0; j < h; ++j) N[i][j] = A0(i, j).constant_term() % p;
  }
  FpMatrix P = N;
  for (int step = 1; step < h; ++step) {
    FpMatrix next(h, std::vector<u64>(h, 0));
    for (int i = 0; i < h; ++i) {
      for (int k = 0; k < h; ++k) {
        if (P[i][k] == 0) continue;
        for (int j = 0; j < h; ++j) next[i][j] = add_mod(next[i][j], mul_mod(P[i][k], N[k][j], p), p);
      }
    }
    P = std::move(next);
  }
  bool nilpotent = true;
  for (const auto& row : P) {
    for (u64 v : row) nilpotent = nilpotent && v == 0;
  }
  return SpecialFiber{h, w.d, std::move(A0), std::move(Phi0), nilpotent};
}

LieData lie(const Window& w) {
  SMatrix pres = phi_matrix(w).map([](const SeriesElem& x) { return reduce_mod_E(x); });
  const u64 p = w.frame.p();
  FpMatrix rows;
  for (int i = 0; i < pres.rows(); ++i) {
    std::vector<u64> row;
    for (int j = 0; j < pres.cols(); ++j) row.push_back(pres(i, j).constant_term() % p);
    rows.push_back(row);
  }
  // A free cokernel has rank h minus the rank of the presentation mod m.
  return LieData{w.h() - fp_rank(rows, p), std::move(pres)};
}

std::string to_string(const SMatrix& M) {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < M.rows(); ++i) {
    if (i) os << ", ";
    os << "[";
    for (int j = 0; j < M.cols(); ++j) {
      if (j) os << ", ";
      os << to_string(M(i, j));
    }
    os << "]";
  }
  os << "]";
  return os.str();
}

}  // namespace breuil
