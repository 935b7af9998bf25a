#include "oracles.hpp"
#include <stdexcept>

namespace oracle {

FrameParams make_params(unsigned p, int r, int e, int a, int N, int D, int L, const std::string& E,
                        int max_level) {
  FrameParams f;
  f.p = p;
  f.r = r;
  f.e = e;
  f.a = a;
  f.N = N;
  f.D = D;
  f.L = L;
  f.max_level = max_level;
  f.E = breuil::parse_int_poly(E, f.variable_names());
  return f;
}

SeriesElem random_elem(std::mt19937_64& rng, const RingPtr& ring) {
  std::vector<breuil::u64> c(ring->size());
  std::uniform_int_distribution<breuil::u64> dist(0, ring->modulus() - 1);
  for (auto& v : c) v = dist(rng);
  return SeriesElem(ring, std::move(c));
}

SeriesElem random_small(std::mt19937_64& rng, const RingPtr& ring, int tdeg, int ulen) {
  std::vector<breuil::u64> c(ring->size(), 0);
  std::uniform_int_distribution<breuil::u64> dist(0, ring->modulus() - 1);
  const int T = ring->tcount();
  for (int j = 0; j < std::min(ulen, ring->ulen()); ++j) {
    for (int t = 0; t < T; ++t) {
      if (ring->tdegree(t) <= tdeg) c[j * T + t] = dist(rng);
    }
  }
  return SeriesElem(ring, std::move(c));
}

SeriesElem random_unit(std::mt19937_64& rng, const RingPtr& ring) {
  SeriesElem x = random_elem(rng, ring);
  if (x.constant_term() % ring->p() == 0) x += SeriesElem::one(ring);
  return x;
}

SeriesElem schoolbook_mul(const RingPtr& ring, const IntPoly& x, const IntPoly& y) {
  IntPoly out(x.nvars());
  for (const auto& [ea, ca] : x.terms()) {
    for (const auto& [eb, cb] : y.terms()) {
      std::vector<int> e(ea.size());
      for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return SeriesElem::from_poly(ring, out);
}

IntPoly long_division_remainder(const IntPoly& x, const IntPoly& E, int u_index) {
  const int e = E.degree_in(u_index);
  IntPoly rem = x;
  while (rem.degree_in(u_index) >= e) {
    const int d = rem.degree_in(u_index);
    IntPoly lead(x.nvars());
    for (const auto& [exps, c] : rem.terms()) {
      if (exps[u_index] == d) {
        auto q = exps;
        q[u_index] = d - e;
        lead.add_term(q, c);
      }
    }
    rem = rem - lead * E;
  }
  return rem;
}

IntPoly to_poly(const SeriesElem& x) {
  const auto& ring = *x.ring();
  IntPoly out(ring.r() + 1);
  for (int j = 0; j < ring.ulen(); ++j) {
    for (int t = 0; t < ring.tcount(); ++t) {
      auto exps = ring.tmono(t);
      exps.push_back(j);
      out.add_term(exps, mpz_class(static_cast<unsigned long>(x.coeff(t, j))));
    }
  }
  return out;
}

}  // namespace oracle

namespace oracle {

std::vector<mpz_class> ghost_int(const std::vector<mpz_class>& x, unsigned long p) {
  std::vector<mpz_class> w;
  for (size_t n = 0; n < x.size(); ++n) {
    mpz_class acc = 0;
    for (size_t i = 0; i <= n; ++i) {
      mpz_class pi, term;
      mpz_ui_pow_ui(pi.get_mpz_t(), p, i);
      unsigned long e = 1;
      for (size_t k = 0; k < n - i; ++k) e *= p;
      mpz_pow_ui(term.get_mpz_t(), x[i].get_mpz_t(), e);
      acc += pi * term;
    }
    w.push_back(acc);
  }
  return w;
}

std::vector<mpz_class> from_ghost_int(const std::vector<mpz_class>& w, unsigned long p) {
  std::vector<mpz_class> x;
  for (size_t n = 0; n < w.size(); ++n) {
    mpz_class acc = w[n];
    for (size_t i = 0; i < n; ++i) {
      mpz_class pi, term;
      mpz_ui_pow_ui(pi.get_mpz_t(), p, i);
      unsigned long e = 1;
      for (size_t k = 0; k < n - i; ++k) e *= p;
      mpz_pow_ui(term.get_mpz_t(), x[i].get_mpz_t(), e);
      acc -= pi * term;
    }
    mpz_class pn;
    mpz_ui_pow_ui(pn.get_mpz_t(), p, n);
    if (!mpz_divisible_p(acc.get_mpz_t(), pn.get_mpz_t())) throw std::runtime_error("ghost inverse not integral");
    x.push_back(acc / pn);
  }
  return x;
}

std::vector<mpz_class> ghost_lift_add(const std::vector<mpz_class>& x, const std::vector<mpz_class>& y,
                                      unsigned long p) {
  auto gx = ghost_int(x, p), gy = ghost_int(y, p);
  for (size_t i = 0; i < gx.size(); ++i) gx[i] += gy[i];
  return from_ghost_int(gx, p);
}

std::vector<mpz_class> ghost_lift_mul(const std::vector<mpz_class>& x, const std::vector<mpz_class>& y,
                                      unsigned long p) {
  auto gx = ghost_int(x, p), gy = ghost_int(y, p);
  for (size_t i = 0; i < gx.size(); ++i) gx[i] *= gy[i];
  return from_ghost_int(gx, p);
}

FrameParams random_frame(std::mt19937_64& rng, const std::vector<unsigned>& ps, int emax, int rmax, int a, int N,
                         int D, int L) {
  FrameParams f;
  f.p = ps[rng() % ps.size()];
  f.e = 1 + static_cast<int>(rng() % emax);
  f.r = static_cast<int>(rng() % (rmax + 1));
  f.a = a;
  f.N = N;
  f.D = D;
  f.L = L;
  const int nv = f.r + 1;
  IntPoly E(nv);
  std::vector<int> lead(nv, 0);
  lead[f.r] = f.e;
  E.add_term(lead, 1);
  const long p = static_cast<long>(f.p);
  for (int i = 0; i < f.e; ++i) {
    std::vector<int> ex(nv, 0);
    ex[f.r] = i;
    long c = static_cast<long>(rng() % (2 * p)) - p;
    if (i == 0) {
      c = 1 + static_cast<long>(rng() % (p - 1));
      if (rng() % 2) c = -c;
    }
    E.add_term(ex, mpz_class(p * c));
    if (f.r > 0 && rng() % 2) {
      ex[0] = 1;
      E.add_term(ex, mpz_class(p * (static_cast<long>(rng() % 5) - 2)));
    }
  }
  f.E = E;
  return f;
}

bool congruent(const SeriesElem& x, const SeriesElem& y, int k) {
  if (x.coeffs().size() != y.coeffs().size()) return false;
  const breuil::u64 m = breuil::ipow(x.ring()->p(), k);
  for (size_t i = 0; i < x.coeffs().size(); ++i) {
    if (x.coeffs()[i] % m != y.coeffs()[i] % m) return false;
  }
  return true;
}

}  // namespace oracle

namespace oracle {

using breuil::u64;

SMatrix random_matrix(std::mt19937_64& rng, const RingPtr& ring, int rows, int cols) {
  SMatrix M(rows, cols, SeriesElem::zero(ring));
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) M(i, j) = random_elem(rng, ring);
  }
  return M;
}

Window random_window(std::mt19937_64& rng, const Frame& frame, int level, int d, int c) {
  auto ring = frame.series(level);
  while (true) {
    SMatrix A = random_matrix(rng, ring, d + c, d + c);
    if (A.det().is_unit()) return breuil::make_window(frame, level, d, c, A);
  }
}

SMatrix random_window_iso(std::mt19937_64& rng, const Frame& frame, const RingPtr& ring, int d, int c) {
  SeriesElem E = SeriesElem::from_poly(ring, frame.params().E);
  while (true) {
    SMatrix U = random_matrix(rng, ring, d + c, d + c);
    for (int i = d; i < d + c; ++i) {
      for (int j = 0; j < d; ++j) U(i, j) = E * U(i, j);
    }
    if (U.det().is_unit()) return U;
  }
}

std::vector<std::vector<IntPoly>> random_int_window(std::mt19937_64& rng, const Frame& frame, int h, int d) {
  const int nv = frame.r() + 1;
  const long p = static_cast<long>(frame.p());
  auto ring = frame.series(1);
  while (true) {
    std::vector<std::vector<IntPoly>> A(h, std::vector<IntPoly>(h, IntPoly(nv)));
    for (auto& row : A) {
      for (auto& x : row) {
        for (int k = 0; k < 4; ++k) {
          std::vector<int> ex(nv, 0);
          ex[nv - 1] = static_cast<int>(rng() % 3);
          if (nv > 1) ex[0] = static_cast<int>(rng() % 2);
          x.add_term(ex, mpz_class(static_cast<long>(rng() % (2 * p + 1)) - p));
        }
      }
    }
    if (to_matrix(ring, A).det().is_unit()) return A;
  }
  (void)d;
}

SMatrix to_matrix(const RingPtr& ring, const std::vector<std::vector<IntPoly>>& A) {
  SMatrix M(static_cast<int>(A.size()), static_cast<int>(A[0].size()), SeriesElem::zero(ring));
  for (size_t i = 0; i < A.size(); ++i) {
    for (size_t j = 0; j < A[i].size(); ++j) M(i, j) = SeriesElem::from_poly(ring, A[i][j]);
  }
  return M;
}

namespace {

constexpr u64 kQ = 2305843009213693951ull;  // 2^61 - 1

// Dense element of Q-linear 𝔖_{level} with coefficients mod kQ, laid out as
// the library ring (u-power major, t-monomial minor).
using Dense = std::vector<u64>;

Dense dense_of(const breuil::Ring& ring, const IntPoly& x) {
  Dense out(ring.size(), 0);
  const int T = ring.tcount();
  for (const auto& [exps, c] : x.terms()) {
    const int j = exps.back();
    if (j >= ring.ulen()) continue;
    std::vector<int> texp(exps.begin(), exps.end() - 1);
    const int ti = ring.tindex(texp);
    if (ti < 0) continue;
    out[j * T + ti] = breuil::add_mod(out[j * T + ti], breuil::residue(c, kQ), kQ);
  }
  return out;
}

Dense dense_mul(const breuil::Ring& ring, const Dense& x, const Dense& y) {
  const int T = ring.tcount(), U = ring.ulen();
  Dense out(ring.size(), 0);
  for (int i = 0; i < U; ++i) {
    for (int a = 0; a < T; ++a) {
      const u64 xa = x[i * T + a];
      if (!xa) continue;
      for (int j = 0; i + j < U; ++j) {
        for (int b = 0; b < T; ++b) {
          const u64 yb = y[j * T + b];
          if (!yb) continue;
          const int k = ring.tmul(a, b);
          if (k < 0) continue;
          u64& slot = out[(i + j) * T + k];
          slot = breuil::add_mod(slot, breuil::mul_mod(xa, yb, kQ), kQ);
        }
      }
    }
  }
  return out;
}

int rank_mod_q(std::vector<Dense> rows) {
  int rank = 0;
  const int ncols = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  for (int col = 0; col < ncols && rank < static_cast<int>(rows.size()); ++col) {
    int piv = -1;
    for (int r = rank; r < static_cast<int>(rows.size()); ++r) {
      if (rows[r][col]) {
        piv = r;
        break;
      }
    }
    if (piv < 0) continue;
    std::swap(rows[piv], rows[rank]);
    const u64 inv = breuil::inv_mod(rows[rank][col], kQ);
    for (auto& v : rows[rank]) v = breuil::mul_mod(v, inv, kQ);
    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
      if (r == rank || !rows[r][col]) continue;
      const u64 f = rows[r][col];
      for (int k = 0; k < ncols; ++k) rows[r][k] = breuil::sub_mod(rows[r][k], breuil::mul_mod(f, rows[rank][k], kQ), kQ);
    }
    ++rank;
  }
  return rank;
}

}  // namespace

int rigidity_kernel_dim(const Frame& frame, int level, int a, const std::vector<std::vector<IntPoly>>& A1, int d1,
                        const std::vector<std::vector<IntPoly>>& A2, int d2) {
  auto ring_ptr = frame.series(level);
  const breuil::Ring& ring = *ring_ptr;
  const int T = ring.tcount(), h1 = static_cast<int>(A1.size()), h2 = static_cast<int>(A2.size());
  const int e = frame.e();
  const Dense E = dense_of(ring, frame.params().E);
  Dense one(ring.size(), 0);
  one[0] = 1;
  // M1 = A1·C1 and M2 = A2·C2 as dense matrices.
  auto phi = [&](const std::vector<std::vector<IntPoly>>& A, int d) {
    const int h = static_cast<int>(A.size());
    std::vector<std::vector<Dense>> M(h, std::vector<Dense>(h));
    for (int i = 0; i < h; ++i) {
      for (int j = 0; j < h; ++j) {
        Dense x = dense_of(ring, A[i][j]);
        M[i][j] = j < d ? dense_mul(ring, x, E) : x;
      }
    }
    return M;
  };
  auto M1 = phi(A1, d1), M2 = phi(A2, d2);
  // One column of the linear map per basis element U = E_{ij}·t^α·u^m, m >= a·e.
  std::vector<Dense> images;
  for (int i = 0; i < h2; ++i) {
    for (int j = 0; j < h1; ++j) {
      for (int m = a * e; m < ring.ulen(); ++m) {
        for (int t = 0; t < T; ++t) {
          Dense mono(ring.size(), 0);
          mono[m * T + t] = 1;
          Dense smono(ring.size(), 0);
          const int ft = ring.tfrob(t);
          const int fm = m * static_cast<int>(frame.p());
          if (ft >= 0 && fm < ring.ulen()) smono[fm * T + ft] = 1;
          // (M2·U)_{rs} = M2_{ri}·mono if s == j; (σ(U)·M1)_{rs} = smono·M1_{js} if r == i.
          Dense image;
          for (int r = 0; r < h2; ++r) {
            for (int s = 0; s < h1; ++s) {
              Dense v(ring.size(), 0);
              if (s == j) v = dense_mul(ring, M2[r][i], mono);
              if (r == i) {
                Dense w = dense_mul(ring, smono, M1[j][s]);
                for (size_t k = 0; k < v.size(); ++k) v[k] = breuil::sub_mod(v[k], w[k], kQ);
              }
              image.insert(image.end(), v.begin(), v.end());
            }
          }
          images.push_back(std::move(image));
        }
      }
    }
  }
  return static_cast<int>(images.size()) - rank_mod_q(images);
}

}  // namespace oracle

namespace oracle {

Isogeny random_isogeny(std::mt19937_64& rng, const Frame& frame, int level, int d, int c, int kmax) {
  const int h = d + c;
  auto ring = frame.series(level);
  const SeriesElem one = SeriesElem::one(ring);
  std::vector<int> k(h);
  int total = frame.N();
  while (total >= frame.N()) {
    for (auto& x : k) x = static_cast<int>(rng() % (kmax + 1));
    std::sort(k.rbegin(), k.rend());
    total = 0;
    for (int x : k) total += x;
  }
  auto pp = [&](int e) {
    SeriesElem out = one;
    for (int i = 0; i < e; ++i) out = out * SeriesElem::constant(ring, static_cast<long long>(frame.p()));
    return out;
  };
  SMatrix V = SMatrix::identity(h, one);
  for (int i = 0; i < h; ++i) {
    for (int j = i + 1; j < h; ++j) V(i, j) = random_elem(rng, ring);
  }
  // X_ij = p^{k_j - k_i}·Y_ij below the diagonal; target entries are then
  // Y_ij there and p^{k_i - k_j}·X_ij elsewhere.
  while (true) {
    SMatrix Y = random_matrix(rng, ring, h, h);
    SMatrix X = Y, A = Y;
    for (int i = 0; i < h; ++i) {
      for (int j = 0; j < h; ++j) {
        if (i > j) X(i, j) = pp(k[j] - k[i]) * Y(i, j);
        else A(i, j) = pp(k[i] - k[j]) * Y(i, j);
      }
    }
    if (!X.det().is_unit()) continue;
    SMatrix Delta = SMatrix::identity(h, one);
    for (int i = 0; i < h; ++i) Delta(i, i) = pp(k[i]);
    Window wx = breuil::make_window(frame, level, d, c, X);
    Window source = breuil::transport_window(wx, V.inverse());
    Window target = breuil::make_window(frame, level, d, c, A);
    return Isogeny{source, target, Delta * V, total};
  }
}

}  // namespace oracle
