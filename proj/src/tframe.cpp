#include "breuil/tframe.hpp"

#include <algorithm>
#include <sstream>

namespace breuil {

namespace {

u64 pow_mod(u64 b, int k, u64 m) {
  u64 r = 1 % m;
  for (int i = 0; i < k; ++i) r = mul_mod(r, b, m);
  return r;
}

int vp_factorial(long n, u64 p) {
  int v = 0;
  for (long q = n / static_cast<long>(p); q > 0; q /= static_cast<long>(p)) v += static_cast<int>(q);
  return v;
}

}  // namespace

TRingPtr t_ring(const Frame& frame, int a) {
  if (a < 1) throw Error("t_ring: v-truncation must be >= 1");
  RingPtr base = frame.series(1);
  const u64 modulus = base->modulus();
  return std::make_shared<const TRing>(TRing{frame, a, std::move(base), modulus});
}

TElem::TElem(TRingPtr ring, std::vector<u64> coeffs) : ring_(std::move(ring)), c_(std::move(coeffs)) {
  if (static_cast<int>(c_.size()) != ring_->size()) throw Error("TElem: coefficient table has the wrong size");
}

TElem TElem::zero(const TRingPtr& ring) { return TElem(ring, std::vector<u64>(ring->size(), 0)); }

TElem TElem::one(const TRingPtr& ring) { return constant(ring, 1); }

TElem TElem::constant(const TRingPtr& ring, long long c) {
  TElem x = zero(ring);
  x.c_[0] = residue(c, ring->modulus);
  return x;
}

TElem TElem::v(const TRingPtr& ring) {
  TElem x = zero(ring);
  if (ring->a > 1) x.c_[ring->index(1, 0, 0)] = 1 % ring->modulus;
  return x;
}

TElem TElem::u(const TRingPtr& ring) {
  if (ring->e() > 1) {
    TElem x = zero(ring);
    x.c_[ring->index(0, 1, 0)] = 1 % ring->modulus;
    return x;
  }
  return constant(ring, static_cast<long long>(ring->frame.p())) * v(ring);
}

void TElem::check_ring(const TElem& o, const char* where) const {
  if (ring_ != o.ring_ && !ring_->same_as(*o.ring_)) throw RingMismatch(std::string(where) + ": different T-rings");
}

bool TElem::is_zero() const noexcept {
  return std::all_of(c_.begin(), c_.end(), [](u64 x) { return x == 0; });
}

bool TElem::is_unit() const { return c_[0] % ring_->frame.p() != 0; }

SeriesElem TElem::v_coefficient(int i) const {
  const int n = ring_->e() * ring_->tcount();
  return SeriesElem(ring_->base, std::vector<u64>(c_.begin() + i * n, c_.begin() + (i + 1) * n));
}

TElem TElem::operator+(const TElem& o) const {
  check_ring(o, "t_add");
  TElem out = *this;
  for (size_t k = 0; k < c_.size(); ++k) out.c_[k] = add_mod(c_[k], o.c_[k], ring_->modulus);
  return out;
}

TElem TElem::operator-(const TElem& o) const {
  check_ring(o, "t_sub");
  TElem out = *this;
  for (size_t k = 0; k < c_.size(); ++k) out.c_[k] = sub_mod(c_[k], o.c_[k], ring_->modulus);
  return out;
}

TElem TElem::operator-() const { return zero(ring_) - *this; }

TElem TElem::operator*(const TElem& o) const {
  check_ring(o, "t_mul");
  const TRing& R = *ring_;
  const int a = R.a, e = R.e(), T = R.tcount();
  const u64 m = R.modulus, p = R.frame.p();
  TElem out = zero(ring_);
  for (int i1 = 0; i1 < a; ++i1) {
    for (int j1 = 0; j1 < e; ++j1) {
      for (int t1 = 0; t1 < T; ++t1) {
        const u64 x = c_[R.index(i1, j1, t1)];
        if (!x) continue;
        for (int i2 = 0; i1 + i2 < a; ++i2) {
          for (int j2 = 0; j2 < e; ++j2) {
            int i = i1 + i2, j = j1 + j2;
            u64 f = x;
            if (j >= e) {
              // u^e = p·v
              j -= e;
              ++i;
              f = mul_mod(f, p, m);
              if (i >= a) continue;
            }
            for (int t2 = 0; t2 < T; ++t2) {
              const u64 y = o.c_[R.index(i2, j2, t2)];
              if (!y) continue;
              const int t = R.base->tmul(t1, t2);
              if (t < 0) continue;
              u64& slot = out.c_[R.index(i, j, t)];
              slot = add_mod(slot, mul_mod(f, y, m), m);
            }
          }
        }
      }
    }
  }
  return out;
}

bool TElem::operator==(const TElem& o) const {
  check_ring(o, "t_eq");
  return c_ == o.c_;
}

bool is_unit(const TElem& x) { return x.is_unit(); }

TElem inverse(const TElem& x) {
  if (!x.is_unit()) throw ArithmeticError("inverse: not a unit in T_a");
  const TRingPtr& ring = x.ring();
  std::vector<u64> seed(ring->size(), 0);
  seed[0] = inv_mod(x.coeffs()[0], ring->modulus);
  TElem y(ring, std::move(seed));
  const TElem two = TElem::constant(ring, 2), one = TElem::one(ring);
  // The maximal ideal is nilpotent, so Newton's iteration terminates.
  for (int it = 0; it < 64; ++it) {
    if (x * y == one) return y;
    y = y * (two - x * y);
  }
  throw ArithmeticError("inverse: Newton iteration did not converge");
}

TElem t_sigma(const TElem& x) {
  const TRing& R = *x.ring();
  const int a = R.a, e = R.e(), T = R.tcount(), N = R.frame.N();
  const u64 m = R.modulus, p = R.frame.p();
  std::vector<u64> c(R.size(), 0);
  for (int i = 0; i < a; ++i) {
    for (int j = 0; j < e; ++j) {
      const int pj = static_cast<int>(p) * j, q = pj / e, r = pj % e;
      const int iv = i * static_cast<int>(p) + q;
      const int pw = (static_cast<int>(p) - 1) * i + q;
      if (iv >= a || pw >= N) continue;
      const u64 scale = pow_mod(p, pw, m);
      for (int t = 0; t < T; ++t) {
        const u64 val = x.coeff(i, j, t);
        if (!val) continue;
        const int ft = R.base->tfrob(t);
        if (ft < 0) continue;
        u64& slot = c[R.index(iv, r, ft)];
        slot = add_mod(slot, mul_mod(val, scale, m), m);
      }
    }
  }
  return TElem(x.ring(), std::move(c));
}

TElem t_embed(const TRingPtr& ring, const SeriesElem& x) {
  const Ring& src = *x.ring();
  if (src.kind() != RingKind::kSeries || src.frame_params() != ring->frame.shared_params())
    throw RingMismatch("t_embed: element is not in a series ring of this frame");
  if (src.prec() < ring->frame.N()) throw PrecisionError("t_embed: input precision below N");
  const int e = ring->e(), T = ring->tcount(), N = ring->frame.N();
  const u64 m = ring->modulus, p = ring->frame.p();
  std::vector<u64> c(ring->size(), 0);
  for (int k = 0; k < src.ulen(); ++k) {
    const int q = k / e, r = k % e;
    if (q >= ring->a || q >= N) break;
    const u64 scale = pow_mod(p, q, m);
    for (int t = 0; t < T; ++t) {
      const u64 val = x.coeff(t, k) % m;
      if (val) c[ring->index(q, r, t)] = mul_mod(val, scale, m);
    }
  }
  return TElem(ring, std::move(c));
}

bool in_series_image(const TElem& x) {
  const TRing& R = *x.ring();
  const u64 p = R.frame.p();
  const int N = R.frame.N();
  for (int i = 1; i < R.a; ++i) {
    const u64 pi = i >= N ? 0 : pow_mod(p, i, ~0ull);
    for (int j = 0; j < R.e(); ++j) {
      for (int t = 0; t < R.tcount(); ++t) {
        const u64 val = x.coeff(i, j, t);
        if (val && (pi == 0 || val % pi != 0)) return false;
      }
    }
  }
  return true;
}

std::string to_string(const TElem& x) {
  const TRing& R = *x.ring();
  struct Term {
    int vdeg;
    std::vector<int> exps;  // t1..tr, u
    long long c;
  };
  std::vector<Term> terms;
  for (int i = 0; i < R.a; ++i) {
    for (int j = 0; j < R.e(); ++j) {
      for (int t = 0; t < R.tcount(); ++t) {
        const u64 val = x.coeff(i, j, t);
        if (!val) continue;
        std::vector<int> exps = R.base->tmono(t);
        exps.push_back(j);
        terms.push_back({i, exps, balanced(val, R.modulus)});
      }
    }
  }
  if (terms.empty()) return "0";
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
    if (a.vdeg != b.vdeg) return a.vdeg < b.vdeg;
    int da = 0, db = 0;
    for (int k : a.exps) da += k;
    for (int k : b.exps) db += k;
    if (da != db) return da < db;
    return a.exps > b.exps;
  });
  std::ostringstream os;
  bool first = true;
  for (const auto& term : terms) {
    if (first) {
      if (term.c < 0) os << "-";
    } else {
      os << (term.c < 0 ? " - " : " + ");
    }
    const long long ac = term.c < 0 ? -term.c : term.c;
    std::vector<std::string> factors;
    for (size_t k = 0; k < term.exps.size(); ++k) {
      const int deg = term.exps[k];
      if (!deg) continue;
      std::string name = k + 1 == term.exps.size() ? "u" : "t" + std::to_string(k + 1);
      factors.push_back(deg > 1 ? name + "^" + std::to_string(deg) : name);
    }
    if (term.vdeg) factors.push_back(term.vdeg > 1 ? "v^" + std::to_string(term.vdeg) : "v");
    std::string mono;
    for (size_t k = 0; k < factors.size(); ++k) mono += (k ? "*" : "") + factors[k];
    if (mono.empty()) {
      os << ac;
    } else if (ac == 1) {
      os << mono;
    } else {
      os << ac << "*" << mono;
    }
    first = false;
  }
  return os.str();
}

TMatrix t_embed(const TRingPtr& ring, const SMatrix& M) {
  return M.map([&](const SeriesElem& x) { return t_embed(ring, x); });
}

TMatrix t_sigma(const TMatrix& M) {
  return M.map([](const TElem& x) { return t_sigma(x); });
}

std::string to_string(const TMatrix& M) {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < M.rows(); ++i) {
    if (i) os << ", ";
    os << "[";
    for (int j = 0; j < M.cols(); ++j) os << (j ? ", " : "") << to_string(M(i, j));
    os << "]";
  }
  os << "]";
  return os.str();
}

TWindow base_change_T(const Window& w) {
  auto ring = t_ring(w.frame, w.level);
  return TWindow{w.d, w.c, t_embed(ring, w.A)};
}

IsoSolution solve_iso(const Frame& frame, int a, int d, int c, const SMatrix& A1, const SMatrix& A2,
                      const std::optional<TMatrix>& Y0) {
  const int h = d + c;
  if (d < 0 || c < 0 || h < 1) throw Error("solve_iso: need d, c >= 0 and d + c >= 1");
  if (A1.rows() != h || A1.cols() != h || A2.rows() != h || A2.cols() != h)
    throw Error("solve_iso: A1 and A2 must be square of size d + c");
  if (a + 1 > frame.max_level()) throw PrecisionError("solve_iso: level a + 1 exceeds the frame's level cap");
  const RingPtr S = frame.series(a + 1);
  for (const auto* M : {&A1, &A2}) {
    for (const auto& x : M->entries()) require_same_ring(*S, *x.ring(), "solve_iso");
  }

  // (A_2^{-1}A_1 - I) must vanish mod u^e; Z is its quotient by u^e.
  const SeriesElem one = SeriesElem::one(S);
  SMatrix M = A2.inverse() * A1 - SMatrix::identity(h, one);
  const int T = S->tcount(), e = frame.e();
  const RingPtr Sa = frame.series(a);
  SMatrix Zs(h, h, SeriesElem::zero(Sa));
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < h; ++j) {
      const auto& cf = M(i, j).coeffs();
      for (int k = 0; k < e * T; ++k) {
        if (cf[k]) throw ArithmeticError("solve_iso: A2^{-1}A1 is not congruent to I modulo u^e");
      }
      Zs(i, j) = SeriesElem(Sa, std::vector<u64>(cf.begin() + e * T, cf.end()));
    }
  }

  const TRingPtr R = t_ring(frame, a);
  const TElem tone = TElem::one(R);
  const TElem v = TElem::v(R);
  const TElem eps = t_embed(R, frame.epsilon(a));
  const TElem E = t_embed(R, frame.E(a));
  const TMatrix TA1 = t_embed(R, A1), TA2inv = t_embed(R, A2.inverse()), TA2 = t_embed(R, A2);
  const TMatrix C = diag2(d, E, c, tone);
  const TMatrix pCinv = diag2(d, inverse(v + eps), c, TElem::constant(R, static_cast<long long>(frame.p())));
  const TMatrix Z = t_embed(R, Zs);
  const TMatrix D = pCinv * Z * C;

  TElem scale = v;
  const TElem u = TElem::u(R);
  for (int k = 0; k < e * (static_cast<int>(frame.p()) - 2); ++k) scale = scale * u;
  const TMatrix left = (pCinv * TA2inv).scaled(scale);
  const TMatrix right = TA1 * C;
  auto Psi = [&](const TMatrix& Y) { return left * t_sigma(Y) * right; };

  TMatrix Y = D;
  if (Y0) {
    Y = *Y0;
    for (int n = 0; n < a; ++n) Y = D + Psi(Y);
  } else {
    TMatrix term = D;
    for (int n = 1; n < a; ++n) {
      term = Psi(term);
      Y = Y + term;
    }
  }
  TMatrix X = TMatrix::identity(h, tone) + Y.scaled(v);
  TMatrix residual = TA2 * C * X - t_sigma(X) * TA1 * C;
  const bool zero = residual.is_zero();
  return IsoSolution{std::move(X), Z, D, std::move(residual), zero};
}

int nu(int a, u64 p) {
  if (a < 1) throw Error("nu: a must be >= 1");
  const long hi = std::max<long>(a, static_cast<long>(p - 1) * (a + 2));
  int best = a;
  for (long n = a; n <= hi; ++n) best = std::min(best, static_cast<int>(n - vp_factorial(n, p)));
  return best;
}

}  // namespace breuil
