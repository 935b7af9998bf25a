#include "breuil/series.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace breuil {

namespace {

constexpr int kMaxULen = 512;

// Largest k with p^k < 2^62, the coefficient range the arithmetic supports.
int max_precision(u64 p) {
  int k = 0;
  u128 v = 1;
  while (v * p < (static_cast<u128>(1) << 62)) {
    v *= p;
    ++k;
  }
  return k;
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// Graded order on t-exponent vectors: degree ascending, then lexicographic
// descending (t1 before t2).
bool graded_less(const std::vector<int>& a, const std::vector<int>& b) {
  int da = 0, db = 0;
  for (int x : a) da += x;
  for (int x : b) db += x;
  if (da != db) return da < db;
  return a > b;
}

void enumerate_tmonos(int r, int D, std::vector<int>& cur, int pos, int left,
                      std::vector<std::vector<int>>& out) {
  if (pos == r) {
    out.push_back(cur);
    return;
  }
  for (int k = 0; k <= left; ++k) {
    cur[pos] = k;
    enumerate_tmonos(r, D, cur, pos + 1, left - k, out);
  }
  cur[pos] = 0;
}

// dst += a * b for t-polynomials (length tcount), modulo ring modulus.
void tpoly_mul_acc(const Ring& ring, std::vector<u64>& dst, size_t dst_off, const u64* a, const u64* b) {
  const int T = ring.tcount();
  const u64 m = ring.modulus();
  for (int i = 0; i < T; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < T; ++j) {
      if (b[j] == 0) continue;
      int k = ring.tmul(i, j);
      if (k < 0) continue;
      dst[dst_off + k] = add_mod(dst[dst_off + k], mul_mod(a[i], b[j], m), m);
    }
  }
}

// Plain product of two coefficient tables into a buffer of `out_ulen`
// u-powers (no reduction by E, no truncation beyond out_ulen).
std::vector<u64> raw_product(const Ring& ring, const std::vector<u64>& x, int xu, const std::vector<u64>& y,
                             int yu, int out_ulen) {
  const int T = ring.tcount();
  const u64 m = ring.modulus();
  std::vector<u64> out(static_cast<size_t>(out_ulen) * T, 0);
  const bool small = m < (static_cast<u64>(1) << 32);
  if (small) {
    // Products are < 2^64, so a 128-bit accumulator never overflows here.
    std::vector<u128> acc(out.size(), 0);
    for (int i = 0; i < xu; ++i) {
      for (int ti = 0; ti < T; ++ti) {
        u64 a = x[i * T + ti];
        if (a == 0) continue;
        for (int j = 0; j < yu && i + j < out_ulen; ++j) {
          const u64* yb = &y[j * T];
          u128* ab = &acc[(i + j) * T];
          for (int tj = 0; tj < T; ++tj) {
            u64 b = yb[tj];
            if (b == 0) continue;
            int k = ring.tmul(ti, tj);
            if (k < 0) continue;
            ab[k] += static_cast<u128>(a * b);
          }
        }
      }
    }
    for (size_t k = 0; k < out.size(); ++k) out[k] = static_cast<u64>(acc[k] % m);
    return out;
  }
  for (int i = 0; i < xu; ++i) {
    for (int j = 0; j < yu && i + j < out_ulen; ++j) {
      tpoly_mul_acc(ring, out, static_cast<size_t>(i + j) * T, &x[i * T], &y[j * T]);
    }
  }
  return out;
}

// In-place reduction of a table with `ulen` u-powers modulo the u-monic E,
// leaving u-degree < e.
void reduce_by_E_inplace(const Ring& ring, std::vector<u64>& c, int ulen) {
  const int T = ring.tcount();
  const int e = ring.e();
  const u64 m = ring.modulus();
  const auto& elow = ring.e_low();
  for (int j = ulen - 1; j >= e; --j) {
    const u64* cj = &c[j * T];
    bool any = false;
    for (int t = 0; t < T; ++t) any |= cj[t] != 0;
    if (!any) continue;
    std::vector<u64> lead(cj, cj + T);
    // u^j = u^{j-e} u^e = -u^{j-e} (a_{e-1}u^{e-1} + ... + a_0)
    std::vector<u64> neg_lead(T);
    for (int t = 0; t < T; ++t) neg_lead[t] = neg_mod(lead[t], m);
    for (int k = 0; k < e; ++k) {
      tpoly_mul_acc(ring, c, static_cast<size_t>(j - e + k) * T, neg_lead.data(), elow[k].data());
    }
    std::fill(c.begin() + j * T, c.begin() + (j + 1) * T, 0);
  }
}

IntPoly epsilon_poly(const FrameParams& f) {
  IntPoly eps(f.r + 1);
  for (const auto& [exps, c] : f.E.terms()) {
    if (exps[f.r] >= f.e) continue;
    if (c % static_cast<unsigned long>(f.p) != 0) throw ArithmeticError("epsilon: E - u^e is not divisible by p");
    eps.add_term(exps, c / static_cast<unsigned long>(f.p));
  }
  return eps;
}

}  // namespace

std::vector<std::string> FrameParams::variable_names() const {
  std::vector<std::string> names;
  for (int i = 1; i <= r; ++i) names.push_back("t" + std::to_string(i));
  names.push_back("u");
  return names;
}

FrameReport validate_frame(const FrameParams& f) {
  FrameReport rep;
  auto bad = [&](std::string s) { rep.violations.push_back(std::move(s)); };
  if (f.p < 3 || !is_prime(f.p)) bad("p must be an odd prime");
  if (f.r < 0) bad("r must be >= 0");
  if (f.e < 1) bad("e must be >= 1");
  if (f.a < 1) bad("a must be >= 1");
  if (f.N < 1) bad("N must be >= 1");
  if (f.L < 1) bad("L must be >= 1");
  if (f.D < 0) bad("D must be >= 0");
  const int max_level = f.max_level > 0 ? f.max_level : static_cast<int>(f.p) * f.a;
  if (max_level < f.a) bad("max_level must be >= a");
  if (f.e >= 1 && static_cast<long long>(max_level) * f.e > kMaxULen)
    bad("a*e exceeds the u-cap " + std::to_string(kMaxULen));
  if (f.p >= 3 && f.N + f.L + 1 > max_precision(f.p))
    bad("precision N + L exceeds the supported coefficient range");
  if (!rep.ok()) return rep;

  if (f.E.nvars() != f.r + 1) {
    bad("E must be a polynomial in t1..tr, u");
    return rep;
  }
  const int u = f.r;
  if (f.E.degree_in(u) != f.e) bad("E must have u-degree e = " + std::to_string(f.e));
  std::vector<int> lead(f.r + 1, 0);
  lead[u] = f.e;
  bool monic = f.E.coeff(lead) == 1;
  for (const auto& [exps, c] : f.E.terms()) {
    if (exps[u] >= f.e && exps != lead) monic = false;
  }
  if (!monic) bad("E must be monic in u");
  bool divisible = true;
  for (const auto& [exps, c] : f.E.terms()) {
    if (exps[u] < f.e && c % static_cast<unsigned long>(f.p) != 0) {
      bad("a" + std::to_string(exps[u]) + " not divisible by p");
      divisible = false;
      break;
    }
  }
  if (divisible) {
    std::vector<int> zero(f.r + 1, 0);
    mpz_class a0 = f.E.coeff(zero);
    mpz_class q = a0 / static_cast<unsigned long>(f.p);
    if (q % static_cast<unsigned long>(f.p) == 0) bad("a0/p is not a unit");
  }
  return rep;
}

RingPtr Ring::scalar(u64 p, int prec) {
  auto ring = std::shared_ptr<Ring>(new Ring());
  ring->kind_ = RingKind::kScalar;
  ring->p_ = p;
  ring->prec_ = prec;
  ring->mod_ = ipow(p, prec);
  ring->tmonos_ = {{}};
  ring->tdeg_ = {0};
  ring->tmul_ = {0};
  ring->tfrob_ = {0};
  return ring;
}

RingPtr Ring::build(std::shared_ptr<const FrameParams> frame, RingKind kind, int level, int prec) {
  auto ring = std::shared_ptr<Ring>(new Ring());
  const FrameParams& f = *frame;
  ring->frame_ = frame;
  ring->kind_ = kind;
  ring->p_ = f.p;
  ring->prec_ = prec;
  ring->mod_ = ipow(f.p, prec);
  ring->r_ = f.r;
  ring->D_ = f.D;
  ring->e_ = f.e;
  ring->level_ = level;
  ring->ulen_ = kind == RingKind::kSeries ? level * f.e : f.e;

  std::vector<int> cur(f.r, 0);
  enumerate_tmonos(f.r, f.D, cur, 0, f.D, ring->tmonos_);
  std::sort(ring->tmonos_.begin(), ring->tmonos_.end(), graded_less);
  const int T = ring->tcount();
  std::map<std::vector<int>, int> index;
  for (int i = 0; i < T; ++i) {
    index[ring->tmonos_[i]] = i;
    int d = 0;
    for (int x : ring->tmonos_[i]) d += x;
    ring->tdeg_.push_back(d);
  }
  ring->tmul_.assign(static_cast<size_t>(T) * T, -1);
  ring->tfrob_.assign(T, -1);
  for (int i = 0; i < T; ++i) {
    for (int j = 0; j < T; ++j) {
      if (ring->tdeg_[i] + ring->tdeg_[j] > f.D) continue;
      std::vector<int> s(f.r);
      for (int k = 0; k < f.r; ++k) s[k] = ring->tmonos_[i][k] + ring->tmonos_[j][k];
      ring->tmul_[i * T + j] = index.at(s);
    }
    if (ring->tdeg_[i] * static_cast<long long>(f.p) <= f.D) {
      std::vector<int> s(f.r);
      for (int k = 0; k < f.r; ++k) s[k] = ring->tmonos_[i][k] * static_cast<int>(f.p);
      ring->tfrob_[i] = index.at(s);
    }
  }
  ring->e_low_.assign(f.e, std::vector<u64>(T, 0));
  for (const auto& [exps, c] : f.E.terms()) {
    int uexp = exps[f.r];
    if (uexp >= f.e) continue;
    std::vector<int> texp(exps.begin(), exps.begin() + f.r);
    int d = 0;
    for (int x : texp) d += x;
    if (d > f.D) continue;
    ring->e_low_[uexp][index.at(texp)] = residue(c, ring->mod_);
  }
  return ring;
}

int Ring::tindex(const std::vector<int>& exps) const {
  for (int i = 0; i < tcount(); ++i) {
    if (tmonos_[i] == exps) return i;
  }
  return -1;
}

RingPtr Ring::with_prec(int prec) const {
  if (kind_ == RingKind::kScalar) return scalar(p_, prec);
  return build(frame_, kind_, level_, prec);
}

bool Ring::same_as(const Ring& o) const noexcept {
  if (this == &o) return true;
  if (kind_ != o.kind_ || p_ != o.p_ || prec_ != o.prec_) return false;
  if (kind_ == RingKind::kScalar) return true;
  return frame_ == o.frame_ && level_ == o.level_;
}

std::string Ring::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case RingKind::kScalar:
      os << "Z/" << p_ << "^" << prec_;
      break;
    case RingKind::kSeries:
      os << "S_" << level_ << " mod " << p_ << "^" << prec_;
      break;
    case RingKind::kQuotient:
      os << "R/p^" << level_ << "R mod " << p_ << "^" << prec_;
      break;
  }
  return os.str();
}

void require_same_ring(const Ring& a, const Ring& b, const char* where) {
  if (!a.same_as(b)) {
    throw RingMismatch(std::string(where) + ": ring mismatch (" + a.describe() + " vs " + b.describe() + ")");
  }
}

// ---------------------------------------------------------------------------

SeriesElem::SeriesElem(RingPtr ring) : ring_(std::move(ring)), c_(ring_->size(), 0) {}

SeriesElem::SeriesElem(RingPtr ring, std::vector<u64> coeffs) : ring_(std::move(ring)), c_(std::move(coeffs)) {
  if (static_cast<int>(c_.size()) != ring_->size()) throw Error("SeriesElem: coefficient table size mismatch");
  for (auto& v : c_) v %= ring_->modulus();
}

SeriesElem SeriesElem::constant(const RingPtr& ring, long long c) {
  SeriesElem x(ring);
  x.c_[0] = residue(c, ring->modulus());
  return x;
}

SeriesElem SeriesElem::constant(const RingPtr& ring, const mpz_class& c) {
  SeriesElem x(ring);
  x.c_[0] = residue(c, ring->modulus());
  return x;
}

SeriesElem SeriesElem::monomial(const RingPtr& ring, const std::vector<int>& t_exps, int u_exp, long long c) {
  IntPoly poly(ring->r() + 1);
  std::vector<int> exps = t_exps;
  exps.resize(ring->r());
  exps.push_back(u_exp);
  poly.add_term(exps, mpz_class(static_cast<long>(c)));
  if (ring->kind() == RingKind::kScalar) {
    if (u_exp != 0) return zero(ring);
    for (int k : t_exps) {
      if (k != 0) return zero(ring);
    }
    return constant(ring, c);
  }
  return from_poly(ring, poly);
}

SeriesElem SeriesElem::from_poly(const RingPtr& ring, const IntPoly& poly) {
  if (ring->kind() == RingKind::kScalar) {
    SeriesElem x(ring);
    for (const auto& [exps, c] : poly.terms()) {
      bool constant_term = std::all_of(exps.begin(), exps.end(), [](int k) { return k == 0; });
      if (constant_term) x.c_[0] = residue(c, ring->modulus());
    }
    return x;
  }
  if (poly.nvars() != ring->r() + 1) throw Error("from_poly: polynomial has wrong number of variables");
  const int T = ring->tcount();
  const int r = ring->r();
  const bool quotient = ring->kind() == RingKind::kQuotient;
  int ulen = ring->ulen();
  if (quotient) {
    ulen = std::max(ring->e(), poly.degree_in(r) + 1);
  }
  std::vector<u64> c(static_cast<size_t>(ulen) * T, 0);
  for (const auto& [exps, coeff] : poly.terms()) {
    int uexp = exps[r];
    if (uexp >= ulen) continue;
    std::vector<int> texp(exps.begin(), exps.begin() + r);
    int ti = ring->tindex(texp);
    if (ti < 0) continue;
    size_t k = static_cast<size_t>(uexp) * T + ti;
    c[k] = add_mod(c[k], residue(coeff, ring->modulus()), ring->modulus());
  }
  if (quotient) {
    reduce_by_E_inplace(*ring, c, ulen);
    c.resize(static_cast<size_t>(ring->e()) * T);
  }
  return SeriesElem(ring, std::move(c));
}

bool SeriesElem::is_zero() const noexcept {
  return std::all_of(c_.begin(), c_.end(), [](u64 v) { return v == 0; });
}

bool SeriesElem::is_unit() const { return c_[0] % ring_->p() != 0; }

SeriesElem SeriesElem::operator+(const SeriesElem& o) const {
  SeriesElem out = *this;
  out += o;
  return out;
}

SeriesElem SeriesElem::operator-(const SeriesElem& o) const {
  SeriesElem out = *this;
  out -= o;
  return out;
}

SeriesElem& SeriesElem::operator+=(const SeriesElem& o) {
  require_same_ring(*ring_, *o.ring_, "add");
  const u64 m = ring_->modulus();
  for (size_t i = 0; i < c_.size(); ++i) c_[i] = add_mod(c_[i], o.c_[i], m);
  return *this;
}

SeriesElem& SeriesElem::operator-=(const SeriesElem& o) {
  require_same_ring(*ring_, *o.ring_, "sub");
  const u64 m = ring_->modulus();
  for (size_t i = 0; i < c_.size(); ++i) c_[i] = sub_mod(c_[i], o.c_[i], m);
  return *this;
}

SeriesElem SeriesElem::operator-() const {
  SeriesElem out = *this;
  const u64 m = ring_->modulus();
  for (auto& v : out.c_) v = neg_mod(v, m);
  return out;
}

SeriesElem SeriesElem::operator*(const SeriesElem& o) const {
  require_same_ring(*ring_, *o.ring_, "mul");
  const Ring& ring = *ring_;
  if (ring.kind() == RingKind::kQuotient) {
    const int e = ring.e();
    auto prod = raw_product(ring, c_, e, o.c_, e, 2 * e - 1);
    reduce_by_E_inplace(ring, prod, 2 * e - 1);
    prod.resize(static_cast<size_t>(e) * ring.tcount());
    return SeriesElem(ring_, std::move(prod));
  }
  return SeriesElem(ring_, raw_product(ring, c_, ring.ulen(), o.c_, ring.ulen(), ring.ulen()));
}

SeriesElem SeriesElem::scaled(long long k) const {
  SeriesElem out = *this;
  const u64 m = ring_->modulus();
  u64 kk = residue(k, m);
  for (auto& v : out.c_) v = mul_mod(v, kk, m);
  return out;
}

SeriesElem SeriesElem::pow(u64 k) const {
  SeriesElem result = one(ring_);
  SeriesElem base = *this;
  while (k > 0) {
    if (k & 1u) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

bool SeriesElem::operator==(const SeriesElem& o) const { return ring_->same_as(*o.ring_) && c_ == o.c_; }

int SeriesElem::p_valuation() const {
  int v = ring_->prec();
  for (u64 c : c_) v = std::min(v, valuation(c, ring_->p(), ring_->prec()));
  return v;
}

std::optional<SeriesElem> SeriesElem::divide_by_p_power(int k) const {
  const u64 pk = ipow(ring_->p(), k);
  SeriesElem out(ring_);
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] % pk != 0) return std::nullopt;
    out.c_[i] = c_[i] / pk;
  }
  return out;
}

SeriesElem SeriesElem::with_prec(int prec) const {
  if (prec == ring_->prec()) return *this;
  RingPtr target = ring_->with_prec(prec);
  return SeriesElem(target, c_);
}

SeriesElem invert(const SeriesElem& x) {
  if (!x.is_unit()) throw ArithmeticError("invert: element is not a unit");
  const RingPtr& ring = x.ring();
  const u64 m = ring->modulus();
  SeriesElem y = SeriesElem::constant(ring, static_cast<long long>(inv_mod(x.constant_term(), m)));
  SeriesElem two = SeriesElem::constant(ring, 2);
  SeriesElem one = SeriesElem::one(ring);
  // Newton iteration y <- y(2 - xy); the error squares in the nilpotent
  // maximal ideal, so it terminates after logarithmically many steps.
  for (int iter = 0; iter < 64; ++iter) {
    SeriesElem xy = x * y;
    if (xy == one) return y;
    y = y * (two - xy);
  }
  throw ArithmeticError("invert: Newton iteration did not converge");
}

SeriesElem frobenius(const SeriesElem& x) {
  const RingPtr& ring = x.ring();
  if (ring->kind() == RingKind::kScalar) return x;
  if (ring->kind() != RingKind::kSeries) throw Error("frobenius: only defined on S_a");
  const int T = ring->tcount();
  const int p = static_cast<int>(ring->p());
  std::vector<u64> out(ring->size(), 0);
  for (int j = 0; j * p < ring->ulen(); ++j) {
    for (int t = 0; t < T; ++t) {
      u64 c = x.coeff(t, j);
      if (c == 0) continue;
      int ft = ring->tfrob(t);
      if (ft < 0) continue;
      out[static_cast<size_t>(j * p) * T + ft] = c;
    }
  }
  return SeriesElem(ring, std::move(out));
}

SeriesElem reduce_mod_E(const SeriesElem& x) {
  const RingPtr& ring = x.ring();
  if (ring->kind() != RingKind::kSeries) throw Error("reduce_mod_E: expects an element of S_a");
  std::vector<u64> c = x.coeffs();
  reduce_by_E_inplace(*ring, c, ring->ulen());
  const int T = ring->tcount();
  const int target_prec = std::min(ring->level(), ring->prec());
  RingPtr target = Ring::build(ring->frame_params(), RingKind::kQuotient, ring->level(), target_prec);
  std::vector<u64> out(static_cast<size_t>(ring->e()) * T, 0);
  const int ucopy = std::min(ring->e(), ring->ulen());
  for (int j = 0; j < ucopy; ++j) {
    for (int t = 0; t < T; ++t) out[j * T + t] = c[j * T + t] % target->modulus();
  }
  return SeriesElem(target, std::move(out));
}

SeriesElem lift_from_quotient(const SeriesElem& x, const RingPtr& series_ring) {
  if (x.ring()->kind() != RingKind::kQuotient || series_ring->kind() != RingKind::kSeries)
    throw Error("lift_from_quotient: expects an R element and an S_a ring");
  const int T = series_ring->tcount();
  std::vector<u64> out(series_ring->size(), 0);
  const int ucopy = std::min(series_ring->e(), series_ring->ulen());
  for (int j = 0; j < ucopy; ++j) {
    for (int t = 0; t < T; ++t) out[j * T + t] = x.coeff(t, j) % series_ring->modulus();
  }
  return SeriesElem(series_ring, std::move(out));
}

std::optional<SeriesElem> divide_by_E(const SeriesElem& x) {
  const RingPtr& ring = x.ring();
  if (ring->kind() != RingKind::kSeries) throw Error("divide_by_E: expects an element of S_a");
  const int T = ring->tcount();
  const int e = ring->e();
  const u64 p = ring->p();
  const u64 m = ring->modulus();
  // With E = u^e + pε and y = ε^{-1} z, the u^j coefficient of E·y is
  // p z_j + (ε^{-1} z)_{j-e}; solve for z_j degree by degree.
  SeriesElem eps_inv = invert(SeriesElem::from_poly(ring, epsilon_poly(*ring->frame_params())));
  std::vector<u64> z(ring->size(), 0);
  for (int j = 0; j < ring->ulen(); ++j) {
    std::vector<u64> rhs(x.coeffs().begin() + j * T, x.coeffs().begin() + (j + 1) * T);
    if (j >= e) {
      std::vector<u64> w(T, 0);
      const int mdeg = j - e;
      for (int i = 0; i <= mdeg; ++i) {
        tpoly_mul_acc(*ring, w, 0, &eps_inv.coeffs()[(mdeg - i) * T], &z[i * T]);
      }
      for (int t = 0; t < T; ++t) rhs[t] = sub_mod(rhs[t], w[t], m);
    }
    for (int t = 0; t < T; ++t) {
      if (rhs[t] % p != 0) return std::nullopt;
      z[j * T + t] = rhs[t] / p;
    }
  }
  return eps_inv * SeriesElem(ring, std::move(z));
}

SeriesElem change_level(const SeriesElem& x, int level) {
  const RingPtr& ring = x.ring();
  if (level == ring->level()) return x;
  if (ring->kind() == RingKind::kQuotient) {
    if (level > ring->level()) throw PrecisionError("change_level: cannot raise the level of an R/p^aR element");
    const int prec = std::min(level, ring->frame_params()->N);
    RingPtr target = Ring::build(ring->frame_params(), RingKind::kQuotient, level, prec);
    std::vector<u64> out = x.coeffs();
    for (auto& v : out) v %= target->modulus();
    return SeriesElem(target, std::move(out));
  }
  if (ring->kind() != RingKind::kSeries) throw Error("change_level: expects an element of S_a or R/p^aR");
  RingPtr target = Ring::build(ring->frame_params(), RingKind::kSeries, level, ring->prec());
  const int T = ring->tcount();
  std::vector<u64> out(target->size(), 0);
  const size_t n = static_cast<size_t>(std::min(ring->ulen(), target->ulen())) * T;
  std::copy(x.coeffs().begin(), x.coeffs().begin() + n, out.begin());
  return SeriesElem(target, std::move(out));
}

std::string to_string(const SeriesElem& x) {
  const Ring& ring = *x.ring();
  const int T = ring.tcount();
  struct Term {
    std::vector<int> exps;  // t1..tr, u
    long long c;
  };
  std::vector<Term> terms;
  for (int j = 0; j < ring.ulen(); ++j) {
    for (int t = 0; t < T; ++t) {
      u64 c = x.coeff(t, j);
      if (c == 0) continue;
      std::vector<int> exps = ring.tmono(t);
      exps.push_back(j);
      terms.push_back({exps, balanced(c, ring.modulus())});
    }
  }
  if (terms.empty()) return "0";
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return graded_less(a.exps, b.exps); });
  std::ostringstream os;
  bool first = true;
  for (const auto& term : terms) {
    long long c = term.c;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    long long ac = c < 0 ? -c : c;
    std::ostringstream mono;
    bool any = false;
    for (size_t i = 0; i < term.exps.size(); ++i) {
      int k = term.exps[i];
      if (k == 0) continue;
      if (any) mono << "*";
      mono << (i + 1 == term.exps.size() ? std::string("u") : "t" + std::to_string(i + 1));
      if (k > 1) mono << "^" << k;
      any = true;
    }
    if (!any) {
      os << ac;
    } else if (ac == 1) {
      os << mono.str();
    } else {
      os << ac << "*" << mono.str();
    }
    first = false;
  }
  return os.str();
}

// ---------------------------------------------------------------------------

Frame::Frame(FrameParams params) : params_(std::make_shared<const FrameParams>(std::move(params))) {
  if (params_->E.nvars() != params_->r + 1) throw Error("Frame: E must be a polynomial in t1..tr, u");
}

int Frame::max_level() const noexcept {
  return params_->max_level > 0 ? params_->max_level : static_cast<int>(params_->p) * params_->a;
}

RingPtr Frame::series(int level, int prec) const {
  if (level < 1 || level > max_level())
    throw PrecisionError("level " + std::to_string(level) + " outside frame caps (max " +
                         std::to_string(max_level()) + ")");
  return Ring::build(params_, RingKind::kSeries, level, prec);
}

RingPtr Frame::quotient(int level) const { return quotient(level, std::min(level, params_->N)); }

RingPtr Frame::quotient(int level, int prec) const {
  if (level < 1 || level > max_level())
    throw PrecisionError("level " + std::to_string(level) + " outside frame caps");
  return Ring::build(params_, RingKind::kQuotient, level, prec);
}

SeriesElem Frame::E(int level) const { return E(level, params_->N); }

SeriesElem Frame::E(int level, int prec) const {
  return SeriesElem::from_poly(Ring::build(params_, RingKind::kSeries, level, prec), params_->E);
}

SeriesElem Frame::epsilon(int level) const { return epsilon(level, params_->N); }

SeriesElem Frame::epsilon(int level, int prec) const {
  return SeriesElem::from_poly(Ring::build(params_, RingKind::kSeries, level, prec), epsilon_poly(*params_));
}

}  // namespace breuil
