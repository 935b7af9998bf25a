#include "breuil/witt.hpp"

#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <unordered_map>

namespace breuil {

namespace {

// Exponent vectors packed 8 bits per variable into a 128-bit key; enough for
// 16 variables of degree <= 255, i.e. L <= 8 and p^{L-1} <= 255.
using Key = u128;

struct KeyHash {
  size_t operator()(Key k) const noexcept {
    u64 lo = static_cast<u64>(k), hi = static_cast<u64>(k >> 64);
    return std::hash<u64>()(lo * 0x9E3779B97F4A7C15ull ^ hi);
  }
};

using PPoly = std::unordered_map<Key, mpz_class, KeyHash>;

Key var_key(int v, int exp) { return static_cast<Key>(exp) << (8 * v); }

void add_into(PPoly& acc, const PPoly& x, const mpz_class& scale) {
  for (const auto& [k, c] : x) {
    mpz_class& slot = acc[k];
    slot += c * scale;
    if (slot == 0) acc.erase(k);
  }
}

PPoly mul(const PPoly& a, const PPoly& b) {
  PPoly out;
  out.reserve(a.size() * b.size() / 2 + 1);
  mpz_class prod;
  for (const auto& [ka, ca] : a) {
    for (const auto& [kb, cb] : b) {
      prod = ca * cb;
      out[ka + kb] += prod;
    }
  }
  for (auto it = out.begin(); it != out.end();) {
    it = it->second == 0 ? out.erase(it) : std::next(it);
  }
  return out;
}

PPoly power(const PPoly& base, u64 k) {
  PPoly result{{0, 1}};
  PPoly b = base;
  while (k > 0) {
    if (k & 1u) result = mul(result, b);
    k >>= 1;
    if (k > 0) b = mul(b, b);
  }
  return result;
}

// w_n(z_offset, z_offset+1, ...) = sum_{i<=n} p^i z_i^{p^{n-i}}
PPoly ghost_poly(u64 p, int n, int offset) {
  PPoly out;
  for (int i = 0; i <= n; ++i) {
    mpz_class c;
    mpz_ui_pow_ui(c.get_mpz_t(), p, i);
    out[var_key(offset + i, static_cast<int>(ipow(p, n - i)))] += c;
  }
  return out;
}

// Solves w_n(Q_0..Q_n) = target for Q_n given the earlier Q_i.
PPoly solve_layer(u64 p, int n, PPoly target, const std::vector<PPoly>& earlier) {
  for (int i = 0; i < n; ++i) {
    mpz_class neg;
    mpz_ui_pow_ui(neg.get_mpz_t(), p, i);
    neg = -neg;
    add_into(target, power(earlier[i], ipow(p, n - i)), neg);
  }
  mpz_class pn;
  mpz_ui_pow_ui(pn.get_mpz_t(), p, n);
  for (auto& [k, c] : target) {
    if (!mpz_divisible_p(c.get_mpz_t(), pn.get_mpz_t()))
      throw ArithmeticError("witt_polys: non-exact division in the ghost recursion");
    mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), pn.get_mpz_t());
  }
  return target;
}

IntPoly to_int_poly(const PPoly& x, int nvars) {
  IntPoly out(nvars);
  for (const auto& [k, c] : x) {
    std::vector<int> e(nvars);
    for (int v = 0; v < nvars; ++v) e[v] = static_cast<int>((k >> (8 * v)) & 0xFF);
    out.add_term(e, c);
  }
  return out;
}

std::shared_ptr<const WittPolyTable> build_table(u64 p, int L) {
  if (L < 1 || L > 8 || ipow(p, L - 1) > 255)
    throw PrecisionError("witt_polys: (p, L) outside the supported range p^{L-1} <= 255");
  auto t = std::make_shared<WittPolyTable>();
  t->p = p;
  t->L = L;
  std::vector<PPoly> S, P, F;
  for (int n = 0; n < L; ++n) {
    PPoly wx = ghost_poly(p, n, 0), wy = ghost_poly(p, n, L);
    PPoly sum = wx;
    add_into(sum, wy, 1);
    S.push_back(solve_layer(p, n, sum, S));
    P.push_back(solve_layer(p, n, mul(wx, wy), P));
    if (n + 1 < L) F.push_back(solve_layer(p, n, ghost_poly(p, n + 1, 0), F));
  }
  for (const auto& s : S) t->S.push_back(to_int_poly(s, 2 * L));
  for (const auto& q : P) t->P.push_back(to_int_poly(q, 2 * L));
  for (const auto& f : F) t->F.push_back(to_int_poly(f, L));
  return t;
}

// Terms of a universal polynomial grouped by the exponents of the
// non-leading variables; the leading variables (x_0, y_0) carry most of the
// degree and are summed inside each group.
struct GroupedPoly {
  struct Group {
    std::vector<int> outer;
    size_t begin, end;  // range in term_leading / coeffs
  };
  std::vector<std::vector<int>> leading;  // distinct leading exponent vectors
  std::vector<Group> groups;
  std::vector<size_t> term_leading;
  std::vector<mpz_class> coeffs;
  std::map<u64, std::vector<u64>> residues;  // coefficient residues per modulus
};

struct GroupedView {
  const GroupedPoly& poly;
  const std::vector<u64>& residues;
};

GroupedView grouped(const IntPoly& poly, const std::vector<int>& leading_vars, u64 m) {
  static std::mutex mu;
  static std::map<const IntPoly*, GroupedPoly> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto [it, fresh] = cache.try_emplace(&poly);
  GroupedPoly& g = it->second;
  if (fresh) {
    std::map<std::vector<int>, std::vector<std::pair<std::vector<int>, const mpz_class*>>> by_outer;
    for (const auto& [exps, coeff] : poly.terms()) {
      std::vector<int> outer = exps, inner;
      for (int v : leading_vars) {
        inner.push_back(exps[v]);
        outer[v] = 0;
      }
      by_outer[outer].emplace_back(std::move(inner), &coeff);
    }
    std::map<std::vector<int>, size_t> ids;
    for (auto& [outer, terms] : by_outer) {
      const size_t begin = g.coeffs.size();
      for (auto& [inner, coeff] : terms) {
        auto [id, added] = ids.try_emplace(inner, g.leading.size());
        if (added) g.leading.push_back(inner);
        g.term_leading.push_back(id->second);
        g.coeffs.push_back(*coeff);
      }
      g.groups.push_back({outer, begin, g.coeffs.size()});
    }
  }
  auto [rit, missing] = g.residues.try_emplace(m);
  if (missing) {
    for (const auto& c : g.coeffs) rit->second.push_back(residue(c, m));
  }
  return {g, rit->second};
}

// Evaluates universal polynomials at ring elements, sharing powers, products
// of the leading variables and prefix products of the outer monomials.
class Evaluator {
 public:
  Evaluator(std::vector<SeriesElem> vars, std::vector<int> leading)
      : vars_(std::move(vars)), leading_(std::move(leading)), powers_(vars_.size()) {}

  SeriesElem eval(const IntPoly& poly) {
    const RingPtr& ring = vars_.front().ring();
    const u64 m = ring->modulus();
    const int nv = static_cast<int>(vars_.size());
    GroupedView view = grouped(poly, leading_, m);
    const GroupedPoly& g = view.poly;
    std::vector<std::optional<SeriesElem>> products(g.leading.size());
    SeriesElem acc = SeriesElem::zero(ring);
    std::vector<std::optional<SeriesElem>> prefix(nv + 1);
    std::vector<int> prev;
    // With m < 2^32 every product fits in 64 bits and the 128-bit sums are
    // reduced once per group.
    const bool small = m < (static_cast<u64>(1) << 32);
    std::vector<u128> sums(ring->size());
    for (const auto& group : g.groups) {
      std::fill(sums.begin(), sums.end(), 0);
      bool any = false;
      for (size_t t = group.begin; t < group.end; ++t) {
        const u64 c = view.residues[t];
        if (c == 0) continue;
        any = true;
        auto& slot = products[g.term_leading[t]];
        if (!slot) slot = leading_monomial(g.leading[g.term_leading[t]]);
        const auto& x = slot->coeffs();
        for (size_t k = 0; k < sums.size(); ++k) {
          if (x[k] == 0) continue;
          sums[k] += small ? static_cast<u128>(c * x[k]) : static_cast<u128>(c) * x[k] % m;
          if (!small) sums[k] %= m;
        }
      }
      if (!any) continue;
      std::vector<u64> buf(sums.size());
      for (size_t k = 0; k < sums.size(); ++k) buf[k] = static_cast<u64>(sums[k] % m);
      SeriesElem inner_sum(ring, std::move(buf));
      const auto& exps = group.outer;
      int start = 0;
      if (!prev.empty()) {
        while (start < nv && exps[start] == prev[start]) ++start;
      }
      for (int v = start; v < nv; ++v) {
        const std::optional<SeriesElem>& before = prefix[v];
        if (exps[v] == 0) {
          prefix[v + 1] = before;
        } else if (!before) {
          prefix[v + 1] = pow(v, exps[v]);
        } else {
          prefix[v + 1] = *before * pow(v, exps[v]);
        }
      }
      prev = exps;
      acc += prefix[nv] ? *prefix[nv] * inner_sum : inner_sum;
    }
    return acc;
  }

 private:
  const SeriesElem& pow(int v, int k) {
    auto& cache = powers_[v];
    if (cache.empty()) cache.push_back(vars_[v]);
    while (static_cast<int>(cache.size()) < k) cache.push_back(cache.back() * vars_[v]);
    return cache[k - 1];
  }

  SeriesElem leading_monomial(const std::vector<int>& exps) {
    std::optional<SeriesElem> mono;
    for (size_t i = 0; i < exps.size(); ++i) {
      if (exps[i] == 0) continue;
      const SeriesElem& x = pow(leading_[i], exps[i]);
      mono = mono ? *mono * x : x;
    }
    return mono ? *mono : SeriesElem::one(vars_.front().ring());
  }

  std::vector<SeriesElem> vars_;
  std::vector<int> leading_;
  std::vector<std::vector<SeriesElem>> powers_;  // powers_[v][k-1] = vars_[v]^k
};

void require_compatible(const WittVec& x, const WittVec& y, const char* where) {
  if (x.length() != y.length()) throw RingMismatch(std::string(where) + ": Witt length mismatch");
  require_same_ring(*x.ring(), *y.ring(), where);
}

std::vector<SeriesElem> concat(const WittVec& x, const WittVec& y) {
  std::vector<SeriesElem> v = x.components();
  v.insert(v.end(), y.components().begin(), y.components().end());
  return v;
}

}  // namespace

std::shared_ptr<const WittPolyTable> witt_polys(u64 p, int L) {
  static std::mutex mu;
  static std::map<std::pair<u64, int>, std::shared_ptr<const WittPolyTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{p, L}];
  if (!slot) slot = build_table(p, L);
  return slot;
}

WittVec::WittVec(std::vector<SeriesElem> components) : c_(std::move(components)) {
  if (c_.empty()) throw Error("WittVec: length must be >= 1");
  for (const auto& x : c_) require_same_ring(*c_.front().ring(), *x.ring(), "WittVec");
}

WittVec WittVec::zero(const RingPtr& ring, int L) {
  return WittVec(std::vector<SeriesElem>(L, SeriesElem::zero(ring)));
}

WittVec WittVec::one(const RingPtr& ring, int L) { return teichmuller(SeriesElem::one(ring), L); }

WittVec WittVec::teichmuller(const SeriesElem& x, int L) {
  std::vector<SeriesElem> c(L, SeriesElem::zero(x.ring()));
  c[0] = x;
  return WittVec(std::move(c));
}

WittVec WittVec::integer(const RingPtr& ring, long long n, int L) {
  // Components of n in W(Z_p), computed exactly over Z/p^{prec+L-1}.
  const int prec = ring->prec();
  RingPtr work = Ring::scalar(ring->p(), prec + L - 1);
  WittVec w = delta_exact(SeriesElem::constant(work, n), L, prec);
  std::vector<SeriesElem> c;
  for (const auto& x : w.components()) c.push_back(SeriesElem::constant(ring, static_cast<long long>(x.constant_term())));
  return WittVec(std::move(c));
}

bool WittVec::is_zero() const noexcept {
  for (const auto& x : c_) {
    if (!x.is_zero()) return false;
  }
  return true;
}

WittVec WittVec::operator+(const WittVec& o) const { return wadd(*this, o); }
WittVec WittVec::operator-(const WittVec& o) const { return wadd(*this, wneg(o)); }
WittVec WittVec::operator*(const WittVec& o) const { return wmul(*this, o); }
WittVec WittVec::operator-() const { return wneg(*this); }

WittVec wadd(const WittVec& x, const WittVec& y) {
  require_compatible(x, y, "wadd");
  const int L = x.length();
  auto table = witt_polys(x.ring()->p(), L);
  Evaluator ev(concat(x, y), {0, L});
  std::vector<SeriesElem> out;
  for (int n = 0; n < L; ++n) out.push_back(ev.eval(table->S[n]));
  return WittVec(std::move(out));
}

WittVec wmul(const WittVec& x, const WittVec& y) {
  require_compatible(x, y, "wmul");
  const int L = x.length();
  auto table = witt_polys(x.ring()->p(), L);
  Evaluator ev(concat(x, y), {0, L});
  std::vector<SeriesElem> out;
  for (int n = 0; n < L; ++n) out.push_back(ev.eval(table->P[n]));
  return WittVec(std::move(out));
}

WittVec wneg(const WittVec& x) {
  std::vector<SeriesElem> out;
  for (const auto& c : x.components()) out.push_back(-c);
  return WittVec(std::move(out));
}

WittVec wfrob(const WittVec& x) {
  const int L = x.length();
  if (L < 2) throw PrecisionError("wfrob: needs Witt length >= 2");
  auto table = witt_polys(x.ring()->p(), L);
  Evaluator ev(x.components(), {0});
  std::vector<SeriesElem> out;
  for (int n = 0; n + 1 < L; ++n) out.push_back(ev.eval(table->F[n]));
  return WittVec(std::move(out));
}

WittVec wver(const WittVec& x) {
  std::vector<SeriesElem> out{SeriesElem::zero(x.ring())};
  out.insert(out.end(), x.components().begin(), x.components().end());
  return WittVec(std::move(out));
}

std::vector<SeriesElem> ghost(const WittVec& x) {
  const u64 p = x.ring()->p();
  std::vector<SeriesElem> out;
  for (int n = 0; n < x.length(); ++n) {
    SeriesElem acc = SeriesElem::zero(x.ring());
    for (int i = 0; i <= n; ++i) {
      acc += x[i].pow(ipow(p, n - i)).scaled(static_cast<long long>(ipow(p, i)));
    }
    out.push_back(acc);
  }
  return out;
}

WittVec truncate(const WittVec& x, int L) {
  if (L < 1 || L > x.length()) throw PrecisionError("truncate: invalid Witt length");
  return WittVec(std::vector<SeriesElem>(x.components().begin(), x.components().begin() + L));
}

bool is_unit(const WittVec& x) { return x.is_unit(); }

WittVec invert(const WittVec& x) {
  if (!x.is_unit()) throw ArithmeticError("invert: Witt vector is not a unit");
  const int L = x.length();
  const WittVec one = WittVec::one(x.ring(), L);
  const WittVec two = WittVec::integer(x.ring(), 2, L);
  WittVec y = WittVec::teichmuller(invert(x[0]), L);
  // W_L of a finite local ring is finite local, so the Newton error is nilpotent.
  for (int iter = 0; iter < 256; ++iter) {
    WittVec xy = x * y;
    if (xy == one) return y;
    y = y * (two - xy);
  }
  throw ArithmeticError("invert: Newton iteration on Witt vectors did not converge");
}

WittVec delta_exact(const SeriesElem& x, int L, int prec) {
  const int work = prec + L - 1;
  if (x.ring()->prec() < work) throw PrecisionError("delta_exact: input precision below prec + L - 1");
  const u64 p = x.ring()->p();
  SeriesElem xw = x.with_prec(work);
  std::vector<SeriesElem> comps{xw};
  SeriesElem sig = xw;
  for (int n = 1; n < L; ++n) {
    sig = frobenius(sig);
    SeriesElem acc = sig;
    for (int i = 0; i < n; ++i) acc -= comps[i].pow(ipow(p, n - i)).scaled(static_cast<long long>(ipow(p, i)));
    auto q = acc.divide_by_p_power(n);
    if (!q) throw ArithmeticError("delta: non-exact division by p^" + std::to_string(n));
    comps.push_back(*q);
  }
  for (auto& c : comps) c = c.with_prec(prec);
  return WittVec(std::move(comps));
}

WittVec delta(const SeriesElem& x, int L) {
  const int prec = x.ring()->prec();
  return delta_exact(x.with_prec(prec + L - 1), L, prec);
}

namespace {
WittVec reduce_components(const WittVec& w) {
  std::vector<SeriesElem> out;
  for (const auto& c : w.components()) out.push_back(reduce_mod_E(c));
  return WittVec(std::move(out));
}
}  // namespace

WittVec kappa(const SeriesElem& x, int L) { return reduce_components(delta(x, L)); }

WittVec kappa_exact(const SeriesElem& x, int L, int prec) { return reduce_components(delta_exact(x, L, prec)); }

WittVec kappa_E(const Frame& frame, int level, int L) {
  WittVec k = kappa_exact(frame.E(level, frame.N() + L), L + 1, frame.N());
  if (!k[0].is_zero()) throw ArithmeticError("kappa_E: E does not vanish in R");
  return k;
}

WittVec tau(const Frame& frame, int level, int L) {
  WittVec k = kappa_E(frame, level, L);
  return WittVec(std::vector<SeriesElem>(k.components().begin() + 1, k.components().end()));
}

std::string to_string(const WittVec& x) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < x.length(); ++i) {
    if (i) os << ", ";
    os << to_string(x[i]);
  }
  os << ")";
  return os.str();
}

}  // namespace breuil
