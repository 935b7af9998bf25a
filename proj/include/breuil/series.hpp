#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "breuil/error.hpp"
#include "breuil/intpoly.hpp"
#include "breuil/modarith.hpp"

namespace breuil {

/// Parameters of a frame: the prime, the shape of 𝔖 = W(F_p)[[t_1..t_r, u]],
/// the Eisenstein-type polynomial E and every truncation cap.
///
/// Rings derived from a frame are honest quotients
///   𝔖_a / p^prec = 𝔖 / (p^prec, t-degree > D, u^{a·e}),
///   R/p^aR      = 𝔖 / (p^{min(a,N)}, t-degree > D, E).
/// E is stored as an exact integer polynomial in (t_1..t_r, u).
struct FrameParams {
  u64 p = 3;
  int r = 0;
  int e = 1;
  int a = 1;        ///< default truncation level
  int max_level = 0;  ///< largest level any ring may use; 0 means p·a
  int N = 4;        ///< p-adic precision of 𝔖_a
  int D = 0;        ///< total t-degree cap
  int L = 2;        ///< Witt length
  IntPoly E;        ///< variables ordered t_1..t_r, u

  /// Variable names in E's order: t1..tr, u.
  std::vector<std::string> variable_names() const;
};

/// Outcome of frame validation: one human-readable line per violated invariant.
struct FrameReport {
  std::vector<std::string> violations;
  bool ok() const noexcept { return violations.empty(); }
};

/// Checks every frame invariant and reports each violation.
FrameReport validate_frame(const FrameParams& params);

enum class RingKind {
  kScalar,    ///< Z/p^prec
  kSeries,    ///< 𝔖_a / p^prec
  kQuotient,  ///< R/p^aR, elements reduced to u-degree < e
};

class Ring;
using RingPtr = std::shared_ptr<const Ring>;

class Frame;

/// A truncated commutative ring: coefficient storage layout, caps and
/// multiplication rules. Immutable.
class Ring {
 public:
  static RingPtr scalar(u64 p, int prec);

  RingKind kind() const noexcept { return kind_; }
  u64 p() const noexcept { return p_; }
  int prec() const noexcept { return prec_; }
  u64 modulus() const noexcept { return mod_; }
  int r() const noexcept { return r_; }
  int D() const noexcept { return D_; }
  int e() const noexcept { return e_; }
  int level() const noexcept { return level_; }
  /// Number of stored u-powers: a·e for 𝔖_a, e for R, 1 for scalars.
  int ulen() const noexcept { return ulen_; }
  /// Number of t-monomials of total degree <= D.
  int tcount() const noexcept { return static_cast<int>(tmonos_.size()); }
  int size() const noexcept { return ulen_ * tcount(); }

  const std::vector<int>& tmono(int index) const { return tmonos_[index]; }
  int tdegree(int index) const { return tdeg_[index]; }
  /// Index of the product of two t-monomials, or -1 when it exceeds the cap.
  int tmul(int i, int j) const { return tmul_[i * tcount() + j]; }
  /// Index of t^α with α given, or -1.
  int tindex(const std::vector<int>& exps) const;
  /// Index of t^{pα} for the monomial at `index`, or -1.
  int tfrob(int index) const { return tfrob_[index]; }

  /// Coefficients of E below u^e, as t-polynomials reduced mod p^prec.
  const std::vector<std::vector<u64>>& e_low() const noexcept { return e_low_; }

  /// The frame this ring was derived from (null for scalar rings).
  const std::shared_ptr<const FrameParams>& frame_params() const noexcept { return frame_; }

  /// Same ring with a different p-adic precision.
  RingPtr with_prec(int prec) const;

  bool same_as(const Ring& other) const noexcept;
  std::string describe() const;

  /// Ring of the given kind derived from frame parameters. Rings compare equal
  /// only when they share the same parameter object.
  static RingPtr build(std::shared_ptr<const FrameParams> frame, RingKind kind, int level, int prec);

 private:
  Ring() = default;

  std::shared_ptr<const FrameParams> frame_;
  RingKind kind_ = RingKind::kScalar;
  u64 p_ = 0;
  int prec_ = 0;
  u64 mod_ = 0;
  int r_ = 0;
  int D_ = 0;
  int e_ = 1;
  int level_ = 0;
  int ulen_ = 1;
  std::vector<std::vector<int>> tmonos_;
  std::vector<int> tdeg_;
  std::vector<int> tmul_;
  std::vector<int> tfrob_;
  std::vector<std::vector<u64>> e_low_;
};

void require_same_ring(const Ring& a, const Ring& b, const char* where);

/// Element of a truncated ring. Coefficient of t^α u^j is stored at
/// j·tcount + index(α), as a residue in [0, p^prec).
class SeriesElem {
 public:
  explicit SeriesElem(RingPtr ring);
  SeriesElem(RingPtr ring, std::vector<u64> coeffs);

  static SeriesElem zero(const RingPtr& ring) { return SeriesElem(ring); }
  static SeriesElem one(const RingPtr& ring) { return constant(ring, 1); }
  static SeriesElem constant(const RingPtr& ring, long long c);
  static SeriesElem constant(const RingPtr& ring, const mpz_class& c);
  /// c · t^α · u^j; silently zero when the monomial exceeds the caps.
  static SeriesElem monomial(const RingPtr& ring, const std::vector<int>& t_exps, int u_exp, long long c = 1);
  /// Maps an exact integer polynomial in (t_1..t_r, u) into the ring. For
  /// quotient rings the image is reduced mod E.
  static SeriesElem from_poly(const RingPtr& ring, const IntPoly& poly);

  const RingPtr& ring() const noexcept { return ring_; }
  const std::vector<u64>& coeffs() const noexcept { return c_; }
  u64 coeff(int t_index, int u_exp) const { return c_[u_exp * ring_->tcount() + t_index]; }
  u64 constant_term() const { return c_[0]; }

  bool is_zero() const noexcept;
  /// Local-ring criterion: constant term nonzero mod p.
  bool is_unit() const;

  SeriesElem operator+(const SeriesElem& o) const;
  SeriesElem operator-(const SeriesElem& o) const;
  SeriesElem operator*(const SeriesElem& o) const;
  SeriesElem operator-() const;
  SeriesElem& operator+=(const SeriesElem& o);
  SeriesElem& operator-=(const SeriesElem& o);
  SeriesElem& operator*=(const SeriesElem& o) { return *this = *this * o; }
  SeriesElem scaled(long long c) const;
  SeriesElem pow(u64 k) const;

  bool operator==(const SeriesElem& o) const;
  bool operator!=(const SeriesElem& o) const { return !(*this == o); }

  /// Largest m <= prec with every coefficient divisible by p^m.
  int p_valuation() const;
  /// Exact division by p^k; nullopt if some coefficient is not divisible.
  /// The quotient is returned in the same ring (top digits are zero).
  std::optional<SeriesElem> divide_by_p_power(int k) const;

  /// Canonical representative in the ring of precision `prec` (reduction,
  /// or least non-negative lift when raising the precision).
  SeriesElem with_prec(int prec) const;

 private:
  RingPtr ring_;
  std::vector<u64> c_;
};

inline bool is_unit(const SeriesElem& x) { return x.is_unit(); }
SeriesElem invert(const SeriesElem& x);
inline SeriesElem inverse(const SeriesElem& x) { return invert(x); }
inline SeriesElem zero_like(const SeriesElem& x) { return SeriesElem::zero(x.ring()); }
inline SeriesElem one_like(const SeriesElem& x) { return SeriesElem::one(x.ring()); }

/// Frobenius lift: identity on W(F_p), t_i -> t_i^p, u -> u^p, truncated by
/// the caps. Only defined on 𝔖_a (and scalars, where it is the identity).
SeriesElem frobenius(const SeriesElem& x);

/// Canonical R/p^aR representative of an 𝔖_a element: division by the
/// u-monic E, coefficients reduced to precision min(a, N).
SeriesElem reduce_mod_E(const SeriesElem& x);

/// Least non-negative lift of an R/p^aR element back to 𝔖_a (u-degree < e).
SeriesElem lift_from_quotient(const SeriesElem& x, const RingPtr& series_ring);

/// Some y with E·y = x exactly in 𝔖_a / p^prec, or nullopt when x is not in
/// the ideal (E). The solution is unique only modulo the annihilator of E.
std::optional<SeriesElem> divide_by_E(const SeriesElem& x);

/// Same element in a ring of another level: truncation or zero padding for
/// 𝔖_a, reduction to a lower level for R/p^aR.
SeriesElem change_level(const SeriesElem& x, int level);

/// Graded-lex rendering with balanced residues, e.g. "1 - 3*u + t1^2".
std::string to_string(const SeriesElem& x);

/// A frame bundles validated parameters and hands out the rings built from them.
class Frame {
 public:
  explicit Frame(FrameParams params);

  const FrameParams& params() const noexcept { return *params_; }
  const std::shared_ptr<const FrameParams>& shared_params() const noexcept { return params_; }
  u64 p() const noexcept { return params_->p; }
  int r() const noexcept { return params_->r; }
  int e() const noexcept { return params_->e; }
  int a() const noexcept { return params_->a; }
  int N() const noexcept { return params_->N; }
  int D() const noexcept { return params_->D; }
  int L() const noexcept { return params_->L; }
  int max_level() const noexcept;

  /// 𝔖_level at precision N (or the given precision).
  RingPtr series(int level) const { return series(level, params_->N); }
  RingPtr series(int level, int prec) const;
  /// R/p^level R at precision min(level, N).
  RingPtr quotient(int level) const;
  RingPtr quotient(int level, int prec) const;
  RingPtr scalar() const { return Ring::scalar(params_->p, params_->N); }

  /// E in 𝔖_level.
  SeriesElem E(int level) const;
  SeriesElem E(int level, int prec) const;
  /// ε = (E - u^e)/p in 𝔖_level.
  SeriesElem epsilon(int level) const;
  SeriesElem epsilon(int level, int prec) const;

  FrameReport validate() const { return validate_frame(*params_); }
  bool same_as(const Frame& o) const noexcept { return params_ == o.params_; }

 private:
  std::shared_ptr<const FrameParams> params_;
};

}  // namespace breuil
