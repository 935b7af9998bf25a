#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "breuil/matrix.hpp"
#include "breuil/series.hpp"
#include "breuil/window.hpp"

namespace breuil {

/// 𝒯_a = 𝔖[[v]]/(pv - u^e, v^a) at p-precision N and t-degree cap D.
/// Elements are stored in canonical form Σ c_{ijα} v^i u^j t^α with i < a
/// and j < e; u^e is rewritten to p·v.
struct TRing {
  Frame frame;
  int a = 1;
  RingPtr base;  ///< 𝔖_1 at precision N: supplies the t-monomial tables
  u64 modulus = 0;

  int e() const noexcept { return frame.e(); }
  int tcount() const noexcept { return base->tcount(); }
  int size() const noexcept { return a * e() * tcount(); }
  int index(int i, int j, int t) const noexcept { return (i * e() + j) * tcount() + t; }
  bool same_as(const TRing& o) const noexcept { return frame.same_as(o.frame) && a == o.a; }
};
using TRingPtr = std::shared_ptr<const TRing>;

TRingPtr t_ring(const Frame& frame, int a);

class TElem {
 public:
  TElem(TRingPtr ring, std::vector<u64> coeffs);

  static TElem zero(const TRingPtr& ring);
  static TElem one(const TRingPtr& ring);
  static TElem constant(const TRingPtr& ring, long long c);
  static TElem v(const TRingPtr& ring);
  /// u, which is p·v when e = 1.
  static TElem u(const TRingPtr& ring);

  const TRingPtr& ring() const noexcept { return ring_; }
  const std::vector<u64>& coeffs() const noexcept { return c_; }
  u64 coeff(int i, int j, int t) const { return c_[ring_->index(i, j, t)]; }

  bool is_zero() const noexcept;
  /// Constant term nonzero mod p.
  bool is_unit() const;
  /// The coefficient of v^i as an element of 𝔖_1 (u-degree < e).
  SeriesElem v_coefficient(int i) const;

  TElem operator+(const TElem& o) const;
  TElem operator-(const TElem& o) const;
  TElem operator*(const TElem& o) const;
  TElem operator-() const;
  TElem& operator+=(const TElem& o) { return *this = *this + o; }

  bool operator==(const TElem& o) const;
  bool operator!=(const TElem& o) const { return !(*this == o); }

 private:
  void check_ring(const TElem& o, const char* where) const;

  TRingPtr ring_;
  std::vector<u64> c_;
};

bool is_unit(const TElem& x);
/// Newton inverse; throws ArithmeticError for non-units.
TElem inverse(const TElem& x);
inline TElem zero_like(const TElem& x) { return TElem::zero(x.ring()); }
inline TElem one_like(const TElem& x) { return TElem::one(x.ring()); }

/// σ: t ↦ t^p, u ↦ u^p, v ↦ p^{p-1}·v^p.
TElem t_sigma(const TElem& x);
/// The canonical map 𝔖_b -> 𝒯_a (any level b): u^{qe+r} ↦ p^q·v^q·u^r.
TElem t_embed(const TRingPtr& ring, const SeriesElem& x);
/// True when the v^i coefficient is divisible by p^i for every i, i.e. the
/// element is in the image of 𝔖 at this precision.
bool in_series_image(const TElem& x);

/// v-graded rendering with balanced residues, e.g. "1 - 3*v".
std::string to_string(const TElem& x);

using TMatrix = Matrix<TElem>;

TMatrix t_embed(const TRingPtr& ring, const SMatrix& M);
TMatrix t_sigma(const TMatrix& M);
std::string to_string(const TMatrix& M);

struct TWindow {
  int d = 0;
  int c = 0;
  TMatrix A;
};

/// Entry-wise image of A in 𝒯_level.
TWindow base_change_T(const Window& w);

struct IsoSolution {
  TMatrix X;
  TMatrix Z;  ///< (A_2^{-1}A_1 - I)/u^e over 𝒯_a
  TMatrix D;  ///< pC^{-1}·Z·C
  TMatrix residual;  ///< A_2·C·X - σ(X)·A_1·C
  bool residual_zero = false;
};

/// The unique X ≡ I mod v over 𝒯_a with A_2·C·X = σ(X)·A_1·C. A_1 and A_2
/// are given over 𝔖_{a+1} so that Z is known modulo u^{ae}. Without Y0 the
/// solver sums Ψ^n(D) for n < a; with Y0 it iterates Y ↦ D + Ψ(Y) a times.
/// Throws ArithmeticError when A_2^{-1}A_1 is not ≡ I mod u^e.
IsoSolution solve_iso(const Frame& frame, int a, int d, int c, const SMatrix& A1, const SMatrix& A2,
                      const std::optional<TMatrix>& Y0 = std::nullopt);

/// ν(a) = min over n >= a of n - v_p(n!).
int nu(int a, u64 p);

}  // namespace breuil
