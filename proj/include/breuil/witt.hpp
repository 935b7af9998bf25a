#pragma once

#include <memory>
#include <string>
#include <vector>

#include "breuil/intpoly.hpp"
#include "breuil/series.hpp"

namespace breuil {

/// Universal p-typical Witt polynomials up to length L.
/// S[n], P[n] are in the 2L variables x_0..x_{L-1}, y_0..y_{L-1};
/// F[n] (n < L-1) is in x_0..x_{L-1} and gives the Frobenius W_L -> W_{L-1}.
struct WittPolyTable {
  u64 p = 0;
  int L = 0;
  std::vector<IntPoly> S;
  std::vector<IntPoly> P;
  std::vector<IntPoly> F;
};

/// Table for (p, L), computed once and cached for the process lifetime.
/// Thread-safe.
std::shared_ptr<const WittPolyTable> witt_polys(u64 p, int L);

/// Truncated Witt vector (x_0, ..., x_{L-1}) over one of the library rings.
class WittVec {
 public:
  explicit WittVec(std::vector<SeriesElem> components);

  static WittVec zero(const RingPtr& ring, int L);
  static WittVec one(const RingPtr& ring, int L);
  /// Teichmüller representative [x] = (x, 0, 0, ...).
  static WittVec teichmuller(const SeriesElem& x, int L);
  /// The image of the integer n under Z -> W_L(ring).
  static WittVec integer(const RingPtr& ring, long long n, int L);

  int length() const noexcept { return static_cast<int>(c_.size()); }
  const RingPtr& ring() const noexcept { return c_.front().ring(); }
  const SeriesElem& operator[](int i) const { return c_[i]; }
  const std::vector<SeriesElem>& components() const noexcept { return c_; }

  bool is_zero() const noexcept;
  /// A Witt vector over a local ring is a unit iff its 0-th component is.
  bool is_unit() const { return c_.front().is_unit(); }

  WittVec operator+(const WittVec& o) const;
  WittVec operator-(const WittVec& o) const;
  WittVec operator*(const WittVec& o) const;
  WittVec operator-() const;

  bool operator==(const WittVec& o) const { return c_ == o.c_; }
  bool operator!=(const WittVec& o) const { return !(*this == o); }

 private:
  std::vector<SeriesElem> c_;
};

WittVec wadd(const WittVec& x, const WittVec& y);
WittVec wmul(const WittVec& x, const WittVec& y);
/// Componentwise negation (correct because p is odd).
WittVec wneg(const WittVec& x);
/// Frobenius W_L -> W_{L-1}: ghost components (w_1, w_2, ...).
WittVec wfrob(const WittVec& x);
/// Verschiebung W_L -> W_{L+1}: (0, x_0, x_1, ...).
WittVec wver(const WittVec& x);
/// Ghost components w_n = sum_{i<=n} p^i x_i^{p^{n-i}}.
std::vector<SeriesElem> ghost(const WittVec& x);

/// First L components.
WittVec truncate(const WittVec& x, int L);

bool is_unit(const WittVec& x);
WittVec invert(const WittVec& x);
inline WittVec inverse(const WittVec& x) { return invert(x); }
inline WittVec zero_like(const WittVec& x) { return WittVec::zero(x.ring(), x.length()); }
inline WittVec one_like(const WittVec& x) { return WittVec::one(x.ring(), x.length()); }

/// δ on an element of 𝔖_a known exactly at precision prec + L - 1; the
/// result has components at precision prec.
WittVec delta_exact(const SeriesElem& x, int L, int prec);
/// δ on an element of 𝔖_a, using its least non-negative lift to the working
/// precision N + L - 1. Components are reported at the input precision.
WittVec delta(const SeriesElem& x, int L);
/// κ: components of δ reduced mod E into R/p^aR.
WittVec kappa(const SeriesElem& x, int L);
/// κ of an exactly known element (see delta_exact).
WittVec kappa_exact(const SeriesElem& x, int L, int prec);

/// The unit τ in W_L(R/p^a R) with p·τ = κ(σ(E)), obtained from κ(E) = V(τ).
WittVec tau(const Frame& frame, int level, int L);
/// κ(E) at length L+1, the Witt vector V(τ).
WittVec kappa_E(const Frame& frame, int level, int L);

/// "(c0, c1, ...)" with components rendered by to_string(SeriesElem).
std::string to_string(const WittVec& x);

}  // namespace breuil
