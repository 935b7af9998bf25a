#pragma once

#include <string>
#include <vector>

#include "breuil/matrix.hpp"
#include "breuil/series.hpp"

namespace breuil {

using SMatrix = Matrix<SeriesElem>;

/// A window over 𝔖_level in normal form: φ has matrix A·C with
/// C = diag(E·I_d, I_c) on the basis J ⊕ L.
struct Window {
  Frame frame;
  int level = 1;
  int d = 0;
  int c = 0;
  SMatrix A;

  int h() const noexcept { return d + c; }
  RingPtr ring() const { return A(0, 0).ring(); }
};

/// Validates and builds a window. Throws on size mismatch, wrong ring or a
/// non-unit determinant.
Window make_window(const Frame& frame, int level, int d, int c, SMatrix A);

/// Entry-wise Frobenius.
SMatrix sigma(const SMatrix& M);
/// diag(E·I_d, I_c) over the given series ring.
SMatrix c_matrix(const Frame& frame, const RingPtr& ring, int d, int c);
/// Structural matrix A·C.
SMatrix phi_matrix(const Window& w);

struct NormalDecomposition {
  int d = 0;
  int c = 0;
  SMatrix A;  ///< M·U = A·C
  SMatrix U;  ///< permutation times unipotent
};

/// Splits a φ-matrix into unit columns (L) and E-divisible columns (J).
/// Pivot columns are chosen leftmost first over the residue field, pivot rows
/// lowest index first. Throws ArithmeticError if the cokernel is not free.
NormalDecomposition normal_decompose(const SMatrix& M);

/// The window of a raw φ-matrix M together with the window isomorphism U from
/// it to (Q, M): A_w = σ(U)^{-1}·A, so that M·U = σ(U)·A_w·C.
std::pair<Window, SMatrix> window_from_phi(const Frame& frame, int level, const SMatrix& M);

/// The window W' with σ(U)·A·C = A'·C·U, so that U : w -> W' is an
/// isomorphism. U must be invertible with (L, J) block divisible by E.
Window transport_window(const Window& w, const SMatrix& U);

/// Triple (P, Q, F) in matrix form on the normal basis of P. B is the matrix
/// of the σ-linear isomorphism F ⊕ F_1 : J ⊕ L -> P.
struct Triple {
  int d = 0;
  int c = 0;
  SMatrix B;
  SMatrix F;   ///< B·diag(I_d, σ(E)·I_c), the matrix of F on P
  SMatrix F1;  ///< matrix of F_1 on the basis (E·J, L) of Q; equals B
};

Triple triple_of(const Window& w);
Window window_of(const Frame& frame, int level, const Triple& t);

/// Entry-wise lift to level+1 (least representatives).
Window lift_window(const Window& w);
/// Entry-wise reduction to a lower level.
Window reduce_window(const Window& w, int level);

/// Checks A_2·C·U = σ(U)·A_1·C for U : W_1 -> W_2.
bool check_morphism(const Window& source, const Window& target, const SMatrix& U);

/// For a morphism over 𝔖_{ap}: true unless U vanishes mod u^{ae} while being
/// nonzero (the implication "U ≡ 0 mod u^{ae} ⇒ U = 0").
bool check_rigidity(const Window& source, const Window& target, const SMatrix& U, int a);

struct SpecialFiber {
  int height = 0;
  int dim = 0;
  SMatrix A0;    ///< A mod (t, u)
  SMatrix Phi0;  ///< (diag(I_d, E·I_c)·A^{-1}) mod (t, u)
  bool is_nilpotent = false;
};

/// Special-fiber data. Nilpotence is V-nilpotence: N_0 = diag(0_d, I_c)·A_0
/// mod p satisfies N_0^h = 0.
SpecialFiber special_fiber(const Window& w);

struct LieData {
  int rank = 0;
  SMatrix presentation;  ///< (A·C) mod E over R/p^aR
};

LieData lie(const Window& w);

/// "[[a, b], [c, d]]" rendering.
std::string to_string(const SMatrix& M);

}  // namespace breuil
