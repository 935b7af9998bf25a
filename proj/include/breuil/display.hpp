#pragma once

#include <optional>
#include <string>
#include <vector>

#include "breuil/matrix.hpp"
#include "breuil/window.hpp"
#include "breuil/witt.hpp"

namespace breuil {

using WMatrix = Matrix<WittVec>;

/// Display over W_L(R/p^aR) in matrix form on the normal decomposition
/// P' = J' ⊕ L'. B is the matrix of F' ⊕ F'_1.
struct DDisplay {
  Frame frame;
  int level = 1;
  int L = 1;
  int d = 0;
  int c = 0;
  WMatrix B;
  /// Matrix of F' on all of P', kept when the display comes from a window.
  std::optional<WMatrix> Fprime;

  int h() const noexcept { return d + c; }
};

/// B = κ(A^{-1}) with the L-columns multiplied by τ. Throws PrecisionError
/// unless level + L - 1 <= N.
DDisplay to_display(const Window& w, int L);
inline DDisplay to_display(const Window& w) { return to_display(w, w.frame.L()); }

/// Reduction of every Witt component to R/p^level R.
DDisplay reduce_display(const DDisplay& D, int level);

struct DisplayReport {
  std::vector<std::string> violations;
  bool ok() const noexcept { return violations.empty(); }
};

/// det(B) is a unit; F'(V(1)) = p; when F' is known, F' agrees with B on
/// J-columns and F'(y) = p·F'_1(y) on L-columns.
DisplayReport validate_display(const DDisplay& D);

/// Rank of Lie = P'/Q'.
int display_lie(const DDisplay& D);

std::string to_string(const WMatrix& M);

}  // namespace breuil
