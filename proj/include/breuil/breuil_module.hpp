#pragma once

#include <string>
#include <vector>

#include <gmpxx.h>

#include "breuil/window.hpp"

namespace breuil {

/// A Breuil module given by its resolution: the cokernel of an isogeny
/// U : W' -> W of windows, with det(U) = unit·p^m.
struct IsogenyModule {
  Window source;
  Window target;
  SMatrix U;
  int m = 0;
};

struct DetClass {
  bool ok = false;
  int m = 0;
  std::string reason;  ///< empty when ok
};

/// Splits det = p^m·unit. Fails for det = 0 at precision and when det/p^m
/// is not a unit.
DetClass classify_det(const SeriesElem& det);

/// Validates the morphism and computes m. Throws ArithmeticError for a
/// non-morphism or a determinant that is not unit·p^m, PrecisionError when
/// det(U) vanishes at precision N.
IsogenyModule make_module(const Window& source, const Window& target, const SMatrix& U);

int p_length(const IsogenyModule& M);
/// p^{p_length}.
mpz_class group_order(const IsogenyModule& M);

struct ModuleReport {
  std::vector<std::string> violations;
  bool ok() const noexcept { return violations.empty(); }
};

/// Checks the morphism equation, det(φ) = det(A)·E^d on both windows,
/// equal ranks d' = d and c' = c, det(U) = unit·p^m, and
/// adj(U)·U = det(U)·I.
ModuleReport validate_breuil_module(const IsogenyModule& M);

}  // namespace breuil
