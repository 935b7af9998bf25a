#include "breuil/breuil_module.hpp"

namespace breuil {

DetClass classify_det(const SeriesElem& det) {
  if (det.is_zero()) return {false, 0, "det(U) = 0 at precision N"};
  const int m = det.p_valuation();
  auto unit = det.divide_by_p_power(m);
  if (!unit || !unit->is_unit()) return {false, m, "det(U)/p^" + std::to_string(m) + " is not a unit"};
  return {true, m, ""};
}

IsogenyModule make_module(const Window& source, const Window& target, const SMatrix& U) {
  if (!source.frame.same_as(target.frame)) throw RingMismatch("make_module: windows over different frames");
  if (!check_morphism(source, target, U)) throw ArithmeticError("make_module: U is not a window morphism");
  const DetClass dc = classify_det(U.det());
  if (!dc.ok) {
    if (U.det().is_zero()) throw PrecisionError("make_module: " + dc.reason);
    throw ArithmeticError("make_module: " + dc.reason);
  }
  return IsogenyModule{source, target, U, dc.m};
}

int p_length(const IsogenyModule& M) { return M.m; }

mpz_class group_order(const IsogenyModule& M) {
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), M.source.frame.p(), static_cast<unsigned long>(M.m));
  return out;
}

ModuleReport validate_breuil_module(const IsogenyModule& M) {
  ModuleReport report;
  auto& v = report.violations;
  if (M.source.d != M.target.d) v.push_back("rank mismatch: d' = " + std::to_string(M.source.d) + ", d = " + std::to_string(M.target.d));
  if (M.source.c != M.target.c) v.push_back("rank mismatch: c' = " + std::to_string(M.source.c) + ", c = " + std::to_string(M.target.c));
  if (M.source.level != M.target.level || !M.source.frame.same_as(M.target.frame)) {
    v.push_back("source and target are not over the same ring");
    return report;
  }
  if (M.U.rows() != M.target.h() || M.U.cols() != M.source.h()) {
    v.push_back("U has the wrong shape");
    return report;
  }
  for (const Window* w : {&M.source, &M.target}) {
    SeriesElem Ed = SeriesElem::one(w->ring());
    const SeriesElem E = SeriesElem::from_poly(w->ring(), w->frame.params().E);
    for (int i = 0; i < w->d; ++i) Ed = Ed * E;
    if (!w->A.det().is_unit() || phi_matrix(*w).det() != w->A.det() * Ed)
      v.push_back(std::string(w == &M.source ? "source" : "target") + ": det(phi) is not unit * E^d");
  }
  if (!check_morphism(M.source, M.target, M.U)) v.push_back("U is not a window morphism");
  const SeriesElem det = M.U.det();
  const DetClass dc = classify_det(det);
  if (!dc.ok) {
    v.push_back(dc.reason);
  } else if (dc.m != M.m) {
    v.push_back("recorded m = " + std::to_string(M.m) + " but det(U) has p-exponent " + std::to_string(dc.m));
  }
  if (M.U.square()) {
    const SMatrix lhs = M.U.adjugate() * M.U;
    if (lhs != SMatrix::identity(M.U.rows(), SeriesElem::one(det.ring())).scaled(det))
      v.push_back("adj(U)*U != det(U)*I");
  }
  return report;
}

}  // namespace breuil
