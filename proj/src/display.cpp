#include "breuil/display.hpp"

#include <sstream>

namespace breuil {

namespace {

WittVec reduce_vec(const WittVec& x, int level) {
  std::vector<SeriesElem> out;
  for (const auto& c : x.components()) out.push_back(change_level(c, level));
  return WittVec(std::move(out));
}

}  // namespace

DDisplay to_display(const Window& w, int L) {
  if (w.level + L - 1 > w.frame.N())
    throw PrecisionError("to_display: needs level + L - 1 <= N (level " + std::to_string(w.level) + ", L " +
                         std::to_string(L) + ", N " + std::to_string(w.frame.N()) + ")");
  const Triple t = triple_of(w);
  const WittVec tau_w = tau(w.frame, w.level, L);
  WMatrix B = t.B.map([&](const SeriesElem& x) { return kappa(x, L); });
  for (int i = 0; i < w.h(); ++i) {
    for (int j = w.d; j < w.h(); ++j) B(i, j) = B(i, j) * tau_w;
  }
  WMatrix Fp = t.F.map([&](const SeriesElem& x) { return kappa(x, L); });
  return DDisplay{w.frame, w.level, L, w.d, w.c, std::move(B), std::move(Fp)};
}

DDisplay reduce_display(const DDisplay& D, int level) {
  if (level < 1 || level > D.level) throw PrecisionError("reduce_display: invalid target level");
  auto red = [&](const WittVec& x) { return reduce_vec(x, level); };
  std::optional<WMatrix> Fp;
  if (D.Fprime) Fp = D.Fprime->map(red);
  return DDisplay{D.frame, level, D.L, D.d, D.c, D.B.map(red), std::move(Fp)};
}

DisplayReport validate_display(const DDisplay& D) {
  DisplayReport report;
  const int h = D.h();
  if (D.B.rows() != h || D.B.cols() != h) {
    report.violations.push_back("B has the wrong shape");
    return report;
  }
  if (!D.B.det().is_unit()) report.violations.push_back("det(B) is not a unit");

  const RingPtr ring = D.B(0, 0).ring();
  const WittVec pw = WittVec::integer(ring, static_cast<long long>(D.frame.p()), D.L);
  if (wfrob(wver(WittVec::one(ring, D.L))) != pw) report.violations.push_back("F(V(1)) != p");
  if (D.Fprime) {
    const WMatrix& F = *D.Fprime;
    for (int j = 0; j < h; ++j) {
      for (int i = 0; i < h; ++i) {
        const WittVec expected = j < D.d ? D.B(i, j) : pw * D.B(i, j);
        if (F(i, j) != expected) {
          report.violations.push_back(j < D.d ? "F' differs from B on J-column " + std::to_string(j)
                                              : "F'(y) != p*F'_1(y) on L-column " + std::to_string(j));
          break;
        }
      }
    }
  }
  return report;
}

int display_lie(const DDisplay& D) { return D.d; }

std::string to_string(const WMatrix& M) {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < M.rows(); ++i) {
    if (i) os << ", ";
    os << "[";
    for (int j = 0; j < M.cols(); ++j) {
      if (j) os << ", ";
      os << to_string(M(i, j));
    }
    os << "]";
  }
  os << "]";
  return os.str();
}

}  // namespace breuil
