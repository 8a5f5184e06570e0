#include "wavhelm/basis1d.hpp"

#include <cmath>
#include <stdexcept>

namespace wavhelm {

namespace {

void checkIndex(int j, int k) {
  if (j < 2) throw std::out_of_range("basis1d: level must be >= 2");
  if (k < 1 || k > (1 << j)) throw std::out_of_range("basis1d: position out of range");
}

}  // namespace

PiecewisePoly scalingFunction(int j, int k) {
  checkIndex(j, k);
  const int n = 1 << j;
  const double two_j = std::ldexp(1.0, j);
  const double scale = std::sqrt(two_j);
  if (k == 1) return boundaryScaling().affine(two_j, 0.0, scale);
  if (k == n) return boundaryScaling().affine(-two_j, two_j, scale);
  return motherScaling().affine(two_j, 2.0 - k, scale);
}

PiecewisePoly waveletFunction(int j, int k) {
  checkIndex(j, k);
  const int n = 1 << j;
  const double two_j = std::ldexp(1.0, j);
  const double scale = std::sqrt(two_j);
  if (k == 1) return boundaryWavelet().affine(two_j, 0.0, scale);
  if (k == n) return boundaryWavelet().affine(-two_j, two_j, -scale);
  return motherWavelet().affine(two_j, 2.0 - k, scale);
}

PiecewisePoly basisFunction(const FunctionIndex& idx) {
  return idx.kind == FunctionKind::Scaling ? scalingFunction(idx.level, idx.position)
                                           : waveletFunction(idx.level, idx.position);
}

std::vector<FunctionIndex> enumerateBasis(const BasisSpec1D& spec) {
  std::vector<FunctionIndex> out;
  out.reserve(spec.dimension());
  for (int k = 1; k <= (1 << spec.j0); ++k)
    out.push_back({spec.j0, FunctionKind::Scaling, k});
  for (int j = spec.j0; j < spec.j0 + spec.s; ++j)
    for (int k = 1; k <= (1 << j); ++k)
      out.push_back({j, FunctionKind::Wavelet, k});
  return out;
}

std::pair<double, double> norms(const FunctionIndex& idx) {
  // All basis functions are 2^{j/2} m(2^j x + c) for one of four mother
  // shapes, so ||.||^2 is level-invariant and |.|_H1^2 scales by 4^j.
  struct ShapeNorms {
    double l2, h1;
  };
  static const ShapeNorms tab[4] = {
      [] {  // interior scaling
        const PiecewisePoly& p = motherScaling();
        return ShapeNorms{integrateProduct(p, p),
                          integrateProduct(p.derivative(), p.derivative())};
      }(),
      [] {  // boundary scaling
        const PiecewisePoly& p = boundaryScaling();
        return ShapeNorms{integrateProduct(p, p),
                          integrateProduct(p.derivative(), p.derivative())};
      }(),
      [] {  // interior wavelet
        const PiecewisePoly& p = motherWavelet();
        return ShapeNorms{integrateProduct(p, p),
                          integrateProduct(p.derivative(), p.derivative())};
      }(),
      [] {  // boundary wavelet
        const PiecewisePoly& p = boundaryWavelet();
        return ShapeNorms{integrateProduct(p, p),
                          integrateProduct(p.derivative(), p.derivative())};
      }(),
  };
  checkIndex(idx.level, idx.position);
  const int n = 1 << idx.level;
  const bool boundary = (idx.position == 1 || idx.position == n);
  int row = (idx.kind == FunctionKind::Scaling ? 0 : 2) + (boundary ? 1 : 0);
  double h1scale = std::ldexp(1.0, 2 * idx.level);
  return {tab[row].l2, tab[row].h1 * h1scale};
}

}  // namespace wavhelm
