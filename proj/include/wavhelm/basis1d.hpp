#ifndef WAVHELM_BASIS1D_HPP
#define WAVHELM_BASIS1D_HPP

#include <vector>

#include "wavhelm/spline.hpp"

namespace wavhelm {

enum class FunctionKind { Scaling, Wavelet };

/// Index lambda = (j,k) of a 1D basis function; k in I_j = {1,...,2^j}.
struct FunctionIndex {
  int level;
  FunctionKind kind;
  int position;

  friend bool operator==(const FunctionIndex&, const FunctionIndex&) = default;
};

enum class Normalization { None, L2, H1Seminorm };

/// Multiscale basis on (0,1): scaling functions at the coarsest level j0
/// followed by s wavelet levels j0, ..., j0+s-1.
struct BasisSpec1D {
  int j0 = 2;
  int s = 0;
  bool ortho = false;  // orthogonalize the coarsest scaling block
  Normalization normalization = Normalization::None;

  int finestLevel() const { return j0 + s; }
  Eigen::Index dimension() const { return Eigen::Index(1) << (j0 + s); }
};

/// phi_{j,k} restricted to [0,1]; vanishes at both endpoints.
PiecewisePoly scalingFunction(int j, int k);
/// psi_{j,k}; k=1 and k=2^j are the (mirrored, sign-flipped) boundary wavelets.
PiecewisePoly waveletFunction(int j, int k);
/// Materialize an arbitrary index.
PiecewisePoly basisFunction(const FunctionIndex& idx);

/// Deterministic ordering: scaling block (k ascending), then wavelet levels
/// ascending, k ascending.
std::vector<FunctionIndex> enumerateBasis(const BasisSpec1D& spec);

/// (||u||_L2^2, |u|_H1^2) for the raw (unnormalized) basis function.
/// Values are cached per shape; the dilation scaling is exact.
std::pair<double, double> norms(const FunctionIndex& idx);

}  // namespace wavhelm

#endif
