#ifndef WAVHELM_TENSOR_OPERATOR_HPP
#define WAVHELM_TENSOR_OPERATOR_HPP

#include <array>
#include <vector>

#include "wavhelm/gram1d.hpp"
#include "wavhelm/refinement.hpp"

namespace wavhelm {

/// Index of a tensor-product basis function on (0,1)^dim.
///
/// type is a bitmask over axes: bit l set means the factor along axis l is a
/// wavelet at `level`, clear means a scaling function at `level`. type == 0
/// only occurs in the coarsest block (level == j0). Block ordering: coarsest
/// scaling block first, then levels ascending, type = 1..2^dim-1 ascending,
/// positions lexicographic with axis 0 slowest (row-major).
struct TensorIndex {
  int level;
  unsigned type;
  std::array<int, 3> k;  // 1-based positions; unused axes hold 1
  int dim;

  friend bool operator==(const TensorIndex&, const TensorIndex&) = default;
};

std::vector<TensorIndex> enumerateTensor(int dim, const BasisSpec1D& spec);

/// Matrix-free Galerkin matrix of -eps*Laplace(u) + a*u on (0,1)^dim in the
/// isotropic multiscale basis, with optional symmetric diagonal scaling.
/// Applications run through the fast wavelet transform and banded
/// single-scale sweeps: O(N) per apply up to the dense coarsest block.
class HelmholtzOperator {
 public:
  HelmholtzOperator(int dim, double eps, double a, const BasisSpec1D& spec);

  int dim() const { return dim_; }
  double eps() const { return eps_; }
  double reaction() const { return a_; }
  const BasisSpec1D& spec() const { return transform_.spec(); }
  Eigen::Index size() const { return size_; }

  /// A x in multiscale coordinates.
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  /// D^{-1/2} A D^{-1/2} x.
  Eigen::VectorXd applyPreconditioned(const Eigen::VectorXd& x) const;

  /// Exact diagonal of A, assembled from 1D factor norms.
  const Eigen::VectorXd& diagonal() const { return diag_; }

  /// Multiscale -> single-scale coefficients at level j0+s (flat row-major
  /// over the dim-dimensional grid) and the transpose map.
  Eigen::VectorXd synthesize(const Eigen::VectorXd& multiscale) const;
  Eigen::VectorXd synthesizeTranspose(const Eigen::VectorXd& singleScale) const;

 private:
  Eigen::VectorXd applySingleScale(const Eigen::VectorXd& c) const;

  int dim_;
  double eps_, a_;
  MultiscaleTransform1D transform_;
  Eigen::Index size_;
  BandMatrix mass_, stiffness_;
  Eigen::VectorXd diag_, invSqrtDiag_;
};

}  // namespace wavhelm

#endif
