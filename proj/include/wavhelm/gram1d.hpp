#ifndef WAVHELM_GRAM1D_HPP
#define WAVHELM_GRAM1D_HPP

#include <Eigen/Dense>

#include "wavhelm/basis1d.hpp"

namespace wavhelm {

/// Symmetric band matrix, stored as (bandwidth+1) diagonals:
/// bands(d, i) = A(i, i+d) for 0 <= d <= bandwidth, i+d < n.
class BandMatrix {
 public:
  BandMatrix() = default;
  BandMatrix(Eigen::Index n, int bandwidth)
      : n_(n), bw_(bandwidth), bands_(Eigen::MatrixXd::Zero(bandwidth + 1, n)) {}

  Eigen::Index size() const { return n_; }
  int bandwidth() const { return bw_; }

  double operator()(Eigen::Index i, Eigen::Index j) const {
    Eigen::Index lo = std::min(i, j), d = std::max(i, j) - lo;
    return d > bw_ ? 0.0 : bands_(d, lo);
  }
  double& at(Eigen::Index i, Eigen::Index j) {
    Eigen::Index lo = std::min(i, j), d = std::max(i, j) - lo;
    return bands_(d, lo);
  }

  Eigen::VectorXd operator*(const Eigen::VectorXd& x) const;

  /// y(i,:) = sum_d A(i,i+d) x(i+d,:) for row-major matrices (used by the
  /// tensor operator to sweep one axis of a d-dimensional array).
  void applyToRows(const Eigen::Ref<const Eigen::Matrix<double, Eigen::Dynamic,
                                                        Eigen::Dynamic, Eigen::RowMajor>>& x,
                   Eigen::Ref<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                            Eigen::RowMajor>> y) const;

  Eigen::MatrixXd dense() const;

 private:
  Eigen::Index n_ = 0;
  int bw_ = 0;
  Eigen::MatrixXd bands_;
};

/// <phi_{j,k}, phi_{j,l}>; symmetric positive definite, bandwidth 2.
BandMatrix massMatrix(int j);
/// <phi'_{j,k}, phi'_{j,l}>.
BandMatrix stiffnessMatrix(int j);
/// U_j = <Psi_j, Psi_j>, tridiagonal.
BandMatrix waveletGram(int j);

/// T with T^T Gram(Phi_{j0}) T = I (inverse transposed Cholesky factor).
Eigen::MatrixXd orthogonalizeCoarsest(int j0);

}  // namespace wavhelm

#endif
