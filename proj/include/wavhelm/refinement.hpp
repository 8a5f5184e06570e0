#ifndef WAVHELM_REFINEMENT_HPP
#define WAVHELM_REFINEMENT_HPP

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <functional>
#include <vector>

#include "wavhelm/basis1d.hpp"

namespace wavhelm {

using SpMat = Eigen::SparseMatrix<double>;

/// Primal refinement matrices: Phi_j = m0^T Phi_{j+1}, Psi_j = m1^T Phi_{j+1}.
struct RefinementPair {
  SpMat m0;  // 2^{j+1} x 2^j, bordered band
  SpMat m1;  // 2^{j+1} x 2^j, two nonzeros per column
  int level;
};

RefinementPair primalMatrices(int j);

/// Dense dual matrices satisfying M_{j,0}^T Mt0 = I, M_{j,1}^T Mt0 = 0 and
/// M_{j,0}^T Mt1 = 0, M_{j,1}^T Mt1 = I. Computed exactly through the
/// tridiagonal pair-reduced system; row 2k-1 equals row 2k in Mt0.
Eigen::MatrixXd dualM0(int j);
Eigen::MatrixXd dualM1(int j);

/// The published closed-form entries for dualM0. Asymptotic in 2^j: the
/// interior coupling coefficients ignore terms of order a^{-2^{j+1}}, so the
/// result only satisfies biorthogonality up to that error (exact route above).
Eigen::MatrixXd dualM0ClosedForm(int j);

/// c_{j+1} = m0 c_j + m1 d_j.
Eigen::VectorXd reconstruct(const RefinementPair& pair, const Eigen::VectorXd& c,
                            const Eigen::VectorXd& d);
/// (c_j, d_j) from c_{j+1} via the dual matrices.
std::pair<Eigen::VectorXd, Eigen::VectorXd> decompose(int j, const Eigen::VectorXd& fine);

/// 1D cascade between multiscale coefficients (ordered per enumerateBasis)
/// and single-scale coefficients at level j0+s. Holds the per-level primal
/// matrices; synthesize/synthesizeTranspose are O(N).
class MultiscaleTransform1D {
 public:
  explicit MultiscaleTransform1D(const BasisSpec1D& spec);

  Eigen::VectorXd synthesize(const Eigen::VectorXd& multiscale) const;
  Eigen::VectorXd synthesizeTranspose(const Eigen::VectorXd& singleScale) const;

  const BasisSpec1D& spec() const { return spec_; }
  const RefinementPair& levelPair(int j) const { return pairs_.at(j - spec_.j0); }
  /// Coarsest-block orthogonalization transform (identity if !spec.ortho).
  const Eigen::MatrixXd& coarsestTransform() const { return orthoT_; }

 private:
  BasisSpec1D spec_;
  std::vector<RefinementPair> pairs_;
  Eigen::MatrixXd orthoT_;
};

/// Spectral norm by power iteration on M^T M (deterministic all-ones start).
double spectralNorm(const Eigen::MatrixXd& m, double tol = 1e-10, int maxit = 10000);

/// Numerical checks of the dual-matrix norm bounds used in the Riesz-basis
/// argument.
struct LemmaReport {
  std::vector<double> dualNorms;        // ||Mt_{j,0}||_2, j = 2..jmax
  std::vector<double> pairSumNorms;     // ||St_j||_2, j = 3..jmax-1
  std::vector<double> productNorms;     // ||Mt^T_{2,0}...Mt^T_{n-1,0}||, n = 3..jmax
  double fittedExponent;                // least-squares slope of log2(productNorms)
  bool dualNormsOk;                     // all <= 2.8
  bool pairSumOk;                       // all < 2*sqrt(2)
  bool exponentOk;                      // fitted p < 0.5
};

LemmaReport verifyNormLemmas(int jmax);

}  // namespace wavhelm

#endif
