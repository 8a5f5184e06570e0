#ifndef WAVHELM_SOLVER_HPP
#define WAVHELM_SOLVER_HPP

#include <functional>
#include <vector>

#include "wavhelm/tensor_operator.hpp"

namespace wavhelm {

using ApplyFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct CGReport {
  Eigen::VectorXd x;
  int iterations = 0;
  std::vector<double> residualHistory;  // ||r||_2 after each iteration
  bool converged = false;
};

/// Plain CG; terminates when ||r||_2 <= tol (absolute). If stopWeights is
/// non-empty the stopping quantity (and residualHistory) is the weighted norm
/// ||w .* r||_2 instead; the iteration itself is unchanged.
CGReport conjugateGradient(const ApplyFn& applyA, const Eigen::VectorXd& b,
                           const Eigen::VectorXd& x0, double tol, int maxit,
                           const Eigen::VectorXd& stopWeights = Eigen::VectorXd());

struct EigenEstimate {
  double lambdaMin = 0.0;
  double lambdaMax = 0.0;
  int applications = 0;  // number of operator applies
  bool converged = false;
};

/// Extreme eigenvalues of a symmetric operator by thick-restart Lanczos with
/// full reorthogonalization and a deterministic all-ones start vector.
/// Residual-based stop: both extreme Ritz pairs to relative tolerance tol.
EigenEstimate extremeEigenvalues(const ApplyFn& applyA, Eigen::Index n,
                                 double tol = 1e-6, int maxit = 1500,
                                 int basisSize = 120, int keepPerEnd = 10);

/// cond_2 of the diagonally preconditioned Galerkin matrix.
EigenEstimate conditionEstimate(const HelmholtzOperator& op, double tol = 1e-6,
                                int maxit = 1500);

struct MultilevelLevel {
  int s;             // number of wavelet levels in the sub-basis
  Eigen::Index n;    // unknowns
  int iterations;    // CG iterations M_j
  double residualNorm;
};

struct MultilevelReport {
  std::vector<MultilevelLevel> levels;
  Eigen::VectorXd solution;      // preconditioned multiscale coeffs at the target level
  double equivalentIterations;   // M = sum_j M_j / 4^(s-j)
  bool converged = true;
};

/// Nested iteration: for j = 0..s solve the level-j Galerkin system by CG,
/// warm-started with the zero-padded previous solution; every level uses the
/// final-level tolerance 1e-4 * 2^(-2s). The stopping quantity is the
/// preconditioned residual rescaled to the coarsest-level magnitude: level-j
/// wavelet components of r carry weight 2^-(j-j0+1), mirroring the diagonal
/// Jacobi scaling between the energy-normalized and L2-normalized frames.
MultilevelReport multilevelGalerkin(
    int dim, double eps, double a, const BasisSpec1D& base, int s,
    const std::function<Eigen::VectorXd(const HelmholtzOperator&)>& rhs,
    int maxit = 100000);

}  // namespace wavhelm

#endif
