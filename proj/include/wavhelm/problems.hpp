#ifndef WAVHELM_PROBLEMS_HPP
#define WAVHELM_PROBLEMS_HPP

#include <functional>

#include "wavhelm/tensor_operator.hpp"

namespace wavhelm {

/// Separable manufactured solution u(x) = prod_l v(x_l) of
/// -eps*Laplace(u) + a*u = f on (0,1)^dim with u = 0 on the boundary.
struct ManufacturedProblem {
  int dim = 1;
  double eps = 1.0;
  double a = 0.0;
  std::function<double(double)> v, dv, ddv;

  double u(const std::array<double, 3>& x) const {
    double p = 1.0;
    for (int l = 0; l < dim; ++l) p *= v(x[l]);
    return p;
  }
  double f(const std::array<double, 3>& x) const {
    double lap = 0.0;
    for (int i = 0; i < dim; ++i) {
      double t = ddv(x[i]);
      for (int l = 0; l < dim; ++l)
        if (l != i) t *= v(x[l]);
      lap += t;
    }
    return -eps * lap + a * u(x);
  }
};

/// v(x) = x(1 - e^{50x-50}): boundary layer of width ~1/50 at x = 1.
ManufacturedProblem boundaryLayerProblem(int dim, double eps, double a);
/// v(x) = x(1-x): lies in every spline space V_j exactly.
ManufacturedProblem polynomialProblem(int dim, double eps, double a);

/// Preconditioned load vector D^{-1/2} <f, Psi>: per-axis composite Gauss
/// quadrature (nodesPerCell nodes per finest-level cell), tensorized, then
/// pushed through the transpose synthesis cascade.
Eigen::VectorXd rhsLoadVector(const ManufacturedProblem& p, const HelmholtzOperator& op,
                              int nodesPerCell = 10);

struct ErrorNorms {
  double linf;
  double l2;
};

/// Error of the expansion given by preconditioned multiscale coefficients
/// against the exact u. L-infinity on a uniform tensor grid with
/// 2^gridExp + 1 points per axis; L2 by composite 5-node Gauss per finest
/// cell. gridExp = 0 picks max(j0+s+2, 12) (j0+s+2 in 3D). l2CellExp
/// overrides the number of quadrature cells per axis (2^l2CellExp; 0 = one
/// cell per finest-level mesh cell, which makes the quadrature exact).
ErrorNorms errorNorms(const HelmholtzOperator& op, const Eigen::VectorXd& preconCoeffs,
                      const ManufacturedProblem& p, int gridExp = 0, int l2CellExp = 0);

}  // namespace wavhelm

#endif
