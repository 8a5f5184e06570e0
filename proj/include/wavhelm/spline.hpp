#ifndef WAVHELM_SPLINE_HPP
#define WAVHELM_SPLINE_HPP

#include <Eigen/Core>
#include <functional>
#include <utility>
#include <vector>

namespace wavhelm {

/// Fixed-order Gauss-Legendre rule on the reference interval [0,1].
struct QuadratureRule {
  Eigen::VectorXd nodes;    // in (0,1)
  Eigen::VectorXd weights;  // sum to 1
  int order = 0;            // exact for polynomials up to degree 2*order-1

  static const QuadratureRule& gaussLegendre(int order);
};

/// Piecewise polynomial of degree <= 2 on a strictly increasing breakpoint
/// grid. Piece i lives on [breaks[i], breaks[i+1]] with coefficients in the
/// shifted monomial basis centered at the left breakpoint:
///   p(x) = c0 + c1*(x - breaks[i]) + c2*(x - breaks[i])^2.
/// The value outside [breaks.front(), breaks.back()] is exactly 0.
class PiecewisePoly {
 public:
  PiecewisePoly() = default;
  PiecewisePoly(Eigen::VectorXd breaks, Eigen::MatrixX3d coef);

  double operator()(double x) const;

  double supportBegin() const { return breaks_(0); }
  double supportEnd() const { return breaks_(breaks_.size() - 1); }
  Eigen::Index pieceCount() const { return coef_.rows(); }
  const Eigen::VectorXd& breakpoints() const { return breaks_; }
  const Eigen::MatrixX3d& coefficients() const { return coef_; }

  /// Piecewise-linear derivative on the same breakpoints. Jumps at
  /// breakpoints are ignored; the result represents the a.e. derivative.
  PiecewisePoly derivative() const;

  /// Returns scale * p(a*x + b), a != 0. Mirroring (a < 0) is supported.
  PiecewisePoly affine(double a, double b, double scale) const;

  /// Linear combination on the merged breakpoint grid.
  static PiecewisePoly combine(
      const std::vector<std::pair<double, const PiecewisePoly*>>& terms);

 private:
  Eigen::VectorXd breaks_;
  Eigen::MatrixX3d coef_;
};

/// Quadratic B-spline on knots [0,1,2,3].
const PiecewisePoly& motherScaling();
/// Boundary quadratic B-spline on knots [0,0,1,2].
const PiecewisePoly& boundaryScaling();
/// psi(x) = -phi(2x-1)/2 + phi(2x-2)/2, support [0.5, 2.5].
const PiecewisePoly& motherWavelet();
/// psi_b(x) = -phi_b(2x)/2 + phi(2x)/2, support [0, 1.5].
const PiecewisePoly& boundaryWavelet();

/// Exact integral of p over its support.
double integrate(const PiecewisePoly& p);

/// Exact integral of p*q over the intersection of supports (Gauss rule on
/// the merged breakpoint grid; returns 0 for disjoint supports).
double integrateProduct(const PiecewisePoly& p, const PiecewisePoly& q);

/// Integral of f*p with a composite Gauss rule (nodesPerPiece nodes on each
/// polynomial piece of p). Used for load vectors with smooth f.
double integrateAgainst(const std::function<double(double)>& f,
                        const PiecewisePoly& p, int nodesPerPiece = 10);

}  // namespace wavhelm

#endif
