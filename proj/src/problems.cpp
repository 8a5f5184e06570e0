#include "wavhelm/problems.hpp"

#include <cmath>
#include <vector>

namespace wavhelm {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::VectorXd applyAlongAxis(const SpMat& m, const Eigen::VectorXd& x,
                               std::array<Eigen::Index, 3>& dims, int dim, int axis) {
  const Eigen::Index n = dims[axis], nOut = m.rows();
  Eigen::Index pre = 1, post = 1;
  for (int l = 0; l < axis; ++l) pre *= dims[l];
  for (int l = axis + 1; l < dim; ++l) post *= dims[l];
  Eigen::VectorXd y(pre * nOut * post);
  for (Eigen::Index p = 0; p < pre; ++p) {
    Eigen::Map<const RowMat> xin(x.data() + p * n * post, n, post);
    Eigen::Map<RowMat> yout(y.data() + p * nOut * post, nOut, post);
    yout = m * xin;
  }
  dims[axis] = nOut;
  return y;
}

/// Collocation matrix B(i,k) = phi_{j,k}(pts(i)); at most 3 nonzeros per row.
SpMat collocationMatrix(int j, const Eigen::VectorXd& pts) {
  const int n = 1 << j;
  std::vector<PiecewisePoly> basis;
  basis.reserve(n);
  for (int k = 1; k <= n; ++k) basis.push_back(scalingFunction(j, k));
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(3 * pts.size());
  for (Eigen::Index i = 0; i < pts.size(); ++i) {
    double x = pts(i);
    int c = std::min(n - 1, std::max(0, int(std::floor(x * n))));
    for (int k = std::max(1, c); k <= std::min(n, c + 2); ++k) {
      double val = basis[k - 1](x);
      if (val != 0.0) trips.emplace_back(i, k - 1, val);
    }
  }
  SpMat b(pts.size(), n);
  b.setFromTriplets(trips.begin(), trips.end());
  return b;
}

/// Values of the spline expansion with single-scale coefficients c at the
/// tensor grid pts x ... x pts (flat, row-major).
Eigen::VectorXd evaluateOnGrid(const Eigen::VectorXd& c, int j, int dim,
                               const Eigen::VectorXd& pts) {
  SpMat b = collocationMatrix(j, pts);
  std::array<Eigen::Index, 3> dims{1, 1, 1};
  for (int l = 0; l < dim; ++l) dims[l] = Eigen::Index(1) << j;
  Eigen::VectorXd vals = c;
  for (int l = 0; l < dim; ++l) vals = applyAlongAxis(b, vals, dims, dim, l);
  return vals;
}

/// out(flat) = prod_l g(idx_l) over the dim-dimensional row-major grid.
Eigen::VectorXd tensorProduct(const Eigen::VectorXd& g, int dim) {
  const Eigen::Index n = g.size();
  Eigen::VectorXd out = g;
  for (int l = 1; l < dim; ++l) {
    Eigen::VectorXd next(out.size() * n);
    for (Eigen::Index i = 0; i < out.size(); ++i)
      next.segment(i * n, n) = out(i) * g;
    out = std::move(next);
  }
  return out;
}

}  // namespace

ManufacturedProblem boundaryLayerProblem(int dim, double eps, double a) {
  ManufacturedProblem p;
  p.dim = dim;
  p.eps = eps;
  p.a = a;
  p.v = [](double x) { return x * (1.0 - std::exp(50.0 * x - 50.0)); };
  p.dv = [](double x) {
    return 1.0 - (1.0 + 50.0 * x) * std::exp(50.0 * x - 50.0);
  };
  p.ddv = [](double x) {
    return -(100.0 + 2500.0 * x) * std::exp(50.0 * x - 50.0);
  };
  return p;
}

ManufacturedProblem polynomialProblem(int dim, double eps, double a) {
  ManufacturedProblem p;
  p.dim = dim;
  p.eps = eps;
  p.a = a;
  p.v = [](double x) { return x * (1.0 - x); };
  p.dv = [](double x) { return 1.0 - 2.0 * x; };
  p.ddv = [](double) { return -2.0; };
  return p;
}

Eigen::VectorXd rhsLoadVector(const ManufacturedProblem& p, const HelmholtzOperator& op,
                              int nodesPerCell) {
  if (p.dim != op.dim()) throw std::invalid_argument("rhsLoadVector: dimension mismatch");
  const int j = op.spec().finestLevel();
  const Eigen::Index n = Eigen::Index(1) << j;
  Eigen::VectorXd gv(n), gw(n);
  for (int k = 1; k <= n; ++k) {
    PiecewisePoly phi = scalingFunction(j, k);
    gv(k - 1) = integrateAgainst(p.v, phi, nodesPerCell);
    gw(k - 1) = integrateAgainst(p.ddv, phi, nodesPerCell);
  }
  // <f, Phi^d> = a * prod gv - eps * sum_i gw_i prod_{l != i} gv_l
  Eigen::Index total = 1;
  for (int l = 0; l < p.dim; ++l) total *= n;
  Eigen::VectorXd ss(total);
  std::array<Eigen::Index, 3> k{0, 0, 0};
  for (Eigen::Index flat = 0; flat < total; ++flat) {
    double vProd = 1.0;
    for (int l = 0; l < p.dim; ++l) vProd *= gv(k[l]);
    double val = p.a * vProd;
    for (int i = 0; i < p.dim; ++i) {
      double t = gw(k[i]);
      for (int l = 0; l < p.dim; ++l)
        if (l != i) t *= gv(k[l]);
      val -= p.eps * t;
    }
    ss(flat) = val;
    int l = p.dim - 1;
    while (l >= 0 && ++k[l] == n) k[l--] = 0;
  }
  Eigen::VectorXd ms = op.synthesizeTranspose(ss);
  return ms.cwiseQuotient(op.diagonal().cwiseSqrt());
}

ErrorNorms errorNorms(const HelmholtzOperator& op, const Eigen::VectorXd& preconCoeffs,
                      const ManufacturedProblem& p, int gridExp, int l2CellExp) {
  const BasisSpec1D& spec = op.spec();
  const int j = spec.finestLevel();
  if (gridExp <= 0) gridExp = op.dim() == 3 ? j + 2 : std::max(j + 2, 12);
  if (l2CellExp <= 0) l2CellExp = j;
  Eigen::VectorXd coeffs = preconCoeffs.cwiseQuotient(op.diagonal().cwiseSqrt());
  Eigen::VectorXd c = op.synthesize(coeffs);

  ErrorNorms norms{0.0, 0.0};
  {
    const Eigen::Index npts = (Eigen::Index(1) << gridExp) + 1;
    Eigen::VectorXd pts = Eigen::VectorXd::LinSpaced(npts, 0.0, 1.0);
    Eigen::VectorXd vals = evaluateOnGrid(c, j, op.dim(), pts);
    Eigen::VectorXd vAxis(npts);
    for (Eigen::Index i = 0; i < npts; ++i) vAxis(i) = p.v(pts(i));
    Eigen::VectorXd exact = tensorProduct(vAxis, op.dim());
    norms.linf = (vals - exact).cwiseAbs().maxCoeff();
  }
  {
    const QuadratureRule& q = QuadratureRule::gaussLegendre(5);
    const Eigen::Index cells = Eigen::Index(1) << l2CellExp;
    const double h = 1.0 / double(cells);
    Eigen::VectorXd pts(cells * q.order), w(cells * q.order);
    for (Eigen::Index cidx = 0; cidx < cells; ++cidx)
      for (int g = 0; g < q.order; ++g) {
        pts(cidx * q.order + g) = (double(cidx) + q.nodes(g)) * h;
        w(cidx * q.order + g) = q.weights(g) * h;
      }
    Eigen::VectorXd vals = evaluateOnGrid(c, j, op.dim(), pts);
    Eigen::VectorXd vAxis(pts.size());
    for (Eigen::Index i = 0; i < pts.size(); ++i) vAxis(i) = p.v(pts(i));
    Eigen::VectorXd exact = tensorProduct(vAxis, op.dim());
    Eigen::VectorXd wT = tensorProduct(w, op.dim());
    norms.l2 = std::sqrt(wT.dot((vals - exact).cwiseAbs2()));
  }
  return norms;
}

}  // namespace wavhelm
