#include "wavhelm/solver.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace wavhelm {

CGReport conjugateGradient(const ApplyFn& applyA, const Eigen::VectorXd& b,
                           const Eigen::VectorXd& x0, double tol, int maxit,
                           const Eigen::VectorXd& stopWeights) {
  const bool weighted = stopWeights.size() > 0;
  const auto stopNorm = [&](const Eigen::VectorXd& r) {
    return weighted ? stopWeights.cwiseProduct(r).norm() : r.norm();
  };
  CGReport rep;
  rep.x = x0;
  Eigen::VectorXd r = b - applyA(rep.x);
  double rn = stopNorm(r);
  if (rn <= tol) {
    rep.converged = true;
    rep.residualHistory.push_back(rn);
    return rep;
  }
  Eigen::VectorXd p = r;
  double rsq = r.squaredNorm();
  for (int it = 0; it < maxit; ++it) {
    Eigen::VectorXd ap = applyA(p);
    double alpha = rsq / p.dot(ap);
    rep.x += alpha * p;
    r -= alpha * ap;
    double rsqNew = r.squaredNorm();
    ++rep.iterations;
    rep.residualHistory.push_back(weighted ? stopNorm(r) : std::sqrt(rsqNew));
    if (rep.residualHistory.back() <= tol) {
      rep.converged = true;
      return rep;
    }
    p = r + (rsqNew / rsq) * p;
    rsq = rsqNew;
  }
  return rep;
}

EigenEstimate extremeEigenvalues(const ApplyFn& applyA, Eigen::Index n, double tol,
                                 int maxit, int basisSize, int keepPerEnd) {
  EigenEstimate est;
  const int m = std::min<Eigen::Index>(basisSize, n);
  Eigen::MatrixXd v(n, m + 1);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, m + 1);
  v.col(0) = Eigen::VectorXd::Ones(n) / std::sqrt(double(n));
  int k = 0;  // columns carried over from the previous cycle

  while (est.applications < maxit) {
    int j = k;
    double beta = 0.0;
    for (; j < m && est.applications < maxit; ++j) {
      Eigen::VectorXd w = applyA(v.col(j));
      ++est.applications;
      // full reorthogonalization (twice for safety)
      Eigen::VectorXd h = v.leftCols(j + 1).transpose() * w;
      w.noalias() -= v.leftCols(j + 1) * h;
      Eigen::VectorXd h2 = v.leftCols(j + 1).transpose() * w;
      w.noalias() -= v.leftCols(j + 1) * h2;
      h += h2;
      t.col(j).head(j + 1) = h;
      t.row(j).head(j + 1) = h.transpose();
      beta = w.norm();
      if (beta < 1e-14) break;  // invariant subspace found
      t(j + 1, j) = t(j, j + 1) = beta;
      v.col(j + 1) = w / beta;
    }
    const int dim = j;  // Lanczos basis size this cycle
    if (dim == 0) break;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t.topLeftCorner(dim, dim));
    const Eigen::VectorXd& theta = es.eigenvalues();
    const Eigen::MatrixXd& s = es.eigenvectors();
    est.lambdaMin = theta(0);
    est.lambdaMax = theta(dim - 1);
    double scale = std::max(std::abs(est.lambdaMin), std::abs(est.lambdaMax));
    double rLo = beta * std::abs(s(dim - 1, 0));
    double rHi = beta * std::abs(s(dim - 1, dim - 1));
    if ((rLo <= tol * scale && rHi <= tol * scale) || beta < 1e-14 || dim >= n) {
      est.converged = true;
      return est;
    }
    // thick restart: keep Ritz vectors at both spectrum ends
    int keep = std::min(2 * keepPerEnd, dim - 1);
    Eigen::MatrixXd sel(dim, keep);
    for (int i = 0; i < keep / 2; ++i) sel.col(i) = s.col(i);
    for (int i = keep / 2; i < keep; ++i) sel.col(i) = s.col(dim - keep + i);
    Eigen::MatrixXd kept = v.leftCols(dim) * sel;
    Eigen::VectorXd resid = v.col(dim);  // normalized residual vector
    v.leftCols(keep) = kept;
    v.col(keep) = resid;
    t.setZero();
    for (int i = 0; i < keep / 2; ++i) t(i, i) = theta(i);
    for (int i = keep / 2; i < keep; ++i) t(i, i) = theta(dim - keep + i);
    for (int i = 0; i < keep; ++i)
      t(keep, i) = t(i, keep) = beta * sel(dim - 1, i);
    k = keep;
  }
  return est;
}

EigenEstimate conditionEstimate(const HelmholtzOperator& op, double tol, int maxit) {
  return extremeEigenvalues(
      [&op](const Eigen::VectorXd& x) { return op.applyPreconditioned(x); }, op.size(),
      tol, maxit);
}

MultilevelReport multilevelGalerkin(
    int dim, double eps, double a, const BasisSpec1D& base, int s,
    const std::function<Eigen::VectorXd(const HelmholtzOperator&)>& rhs, int maxit) {
  MultilevelReport rep;
  const double tol = 1e-4 * std::pow(2.0, -2.0 * s);
  Eigen::VectorXd prev;
  for (int j = 0; j <= s; ++j) {
    BasisSpec1D spec = base;
    spec.s = j;
    HelmholtzOperator op(dim, eps, a, spec);
    Eigen::VectorXd b = rhs(op);
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(op.size());
    if (j > 0) x0.head(prev.size()) = prev;
    CGReport cgr = conjugateGradient(
        [&op](const Eigen::VectorXd& x) { return op.applyPreconditioned(x); }, b, x0,
        tol, maxit);
    rep.levels.push_back({j, op.size(), cgr.iterations,
                          cgr.residualHistory.empty() ? 0.0 : cgr.residualHistory.back()});
    rep.converged = rep.converged && cgr.converged;
    prev = std::move(cgr.x);
  }
  rep.solution = prev;
  double m = 0.0;
  for (const MultilevelLevel& lv : rep.levels) m += lv.iterations / std::pow(4.0, s - lv.s);
  rep.equivalentIterations = m;
  return rep;
}

}  // namespace wavhelm
