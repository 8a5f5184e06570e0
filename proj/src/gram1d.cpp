#include "wavhelm/gram1d.hpp"

#include <Eigen/Cholesky>
#include <cmath>

namespace wavhelm {

Eigen::VectorXd BandMatrix::operator*(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n_);
  y.array() = bands_.row(0).transpose().array() * x.array();
  for (int d = 1; d <= bw_; ++d) {
    Eigen::Index m = n_ - d;
    y.head(m) += bands_.row(d).head(m).transpose().cwiseProduct(x.tail(m));
    y.tail(m) += bands_.row(d).head(m).transpose().cwiseProduct(x.head(m));
  }
  return y;
}

void BandMatrix::applyToRows(
    const Eigen::Ref<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                         Eigen::RowMajor>>& x,
    Eigen::Ref<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> y)
    const {
  for (Eigen::Index i = 0; i < n_; ++i) {
    y.row(i) = bands_(0, i) * x.row(i);
    for (int d = 1; d <= bw_; ++d) {
      if (i + d < n_) y.row(i) += bands_(d, i) * x.row(i + d);
      if (i >= d) y.row(i) += bands_(d, i - d) * x.row(i - d);
    }
  }
}

Eigen::MatrixXd BandMatrix::dense() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
  for (Eigen::Index i = 0; i < n_; ++i)
    for (int d = 0; d <= bw_ && i + d < n_; ++d) a(i, i + d) = a(i + d, i) = bands_(d, i);
  return a;
}

namespace {

enum Form { Value, Derivative };

/// Banded Gram of the scaling basis at level j. Boundary entries are
/// integrated directly; interior bands reuse the translation-invariant
/// overlaps of phi.
BandMatrix scalingGram(int j, Form form) {
  const Eigen::Index n = Eigen::Index(1) << j;
  BandMatrix out(n, 2);
  auto fn = [&](int k) {
    PiecewisePoly p = scalingFunction(j, k);
    return form == Value ? p : p.derivative();
  };
  if (n <= 16) {
    for (int k = 1; k <= n; ++k) {
      PiecewisePoly pk = fn(k);
      for (int l = k; l <= std::min<int>(k + 2, n); ++l)
        out.at(k - 1, l - 1) = integrateProduct(pk, fn(l));
    }
    return out;
  }
  // boundary region (first and last 4 columns) direct
  for (int k = 1; k <= 4; ++k) {
    PiecewisePoly pk = fn(k);
    PiecewisePoly pm = fn(static_cast<int>(n) + 1 - k);
    for (int l = k; l <= k + 2; ++l) {
      out.at(k - 1, l - 1) = integrateProduct(pk, fn(l));
      out.at(n - k, n - l) = integrateProduct(pm, fn(static_cast<int>(n) + 1 - l));
    }
  }
  PiecewisePoly p6 = fn(6);
  double v0 = integrateProduct(p6, p6);
  double v1 = integrateProduct(p6, fn(7));
  double v2 = integrateProduct(p6, fn(8));
  for (Eigen::Index k = 4; k < n - 4; ++k) {
    out.at(k, k) = v0;
    if (k + 1 < n) out.at(k, k + 1) = v1;
    if (k + 2 < n) out.at(k, k + 2) = v2;
  }
  return out;
}

}  // namespace

BandMatrix massMatrix(int j) { return scalingGram(j, Value); }
BandMatrix stiffnessMatrix(int j) { return scalingGram(j, Derivative); }

BandMatrix waveletGram(int j) {
  const Eigen::Index n = Eigen::Index(1) << j;
  BandMatrix out(n, 1);
  if (n <= 16) {
    for (int k = 1; k <= n; ++k) {
      PiecewisePoly pk = waveletFunction(j, k);
      for (int l = k; l <= std::min<int>(k + 1, n); ++l)
        out.at(k - 1, l - 1) = integrateProduct(pk, waveletFunction(j, l));
    }
    return out;
  }
  for (int k = 1; k <= 3; ++k) {
    PiecewisePoly pk = waveletFunction(j, k);
    PiecewisePoly pm = waveletFunction(j, static_cast<int>(n) + 1 - k);
    out.at(k - 1, k - 1) = integrateProduct(pk, pk);
    out.at(k - 1, k) = integrateProduct(pk, waveletFunction(j, k + 1));
    out.at(n - k, n - k) = integrateProduct(pm, pm);
    out.at(n - k, n - k - 1) =
        integrateProduct(pm, waveletFunction(j, static_cast<int>(n) - k));
  }
  PiecewisePoly p5 = waveletFunction(j, 5);
  double diag = integrateProduct(p5, p5);
  double off = integrateProduct(p5, waveletFunction(j, 6));
  for (Eigen::Index k = 3; k < n - 3; ++k) {
    out.at(k, k) = diag;
    if (k + 1 < n - 2) out.at(k, k + 1) = off;
  }
  return out;
}

Eigen::MatrixXd orthogonalizeCoarsest(int j0) {
  Eigen::MatrixXd g = massMatrix(j0).dense();
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("orthogonalizeCoarsest: Gram matrix not SPD");
  Eigen::MatrixXd l = llt.matrixL();
  const Eigen::Index n = g.rows();
  // T = L^{-T}: T^T G T = L^{-1} L L^T L^{-T} = I.
  return l.transpose().triangularView<Eigen::Upper>().solve(
      Eigen::MatrixXd::Identity(n, n));
}

}  // namespace wavhelm
