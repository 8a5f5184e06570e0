#include "wavhelm/refinement.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <cmath>
#include <stdexcept>

#include "wavhelm/gram1d.hpp"

namespace wavhelm {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

/// Pair-reduced system matrix A_j (tridiagonal, entries over sqrt(2)):
/// rows (13/8, 3/8), (1/4, 3/2, 1/4), ..., (3/8, 13/8).
Eigen::MatrixXd pairReducedMatrix(int n) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    a(k, k) = 1.5;
    if (k > 0) a(k, k - 1) = 0.25;
    if (k + 1 < n) a(k, k + 1) = 0.25;
  }
  a(0, 0) = a(n - 1, n - 1) = 13.0 / 8.0;
  a(0, 1) = a(n - 1, n - 2) = 3.0 / 8.0;
  return a / kSqrt2;
}

}  // namespace

RefinementPair primalMatrices(int j) {
  if (j < 2) throw std::out_of_range("primalMatrices: level must be >= 2");
  const int n = 1 << j;
  RefinementPair out;
  out.level = j;

  std::vector<Eigen::Triplet<double>> t0, t1;
  const double hb[3] = {0.5 / kSqrt2, 1.125 / kSqrt2, 0.375 / kSqrt2};
  const double h[4] = {0.25 / kSqrt2, 0.75 / kSqrt2, 0.75 / kSqrt2, 0.25 / kSqrt2};
  for (int r = 0; r < 3; ++r) {
    t0.emplace_back(r, 0, hb[r]);
    t0.emplace_back(2 * n - 1 - r, n - 1, hb[r]);
  }
  for (int k = 2; k <= n - 1; ++k)  // rows 2k-2..2k+1 (1-based)
    for (int i = 0; i < 4; ++i) t0.emplace_back(2 * k - 3 + i, k - 1, h[i]);
  for (int k = 1; k <= n; ++k) {
    t1.emplace_back(2 * k - 2, k - 1, -0.5 / kSqrt2);
    t1.emplace_back(2 * k - 1, k - 1, 0.5 / kSqrt2);
  }
  out.m0.resize(2 * n, n);
  out.m1.resize(2 * n, n);
  out.m0.setFromTriplets(t0.begin(), t0.end());
  out.m1.setFromTriplets(t1.begin(), t1.end());
  return out;
}

Eigen::MatrixXd dualM0(int j) {
  const int n = 1 << j;
  Eigen::MatrixXd b =
      pairReducedMatrix(n).partialPivLu().solve(Eigen::MatrixXd::Identity(n, n));
  Eigen::MatrixXd mt(2 * n, n);
  for (int k = 0; k < n; ++k) {
    mt.row(2 * k) = b.row(k);
    mt.row(2 * k + 1) = b.row(k);
  }
  return mt;
}

Eigen::MatrixXd dualM0ClosedForm(int j) {
  const int n = 1 << j;
  const double a = -3.0 - 2.0 * kSqrt2;
  const double b = (13.0 - 9.0 * kSqrt2) / 6.0;
  const double c11 = 11.0 + 6.0 * kSqrt2;
  const double alpha = 1.0 / (1.0 - 36.0 * b * b * std::pow(a, 4 - 2 * n) / c11);
  Eigen::VectorXd d(n + 1);
  d(1) = 6.0 * alpha / (3.0 + kSqrt2);
  d(n) = -36.0 * b * alpha * std::pow(a, 2 - n) / c11;
  for (int k = 2; k < n; ++k)
    d(k) = -6.0 * b * alpha * std::pow(a, 2 - k) / (3.0 + kSqrt2) -
           36.0 * b * alpha * std::pow(a, k + 3 - 2 * n) / c11;

  Eigen::MatrixXd mt(2 * n, n);
  auto ap = [a](int e) { return std::pow(a, -e); };
  for (int l = 1; l <= n; ++l) {
    double top = d(1) * ap(std::abs(1 - l)) + d(n) * ap(std::abs(n - l));
    double bot = d(1) * ap(std::abs(n - l)) + d(n) * ap(std::abs(1 - l));
    mt(0, l - 1) = mt(1, l - 1) = top;
    mt(2 * n - 2, l - 1) = mt(2 * n - 1, l - 1) = bot;
    for (int k = 2; k < n; ++k)
      mt(2 * k - 2, l - 1) = mt(2 * k - 1, l - 1) =
          ap(std::abs(k - l)) + d(k) * ap(std::abs(1 - l)) + d(n + 1 - k) * ap(std::abs(n - l));
  }
  // Column scaling by H_j^{-1} (the published entries give D^{-1} C^{-1} only).
  mt.col(0) *= 2.0 / 3.0;
  mt.col(n - 1) *= 2.0 / 3.0;
  return mt;
}

Eigen::MatrixXd dualM1(int j) {
  const int n = 1 << j;
  RefinementPair pair = primalMatrices(j);
  // Even rows F solve A F = 2 sqrt(2) (odd rows of M_{j,0})^T; odd rows are
  // F - 2 sqrt(2) I.
  Eigen::MatrixXd rhs(n, n);
  Eigen::MatrixXd m0 = Eigen::MatrixXd(pair.m0);
  for (int l = 0; l < n; ++l) rhs.col(l) = 2.0 * kSqrt2 * m0.row(2 * l).transpose();
  Eigen::MatrixXd f = pairReducedMatrix(n).partialPivLu().solve(rhs);
  Eigen::MatrixXd mt(2 * n, n);
  for (int k = 0; k < n; ++k) {
    mt.row(2 * k + 1) = f.row(k);
    mt.row(2 * k) = f.row(k);
    mt(2 * k, k) -= 2.0 * kSqrt2;
  }
  return mt;
}

Eigen::VectorXd reconstruct(const RefinementPair& pair, const Eigen::VectorXd& c,
                            const Eigen::VectorXd& d) {
  if (c.size() != pair.m0.cols() || d.size() != pair.m1.cols())
    throw std::invalid_argument("reconstruct: length mismatch");
  return pair.m0 * c + pair.m1 * d;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> decompose(int j, const Eigen::VectorXd& fine) {
  if (fine.size() != (Eigen::Index(1) << (j + 1)))
    throw std::invalid_argument("decompose: length mismatch");
  return {dualM0(j).transpose() * fine, dualM1(j).transpose() * fine};
}

MultiscaleTransform1D::MultiscaleTransform1D(const BasisSpec1D& spec) : spec_(spec) {
  pairs_.reserve(spec.s);
  for (int j = spec.j0; j < spec.j0 + spec.s; ++j) pairs_.push_back(primalMatrices(j));
  const int n0 = 1 << spec.j0;
  if (spec.ortho)
    orthoT_ = orthogonalizeCoarsest(spec.j0);
  else
    orthoT_ = Eigen::MatrixXd::Identity(n0, n0);
}

Eigen::VectorXd MultiscaleTransform1D::synthesize(const Eigen::VectorXd& v) const {
  if (v.size() != spec_.dimension())
    throw std::invalid_argument("synthesize: length mismatch");
  const int n0 = 1 << spec_.j0;
  Eigen::VectorXd c = orthoT_ * v.head(n0);
  Eigen::Index off = n0;
  for (int t = 0; t < spec_.s; ++t) {
    Eigen::Index nj = Eigen::Index(1) << (spec_.j0 + t);
    c = pairs_[t].m0 * c + pairs_[t].m1 * v.segment(off, nj);
    off += nj;
  }
  return c;
}

Eigen::VectorXd MultiscaleTransform1D::synthesizeTranspose(const Eigen::VectorXd& g) const {
  if (g.size() != spec_.dimension())
    throw std::invalid_argument("synthesizeTranspose: length mismatch");
  Eigen::VectorXd out(spec_.dimension());
  Eigen::VectorXd c = g;
  Eigen::Index off = spec_.dimension();
  for (int t = spec_.s - 1; t >= 0; --t) {
    Eigen::Index nj = Eigen::Index(1) << (spec_.j0 + t);
    off -= nj;
    out.segment(off, nj) = pairs_[t].m1.transpose() * c;
    c = pairs_[t].m0.transpose() * c;
  }
  const int n0 = 1 << spec_.j0;
  out.head(n0) = orthoT_.transpose() * c;
  return out;
}

double spectralNorm(const Eigen::MatrixXd& m, double tol, int maxit) {
  Eigen::VectorXd v = Eigen::VectorXd::Ones(m.cols());
  v /= v.norm();
  double lambda = 0.0;
  for (int it = 0; it < maxit; ++it) {
    Eigen::VectorXd w = m.transpose() * (m * v);
    double next = w.norm();
    if (next == 0.0) return 0.0;
    w /= next;
    if (std::abs(next - lambda) <= tol * next) {
      lambda = next;
      break;
    }
    lambda = next;
    v = w;
  }
  return std::sqrt(lambda);
}

LemmaReport verifyNormLemmas(int jmax) {
  LemmaReport rep;
  std::vector<Eigen::MatrixXd> duals;
  for (int j = 2; j <= jmax; ++j) {
    duals.push_back(dualM0(j));
    rep.dualNorms.push_back(spectralNorm(duals.back()));
  }
  for (int j = 3; j + 1 <= jmax; ++j) {
    Eigen::MatrixXd s = duals[j - 2].transpose() * duals[j - 1].transpose();
    Eigen::MatrixXd st(s.rows() / 2, s.cols());
    for (Eigen::Index k = 0; k < st.rows(); ++k)
      st.row(k) = s.row(2 * k) + s.row(2 * k + 1);
    rep.pairSumNorms.push_back(spectralNorm(st));
  }
  Eigen::MatrixXd prod = duals[0].transpose();
  for (int n = 3; n <= jmax; ++n) {
    rep.productNorms.push_back(spectralNorm(prod));
    if (n < jmax) prod = prod * duals[n - 2].transpose();
  }
  // least-squares slope of log2 ||product|| against n-m
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = static_cast<int>(rep.productNorms.size());
  for (int i = 0; i < cnt; ++i) {
    double x = i + 1;
    double y = std::log2(rep.productNorms[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  rep.fittedExponent = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  rep.dualNormsOk = true;
  for (double v : rep.dualNorms) rep.dualNormsOk &= (v <= 2.8);
  rep.pairSumOk = true;
  for (double v : rep.pairSumNorms) rep.pairSumOk &= (v < 2.0 * kSqrt2);
  rep.exponentOk = rep.fittedExponent < 0.5;
  return rep;
}

}  // namespace wavhelm
