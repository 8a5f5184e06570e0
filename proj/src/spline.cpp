#include "wavhelm/spline.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <stdexcept>

namespace wavhelm {

const QuadratureRule& QuadratureRule::gaussLegendre(int order) {
  static std::map<int, QuadratureRule> cache;
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;

  // Newton iteration on Legendre polynomials for nodes on [-1,1],
  // then mapped to [0,1].
  QuadratureRule rule;
  rule.order = order;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1.0, p1 = x;
      for (int n = 2; n <= order; ++n) {
        double p2 = ((2 * n - 1) * x * p1 - (n - 1) * p0) / n;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes(order - 1 - i) = 0.5 * (1.0 + x);
    rule.weights(order - 1 - i) = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(order, std::move(rule)).first->second;
}

PiecewisePoly::PiecewisePoly(Eigen::VectorXd breaks, Eigen::MatrixX3d coef)
    : breaks_(std::move(breaks)), coef_(std::move(coef)) {
  assert(coef_.rows() == breaks_.size() - 1);
  for (Eigen::Index i = 0; i + 1 < breaks_.size(); ++i)
    assert(breaks_(i) < breaks_(i + 1));
}

double PiecewisePoly::operator()(double x) const {
  if (breaks_.size() < 2 || x < breaks_(0) || x > breaks_(breaks_.size() - 1))
    return 0.0;
  // last piece is closed on the right
  const double* begin = breaks_.data();
  const double* end = begin + breaks_.size();
  Eigen::Index i = std::upper_bound(begin, end, x) - begin - 1;
  if (i >= coef_.rows()) i = coef_.rows() - 1;
  if (i < 0) i = 0;
  double t = x - breaks_(i);
  return coef_(i, 0) + t * (coef_(i, 1) + t * coef_(i, 2));
}

PiecewisePoly PiecewisePoly::derivative() const {
  Eigen::MatrixX3d d(coef_.rows(), 3);
  d.col(0) = coef_.col(1);
  d.col(1) = 2.0 * coef_.col(2);
  d.col(2).setZero();
  return PiecewisePoly(breaks_, d);
}

PiecewisePoly PiecewisePoly::affine(double a, double b, double scale) const {
  if (a == 0.0) throw std::invalid_argument("affine: a must be nonzero");
  const Eigen::Index np = coef_.rows();
  Eigen::VectorXd nb(breaks_.size());
  Eigen::MatrixX3d nc(np, 3);
  for (Eigen::Index i = 0; i < breaks_.size(); ++i) {
    Eigen::Index src = (a > 0) ? i : breaks_.size() - 1 - i;
    nb(i) = (breaks_(src) - b) / a;
  }
  for (Eigen::Index i = 0; i < np; ++i) {
    Eigen::Index src = (a > 0) ? i : np - 1 - i;
    // q(x) = scale * p(a x + b) on [nb(i), nb(i+1)], local u = x - nb(i).
    // With y = a x + b and delta = a*nb(i) + b - breaks_(src):
    //   p-local argument = delta + a u.
    double delta = a * nb(i) + b - breaks_(src);
    double c0 = coef_(src, 0), c1 = coef_(src, 1), c2 = coef_(src, 2);
    nc(i, 0) = scale * (c0 + c1 * delta + c2 * delta * delta);
    nc(i, 1) = scale * (c1 * a + 2.0 * c2 * delta * a);
    nc(i, 2) = scale * (c2 * a * a);
  }
  return PiecewisePoly(std::move(nb), std::move(nc));
}

PiecewisePoly PiecewisePoly::combine(
    const std::vector<std::pair<double, const PiecewisePoly*>>& terms) {
  std::vector<double> pts;
  for (const auto& [c, p] : terms)
    for (Eigen::Index i = 0; i < p->breakpoints().size(); ++i)
      pts.push_back(p->breakpoints()(i));
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 2) return PiecewisePoly();

  const Eigen::Index np = static_cast<Eigen::Index>(pts.size()) - 1;
  Eigen::VectorXd nb = Eigen::Map<Eigen::VectorXd>(pts.data(), pts.size());
  Eigen::MatrixX3d nc = Eigen::MatrixX3d::Zero(np, 3);
  for (Eigen::Index i = 0; i < np; ++i) {
    double mid = 0.5 * (nb(i) + nb(i + 1));
    for (const auto& [c, p] : terms) {
      if (mid <= p->supportBegin() || mid >= p->supportEnd()) continue;
      const Eigen::VectorXd& pb = p->breakpoints();
      const double* begin = pb.data();
      Eigen::Index k = std::upper_bound(begin, begin + pb.size(), mid) - begin - 1;
      double delta = nb(i) - pb(k);
      double c0 = p->coefficients()(k, 0), c1 = p->coefficients()(k, 1),
             c2 = p->coefficients()(k, 2);
      nc(i, 0) += c * (c0 + c1 * delta + c2 * delta * delta);
      nc(i, 1) += c * (c1 + 2.0 * c2 * delta);
      nc(i, 2) += c * c2;
    }
  }
  return PiecewisePoly(std::move(nb), std::move(nc));
}

const PiecewisePoly& motherScaling() {
  static const PiecewisePoly phi = [] {
    Eigen::VectorXd b(4);
    b << 0, 1, 2, 3;
    Eigen::MatrixX3d c(3, 3);
    // x^2/2 ; -x^2+3x-3/2 ; x^2/2-3x+9/2, rewritten around left breakpoints
    c.row(0) << 0.0, 0.0, 0.5;    // at 0:  t^2/2
    c.row(1) << 0.5, 1.0, -1.0;   // at 1:  1/2 + t - t^2
    c.row(2) << 0.5, -1.0, 0.5;   // at 2:  1/2 - t + t^2/2
    return PiecewisePoly(b, c);
  }();
  return phi;
}

const PiecewisePoly& boundaryScaling() {
  static const PiecewisePoly phib = [] {
    Eigen::VectorXd b(3);
    b << 0, 1, 2;
    Eigen::MatrixX3d c(2, 3);
    c.row(0) << 0.0, 3.0, -2.25;    // -9x^2/4 + 3x
    c.row(1) << 0.75, -1.5, 0.75;   // 3x^2/4 - 3x + 3 around x=1
    return PiecewisePoly(b, c);
  }();
  return phib;
}

const PiecewisePoly& motherWavelet() {
  static const PiecewisePoly psi = [] {
    PiecewisePoly a = motherScaling().affine(2.0, -1.0, 1.0);
    PiecewisePoly b = motherScaling().affine(2.0, -2.0, 1.0);
    return PiecewisePoly::combine({{-0.5, &a}, {0.5, &b}});
  }();
  return psi;
}

const PiecewisePoly& boundaryWavelet() {
  static const PiecewisePoly psib = [] {
    PiecewisePoly a = boundaryScaling().affine(2.0, 0.0, 1.0);
    PiecewisePoly b = motherScaling().affine(2.0, 0.0, 1.0);
    return PiecewisePoly::combine({{-0.5, &a}, {0.5, &b}});
  }();
  return psib;
}

double integrate(const PiecewisePoly& p) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < p.pieceCount(); ++i) {
    double h = p.breakpoints()(i + 1) - p.breakpoints()(i);
    // exact integral of c0 + c1 t + c2 t^2 over [0,h]
    total += p.coefficients()(i, 0) * h + p.coefficients()(i, 1) * h * h / 2.0 +
             p.coefficients()(i, 2) * h * h * h / 3.0;
  }
  return total;
}

double integrateProduct(const PiecewisePoly& p, const PiecewisePoly& q) {
  if (p.pieceCount() == 0 || q.pieceCount() == 0) return 0.0;
  double lo = std::max(p.supportBegin(), q.supportBegin());
  double hi = std::min(p.supportEnd(), q.supportEnd());
  if (lo >= hi) return 0.0;

  std::vector<double> pts;
  auto push = [&](const Eigen::VectorXd& b) {
    for (Eigen::Index i = 0; i < b.size(); ++i)
      if (b(i) > lo && b(i) < hi) pts.push_back(b(i));
  };
  pts.push_back(lo);
  pts.push_back(hi);
  push(p.breakpoints());
  push(q.breakpoints());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  const QuadratureRule& rule = QuadratureRule::gaussLegendre(3);
  double total = 0.0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    double a = pts[i], h = pts[i + 1] - pts[i];
    double acc = 0.0;
    for (int g = 0; g < rule.order; ++g) {
      double x = a + h * rule.nodes(g);
      acc += rule.weights(g) * p(x) * q(x);
    }
    total += h * acc;
  }
  return total;
}

double integrateAgainst(const std::function<double(double)>& f,
                        const PiecewisePoly& p, int nodesPerPiece) {
  const QuadratureRule& rule = QuadratureRule::gaussLegendre(nodesPerPiece);
  double total = 0.0;
  for (Eigen::Index i = 0; i < p.pieceCount(); ++i) {
    double a = p.breakpoints()(i), h = p.breakpoints()(i + 1) - a;
    double acc = 0.0;
    for (int g = 0; g < rule.order; ++g) {
      double x = a + h * rule.nodes(g);
      acc += rule.weights(g) * f(x) * p(x);
    }
    total += h * acc;
  }
  return total;
}

}  // namespace wavhelm
