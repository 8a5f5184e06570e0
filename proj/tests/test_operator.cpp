#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "wavhelm/tensor_operator.hpp"

using namespace wavhelm;

namespace {

struct Factor {
  PiecewisePoly f, df;
};

/// Materialized 1D factors per tensor index axis, with the coarsest-level
/// orthogonalization folded in when requested.
std::vector<std::array<Factor, 3>> materialize(const std::vector<TensorIndex>& idx,
                                               const BasisSpec1D& spec) {
  Eigen::MatrixXd t;
  if (spec.ortho) {
    MultiscaleTransform1D tr(spec);
    t = tr.coarsestTransform();
  }
  std::vector<std::array<Factor, 3>> out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (int l = 0; l < idx[i].dim; ++l) {
      bool wav = (idx[i].type >> l) & 1u;
      PiecewisePoly f;
      if (wav) {
        f = waveletFunction(idx[i].level, idx[i].k[l]);
      } else if (spec.ortho && idx[i].level == spec.j0) {
        std::vector<PiecewisePoly> cols;
        std::vector<std::pair<double, const PiecewisePoly*>> terms;
        const int n0 = 1 << spec.j0;
        cols.reserve(n0);
        for (int m = 1; m <= n0; ++m) cols.push_back(scalingFunction(spec.j0, m));
        for (int m = 0; m < n0; ++m) terms.push_back({t(m, idx[i].k[l] - 1), &cols[m]});
        f = PiecewisePoly::combine(terms);
      } else {
        f = scalingFunction(idx[i].level, idx[i].k[l]);
      }
      out[i][l] = {f, f.derivative()};
    }
  }
  return out;
}

/// Dense Galerkin matrix by pairwise quadrature through the tensor
/// factorization.
Eigen::MatrixXd denseOracle(int dim, double eps, double a, const BasisSpec1D& spec) {
  std::vector<TensorIndex> idx = enumerateTensor(dim, spec);
  auto fac = materialize(idx, spec);
  const Eigen::Index n = Eigen::Index(idx.size());
  Eigen::MatrixXd mat(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      double m[3], s[3];
      for (int l = 0; l < dim; ++l) {
        m[l] = integrateProduct(fac[i][l].f, fac[j][l].f);
        s[l] = integrateProduct(fac[i][l].df, fac[j][l].df);
      }
      double mp = 1.0;
      for (int l = 0; l < dim; ++l) mp *= m[l];
      double val = a * mp;
      for (int k = 0; k < dim; ++k) {
        double term = s[k];
        for (int l = 0; l < dim; ++l)
          if (l != k) term *= m[l];
        val += eps * term;
      }
      mat(i, j) = mat(j, i) = val;
    }
  return mat;
}

Eigen::MatrixXd applyDense(const HelmholtzOperator& op, bool precon) {
  const Eigen::Index n = op.size();
  Eigen::MatrixXd mat(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e(i) = 1.0;
    mat.col(i) = precon ? op.applyPreconditioned(e) : op.apply(e);
  }
  return mat;
}

}  // namespace

TEST_CASE("matrix-free apply vs dense oracle, d=1") {
  for (bool ortho : {false, true}) {
    for (int s : {0, 2, 3}) {
      BasisSpec1D spec{2, s, ortho, Normalization::None};
      HelmholtzOperator op(1, 1.0, 1.0, spec);
      Eigen::MatrixXd oracle = denseOracle(1, 1.0, 1.0, spec);
      CHECK((applyDense(op, false) - oracle).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("matrix-free apply vs dense oracle, d=2") {
  BasisSpec1D spec{2, 2, false, Normalization::None};
  HelmholtzOperator op(2, 1.0, 0.0, spec);
  Eigen::MatrixXd oracle = denseOracle(2, 1.0, 0.0, spec);
  CHECK((applyDense(op, false) - oracle).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("matrix-free apply vs dense oracle, d=2 ortho mixed blocks") {
  BasisSpec1D spec{2, 1, true, Normalization::None};
  HelmholtzOperator op(2, 1.0, 1.0, spec);
  Eigen::MatrixXd oracle = denseOracle(2, 1.0, 1.0, spec);
  CHECK((applyDense(op, false) - oracle).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("matrix-free apply vs dense oracle, d=3") {
  BasisSpec1D spec{2, 1, false, Normalization::None};
  HelmholtzOperator op(3, 1.0, 1.0, spec);
  Eigen::MatrixXd oracle = denseOracle(3, 1.0, 1.0, spec);
  CHECK((applyDense(op, false) - oracle).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("diagonal exact and preconditioned unit diagonal") {
  for (int d : {1, 2}) {
    BasisSpec1D spec{2, 2, false, Normalization::None};
    HelmholtzOperator op(d, 0.5, 2.0, spec);
    Eigen::MatrixXd dense = applyDense(op, false);
    CHECK((dense.diagonal() - op.diagonal()).cwiseAbs().maxCoeff() <= 1e-12);
    Eigen::MatrixXd pre = applyDense(op, true);
    CHECK((pre.diagonal() - Eigen::VectorXd::Ones(op.size())).cwiseAbs().maxCoeff() <=
          1e-12);
  }
}

TEST_CASE("operator symmetry") {
  std::mt19937 rng(11);
  std::normal_distribution<double> g;
  BasisSpec1D spec{2, 3, false, Normalization::None};
  HelmholtzOperator op(2, 1e-3, 1.0, spec);
  Eigen::VectorXd x(op.size()), y(op.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = g(rng), y(i) = g(rng);
  CHECK(op.apply(x).dot(y) == doctest::Approx(x.dot(op.apply(y))).epsilon(1e-12));
}

TEST_CASE("synthesis adjoint and energy of x(1-x)") {
  // u = x(1-x) lies exactly in every spline space
  BasisSpec1D spec{2, 3, false, Normalization::None};
  const int j = spec.finestLevel();
  const Eigen::Index n = spec.dimension();
  // single-scale coefficients by Galerkin projection (exact here)
  Eigen::MatrixXd mass = massMatrix(j).dense();
  Eigen::VectorXd b(n);
  for (int k = 1; k <= n; ++k)
    b(k - 1) = integrateAgainst([](double x) { return x * (1.0 - x); },
                                scalingFunction(j, k));
  Eigen::VectorXd ss = mass.ldlt().solve(b);
  // to multiscale coordinates through the dual cascade
  Eigen::VectorXd ms(n);
  Eigen::VectorXd cur = ss;
  Eigen::Index tail = n;
  for (int lvl = j - 1; lvl >= spec.j0; --lvl) {
    auto [c, d] = decompose(lvl, cur);
    tail -= d.size();
    ms.segment(tail, d.size()) = d;
    cur = c;
  }
  ms.head(cur.size()) = cur;

  HelmholtzOperator massOp(1, 0.0, 1.0, spec);
  CHECK(ms.dot(massOp.apply(ms)) == doctest::Approx(1.0 / 30).epsilon(1e-12));
  HelmholtzOperator stiffOp(1, 1.0, 0.0, spec);
  CHECK(ms.dot(stiffOp.apply(ms)) == doctest::Approx(1.0 / 3).epsilon(1e-12));
}

TEST_CASE("tensor enumeration layout") {
  BasisSpec1D spec{2, 2, false, Normalization::None};
  std::vector<TensorIndex> idx = enumerateTensor(2, spec);
  CHECK(idx.size() == 256);
  CHECK(idx[0].type == 0);
  CHECK(idx[0].k == std::array<int, 3>{1, 1, 1});
  CHECK(idx[1].k == std::array<int, 3>{1, 2, 1});  // axis 0 slowest
  CHECK(idx[16].type == 1);
  CHECK(idx[16].level == 2);
  // blocks: 16 scaling + (16+16+16) level 2 + (64*3) level 3
  CHECK(idx[64].type == 0u + 1);  // still within level-2 blocks
  CHECK(idx[64 - 1].level == 2);
  CHECK(idx[64].level == 3);
}
