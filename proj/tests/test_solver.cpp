#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "wavhelm/problems.hpp"
#include "wavhelm/solver.hpp"

using namespace wavhelm;

TEST_CASE("cg on identity converges immediately") {
  Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(10, 1.0, 2.0);
  CGReport rep = conjugateGradient([](const Eigen::VectorXd& x) { return x; }, b,
                                   Eigen::VectorXd::Zero(10), 1e-12, 100);
  CHECK(rep.converged);
  CHECK(rep.iterations <= 1);
  CHECK((rep.x - b).norm() <= 1e-12);
}

TEST_CASE("cg matches dense solve on the d=1 Poisson system") {
  BasisSpec1D spec{2, 3, false, Normalization::None};
  HelmholtzOperator op(1, 1.0, 0.0, spec);
  ManufacturedProblem p = boundaryLayerProblem(1, 1.0, 0.0);
  Eigen::VectorXd b = rhsLoadVector(p, op);
  Eigen::MatrixXd dense(op.size(), op.size());
  for (Eigen::Index i = 0; i < op.size(); ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(op.size());
    e(i) = 1.0;
    dense.col(i) = op.applyPreconditioned(e);
  }
  Eigen::VectorXd direct = dense.ldlt().solve(b);
  CGReport rep = conjugateGradient(
      [&op](const Eigen::VectorXd& x) { return op.applyPreconditioned(x); }, b,
      Eigen::VectorXd::Zero(op.size()), 1e-10, 1000);
  CHECK(rep.converged);
  CHECK((rep.x - direct).cwiseAbs().maxCoeff() <= 1e-8);
  // residual history decreasing overall
  CHECK(rep.residualHistory.back() <= 1e-10);
}

TEST_CASE("lanczos matches dense eigensolver") {
  std::mt19937 rng(5);
  std::normal_distribution<double> g;
  const int n = 200;
  Eigen::MatrixXd b(n, n);
  for (int i = 0; i < n * n; ++i) b.data()[i] = g(rng);
  Eigen::MatrixXd a = b.transpose() * b + Eigen::MatrixXd::Identity(n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  EigenEstimate est = extremeEigenvalues(
      [&a](const Eigen::VectorXd& x) { return a * x; }, n, 1e-9, 3000);
  CHECK(est.converged);
  CHECK(est.lambdaMin == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-8));
  CHECK(est.lambdaMax == doctest::Approx(es.eigenvalues()(n - 1)).epsilon(1e-8));
}

TEST_CASE("lanczos on the preconditioned operator vs dense") {
  BasisSpec1D spec{2, 3, false, Normalization::None};
  HelmholtzOperator op(1, 1.0, 0.0, spec);
  Eigen::MatrixXd dense(op.size(), op.size());
  for (Eigen::Index i = 0; i < op.size(); ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(op.size());
    e(i) = 1.0;
    dense.col(i) = op.applyPreconditioned(e);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
  EigenEstimate est = conditionEstimate(op, 1e-9);
  CHECK(est.converged);
  CHECK(est.lambdaMin == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-8));
  CHECK(est.lambdaMax ==
        doctest::Approx(es.eigenvalues()(op.size() - 1)).epsilon(1e-8));
}

TEST_CASE("multilevel galerkin accounting and consistency") {
  ManufacturedProblem p = boundaryLayerProblem(1, 1.0, 0.0);
  const int s = 3;
  MultilevelReport rep = multilevelGalerkin(
      1, 1.0, 0.0, {2, 0, false, Normalization::None}, s,
      [&p](const HelmholtzOperator& op) { return rhsLoadVector(p, op); });
  CHECK(rep.converged);
  CHECK(rep.levels.size() == s + 1);
  double m = 0.0;
  for (const MultilevelLevel& lv : rep.levels)
    m += lv.iterations / std::pow(4.0, s - lv.s);
  CHECK(rep.equivalentIterations == doctest::Approx(m).epsilon(1e-14));

  // final iterate agrees with a direct CG solve at the same tolerance
  const double tol = 1e-4 * std::pow(2.0, -2.0 * s);
  HelmholtzOperator op(1, 1.0, 0.0, {2, s, false, Normalization::None});
  Eigen::VectorXd b = rhsLoadVector(p, op);
  CGReport direct = conjugateGradient(
      [&op](const Eigen::VectorXd& x) { return op.applyPreconditioned(x); }, b,
      Eigen::VectorXd::Zero(op.size()), tol, 10000);
  double residDiff = (op.applyPreconditioned(rep.solution - direct.x)).norm();
  CHECK(residDiff <= 10.0 * tol);
}
