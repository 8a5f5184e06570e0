#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "wavhelm/gram1d.hpp"

using namespace wavhelm;

TEST_CASE("wavelet Gram exact rationals") {
  for (int j : {3, 5, 7}) {
    const int n = 1 << j;
    BandMatrix u = waveletGram(j);
    CHECK(u(0, 0) == doctest::Approx(27.0 / 320).epsilon(1e-13));
    CHECK(u(n - 1, n - 1) == doctest::Approx(27.0 / 320).epsilon(1e-13));
    CHECK(std::abs(u(0, 1)) == doctest::Approx(47.0 / 1920).epsilon(1e-13));
    CHECK(std::abs(u(n - 1, n - 2)) == doctest::Approx(47.0 / 1920).epsilon(1e-13));
    for (int k = 1; k < n - 1; ++k) {
      CHECK(u(k, k) == doctest::Approx(1.0 / 12).epsilon(1e-13));
      if (k < n - 2) CHECK(u(k, k + 1) == doctest::Approx(-1.0 / 40).epsilon(1e-13));
    }
  }
}

TEST_CASE("gram matrices match direct assembly") {
  for (int j : {2, 3, 5}) {
    const int n = 1 << j;
    Eigen::MatrixXd m = massMatrix(j).dense();
    Eigen::MatrixXd s = stiffnessMatrix(j).dense();
    Eigen::MatrixXd u = waveletGram(j).dense();
    for (int k = 1; k <= n; ++k)
      for (int l = 1; l <= n; ++l) {
        PiecewisePoly pk = scalingFunction(j, k), pl = scalingFunction(j, l);
        CHECK(m(k - 1, l - 1) == doctest::Approx(integrateProduct(pk, pl)).epsilon(1e-12));
        CHECK(s(k - 1, l - 1) ==
              doctest::Approx(integrateProduct(pk.derivative(), pl.derivative()))
                  .epsilon(1e-12));
        PiecewisePoly wk = waveletFunction(j, k), wl = waveletFunction(j, l);
        CHECK(u(k - 1, l - 1) == doctest::Approx(integrateProduct(wk, wl)).epsilon(1e-12));
      }
  }
}

TEST_CASE("wavelet Gram strictly diagonally dominant") {
  BandMatrix u = waveletGram(6);
  const Eigen::Index n = u.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    double off = 0.0;
    for (Eigen::Index k = 0; k < n; ++k)
      if (k != i) off += std::abs(u(i, k));
    CHECK(u(i, i) > off);
  }
}

TEST_CASE("band matrix apply matches dense") {
  std::mt19937 rng(3);
  std::normal_distribution<double> g;
  BandMatrix m = massMatrix(6);
  Eigen::MatrixXd d = m.dense();
  Eigen::VectorXd x(m.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = g(rng);
  CHECK(((m * x) - d * x).cwiseAbs().maxCoeff() <= 1e-13);

  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  RowMat xm(m.size(), 5), ym(m.size(), 5);
  for (Eigen::Index i = 0; i < xm.size(); ++i) xm.data()[i] = g(rng);
  m.applyToRows(xm, ym);
  CHECK((ym - d * xm).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("coarsest orthogonalization") {
  for (int j0 : {2, 3}) {
    Eigen::MatrixXd t = orthogonalizeCoarsest(j0);
    Eigen::MatrixXd gram = massMatrix(j0).dense();
    const Eigen::Index n = gram.rows();
    Eigen::MatrixXd res = t.transpose() * gram * t - Eigen::MatrixXd::Identity(n, n);
    CHECK(res.cwiseAbs().maxCoeff() <= 1e-13);
  }
}
