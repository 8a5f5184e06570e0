#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wavhelm/basis1d.hpp"

using namespace wavhelm;

TEST_CASE("boundary conditions") {
  for (int j = 2; j <= 5; ++j) {
    const int n = 1 << j;
    for (int k : {1, 2, n / 2, n - 1, n}) {
      CHECK(std::abs(scalingFunction(j, k)(0.0)) <= 1e-14);
      CHECK(std::abs(scalingFunction(j, k)(1.0)) <= 1e-14);
      CHECK(std::abs(waveletFunction(j, k)(0.0)) <= 1e-14);
      CHECK(std::abs(waveletFunction(j, k)(1.0)) <= 1e-14);
    }
  }
}

TEST_CASE("norm table matches direct integration") {
  for (int j : {2, 4}) {
    const int n = 1 << j;
    for (int k : {1, 2, 3, n}) {
      for (FunctionKind kind : {FunctionKind::Scaling, FunctionKind::Wavelet}) {
        FunctionIndex idx{j, kind, k};
        PiecewisePoly f = basisFunction(idx);
        auto [l2, h1] = norms(idx);
        CHECK(l2 == doctest::Approx(integrateProduct(f, f)).epsilon(1e-12));
        PiecewisePoly df = f.derivative();
        CHECK(h1 == doctest::Approx(integrateProduct(df, df)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("L2 norms level-invariant, H1 seminorms scale by 4") {
  auto [l2a, h1a] = norms({4, FunctionKind::Wavelet, 7});
  auto [l2b, h1b] = norms({5, FunctionKind::Wavelet, 7});
  CHECK(l2a == doctest::Approx(l2b).epsilon(1e-14));
  CHECK(h1b / h1a == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(l2a == doctest::Approx(1.0 / 12).epsilon(1e-13));  // interior wavelet
}

TEST_CASE("enumeration layout") {
  BasisSpec1D spec{2, 3, false, Normalization::None};
  std::vector<FunctionIndex> basis = enumerateBasis(spec);
  REQUIRE(Eigen::Index(basis.size()) == spec.dimension());
  CHECK(basis.size() == 32);
  // scaling block first
  for (int k = 0; k < 4; ++k) {
    CHECK(basis[k].kind == FunctionKind::Scaling);
    CHECK(basis[k].level == 2);
    CHECK(basis[k].position == k + 1);
  }
  // then wavelet levels ascending
  CHECK(basis[4].kind == FunctionKind::Wavelet);
  CHECK(basis[4].level == 2);
  CHECK(basis[8].level == 3);
  CHECK(basis[16].level == 4);
  CHECK(basis[31].position == 16);
}

TEST_CASE("invalid indices rejected") {
  CHECK_THROWS_AS(scalingFunction(2, 0), std::out_of_range);
  CHECK_THROWS_AS(scalingFunction(2, 5), std::out_of_range);
  CHECK_THROWS_AS(waveletFunction(3, 9), std::out_of_range);
}

TEST_CASE("mirror symmetry of boundary functions") {
  int j = 3, n = 1 << j;
  PiecewisePoly left = scalingFunction(j, 1);
  PiecewisePoly right = scalingFunction(j, n);
  for (double x : {0.05, 0.1, 0.2}) {
    CHECK(left(x) == doctest::Approx(right(1.0 - x)).epsilon(1e-13));
  }
}
