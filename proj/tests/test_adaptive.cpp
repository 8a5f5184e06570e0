#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wavhelm/adaptive.hpp"

using namespace wavhelm;

TEST_CASE("entry cache symmetry and diagonal") {
  EntryCache cache;
  TensorIndex lam{3, 1u, {2, 3, 1}, 2};
  TensorIndex mu{4, 2u, {5, 6, 1}, 2};
  double ab = entry(cache, 1.0, 1.0, lam, mu);
  double ba = entry(cache, 1.0, 1.0, mu, lam);
  CHECK(ab == ba);  // exact, through the cache
  CHECK(entry(cache, 1.0, 1.0, lam, lam) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(entry(cache, 1e-3, 1.0, mu, mu) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("disjoint supports give exact zero") {
  EntryCache cache;
  TensorIndex lam{4, 3u, {2, 2, 1}, 2};
  TensorIndex mu{4, 3u, {14, 14, 1}, 2};
  CHECK(entry(cache, 1.0, 1.0, lam, mu) == 0.0);
  std::size_t before = cache.size();
  entry(cache, 1.0, 1.0, lam, mu);
  CHECK(cache.size() == before);  // never cached
}

TEST_CASE("entry agrees with the matrix-free operator, d=2 s=2") {
  BasisSpec1D spec{2, 2, false, Normalization::None};
  HelmholtzOperator op(2, 1.0, 1.0, spec);
  std::vector<TensorIndex> idx = enumerateTensor(2, spec);
  EntryCache cache;
  // sample a spread of columns
  for (Eigen::Index col : {0, 5, 17, 60, 100, 200, 255}) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(op.size());
    e(col) = 1.0;
    Eigen::VectorXd ref = op.applyPreconditioned(e);
    for (Eigen::Index row = 0; row < op.size(); ++row) {
      double val = entry(cache, 1.0, 1.0, idx[row], idx[col]);
      CHECK(std::abs(val - ref(row)) <= 1e-11);
    }
  }
}

TEST_CASE("support intervals") {
  auto [lo, hi] = support1d({3, FunctionKind::Scaling, 1});
  CHECK(lo == 0.0);
  CHECK(hi == doctest::Approx(2.0 / 8));
  auto [wl, wh] = support1d({3, FunctionKind::Wavelet, 8});
  CHECK(wh == 1.0);
  CHECK(wl == doctest::Approx(1.0 - 1.5 / 8));
  auto [il, ih] = support1d({4, FunctionKind::Wavelet, 7});
  CHECK(il == doctest::Approx(5.5 / 16));
  CHECK(ih == doctest::Approx(7.5 / 16));
}

TEST_CASE("zero right-hand side terminates with zero solution") {
  ManufacturedProblem p = polynomialProblem(2, 1.0, 0.0);
  p.v = [](double) { return 0.0; };
  p.dv = [](double) { return 0.0; };
  p.ddv = [](double) { return 0.0; };
  AdaptiveOptions opts;
  opts.jmax = 4;
  opts.trackErrors = false;
  opts.target = 1e-12;
  AdaptiveResult res = adaptiveSolve(p, opts);
  CHECK(res.reachedTarget);
  CHECK(res.history.size() == 1);
  CHECK(res.coeffs.cwiseAbs().maxCoeff() == 0.0);
  CHECK(res.active.size() == 16);  // just the seed block
}

TEST_CASE("deterministic reruns") {
  ManufacturedProblem p = boundaryLayerProblem(2, 1.0, 0.0);
  AdaptiveOptions opts;
  opts.jmax = 5;
  opts.maxCycles = 5;
  opts.trackErrors = false;
  AdaptiveResult a = adaptiveSolve(p, opts);
  AdaptiveResult b = adaptiveSolve(p, opts);
  REQUIRE(a.history.size() == b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i) {
    CHECK(a.history[i].activeSize == b.history[i].activeSize);
    CHECK(a.history[i].residual == b.history[i].residual);
  }
  REQUIRE(a.active.size() == b.active.size());
  for (std::size_t i = 0; i < a.active.size(); ++i) CHECK(a.active[i] == b.active[i]);
  CHECK((a.coeffs - b.coeffs).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("residual shrinks over cycles") {
  ManufacturedProblem p = boundaryLayerProblem(2, 1.0, 0.0);
  AdaptiveOptions opts;
  opts.jmax = 6;
  opts.maxCycles = 8;
  opts.trackErrors = false;
  AdaptiveResult res = adaptiveSolve(p, opts);
  REQUIRE(res.history.size() >= 4);
  CHECK(res.history.back().residual < 0.5 * res.history.front().residual);
}
