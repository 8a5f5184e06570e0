#ifndef WAVHELM_ADAPTIVE_HPP
#define WAVHELM_ADAPTIVE_HPP

#include <cstdint>
#include <unordered_map>

#include "wavhelm/problems.hpp"
#include "wavhelm/solver.hpp"

namespace wavhelm {

/// Support interval of a 1D basis function, clipped to [0,1].
std::pair<double, double> support1d(const FunctionIndex& idx);

/// Packed key for hashing; valid for levels <= 15 and positions < 2^15.
std::uint64_t tensorKey(const TensorIndex& idx);

/// Cache of exact 1D pair integrals (<f,g>, <f',g'>) keyed by the two
/// function indices; symmetric under swap, disjoint supports short-circuit
/// to (0,0) without caching.
class EntryCache {
 public:
  std::pair<double, double> factors(const FunctionIndex& a, const FunctionIndex& b);
  std::size_t size() const { return map_.size(); }

 private:
  std::unordered_map<std::uint64_t, std::pair<double, double>> map_;
};

/// Diagonally preconditioned bilinear-form entry
/// (eps<grad psi_l, grad psi_m> + a<psi_l, psi_m>) / sqrt(d_l d_m),
/// tensor-factorized through the cache.
double entry(EntryCache& cache, double eps, double a, const TensorIndex& lam,
             const TensorIndex& mu);

struct AdaptiveOptions {
  int dim = 2;
  double eps = 1.0;
  double a = 0.0;
  int j0 = 2;
  int jmax = 10;       // level cap |lambda| <= jmax
  double theta = 0.5;  // bulk-chasing fraction
  double target = 1e-6;
  int maxCycles = 60;
  Eigen::Index maxActive = 0;  // stop once |active| reaches this (0 = no cap)
  bool trackErrors = true;  // record L-inf/L2 error vs the manufactured u
};

struct AdaptiveCycle {
  int cycle;
  Eigen::Index activeSize;
  double residual;
  double linf;
  double l2;
};

struct AdaptiveResult {
  std::vector<TensorIndex> active;  // insertion-ordered
  Eigen::VectorXd coeffs;           // preconditioned, aligned with active
  std::vector<AdaptiveCycle> history;
  bool reachedTarget = false;
  bool stagnated = false;
};

AdaptiveResult adaptiveSolve(const ManufacturedProblem& problem,
                             const AdaptiveOptions& opts);

}  // namespace wavhelm

#endif
