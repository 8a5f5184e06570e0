#include "wavhelm/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <unordered_set>

namespace wavhelm {

std::pair<double, double> support1d(const FunctionIndex& idx) {
  const double h = std::pow(2.0, -idx.level);
  const int n = 1 << idx.level;
  double lo, hi;
  if (idx.kind == FunctionKind::Scaling) {
    lo = (idx.position - 2) * h;
    hi = (idx.position + 1) * h;
  } else {
    lo = (idx.position - 1.5) * h;
    hi = (idx.position + 0.5) * h;
    if (idx.position == 1) lo = 0.0, hi = 1.5 * h;
    if (idx.position == n) lo = 1.0 - 1.5 * h, hi = 1.0;
  }
  return {std::max(0.0, lo), std::min(1.0, hi)};
}

namespace {

std::uint64_t functionKey(const FunctionIndex& idx) {
  return (std::uint64_t(idx.level) << 16) |
         (std::uint64_t(idx.kind == FunctionKind::Wavelet) << 15) |
         std::uint64_t(idx.position);
}

std::uint64_t pairKey(const FunctionIndex& a, const FunctionIndex& b) {
  std::uint64_t ka = functionKey(a), kb = functionKey(b);
  if (ka > kb) std::swap(ka, kb);
  return (ka << 20) | kb;
}

bool disjoint(const std::pair<double, double>& a, const std::pair<double, double>& b) {
  return a.second <= b.first || b.second <= a.first;
}

/// Unpreconditioned diagonal entry, same closed form as HelmholtzOperator.
double diagEntry(double eps, double a, const TensorIndex& ti) {
  double m[3], s[3];
  for (int l = 0; l < ti.dim; ++l) {
    auto [l2, h1] = norms({ti.level,
                           ((ti.type >> l) & 1u) ? FunctionKind::Wavelet
                                                 : FunctionKind::Scaling,
                           ti.k[l]});
    m[l] = l2;
    s[l] = h1;
  }
  double mProd = 1.0;
  for (int l = 0; l < ti.dim; ++l) mProd *= m[l];
  double val = a * mProd;
  for (int i = 0; i < ti.dim; ++i) {
    double t = s[i];
    for (int l = 0; l < ti.dim; ++l)
      if (l != i) t *= m[l];
    val += eps * t;
  }
  return val;
}

FunctionIndex factorOf(const TensorIndex& ti, int axis) {
  return {ti.level,
          ((ti.type >> axis) & 1u) ? FunctionKind::Wavelet : FunctionKind::Scaling,
          ti.k[axis]};
}

Eigen::Index ipow(Eigen::Index b, int e) {
  Eigen::Index p = 1;
  for (int i = 0; i < e; ++i) p *= b;
  return p;
}

/// Position of ti in the full enumeration order (block layout of
/// enumerateTensor); used as the deterministic tie-break rank.
std::uint64_t enumerationRank(const TensorIndex& ti, int j0) {
  const int d = ti.dim;
  std::uint64_t off = 0;
  if (ti.type != 0) {
    off = ipow(Eigen::Index(1) << j0, d);
    for (int j = j0; j < ti.level; ++j)
      off += ((std::uint64_t(1) << d) - 1) * ipow(Eigen::Index(1) << j, d);
    off += std::uint64_t(ti.type - 1) * ipow(Eigen::Index(1) << ti.level, d);
  }
  const Eigen::Index n = Eigen::Index(1) << ti.level;
  std::uint64_t flat = 0;
  for (int l = 0; l < d; ++l) flat = flat * n + std::uint64_t(ti.k[l] - 1);
  return off + flat;
}

}  // namespace

std::uint64_t tensorKey(const TensorIndex& idx) {
  std::uint64_t key = (std::uint64_t(idx.level) << 48) | (std::uint64_t(idx.type) << 45);
  for (int l = 0; l < 3; ++l) key |= std::uint64_t(l < idx.dim ? idx.k[l] : 0) << (15 * l);
  return key;
}

std::pair<double, double> EntryCache::factors(const FunctionIndex& a,
                                              const FunctionIndex& b) {
  if (disjoint(support1d(a), support1d(b))) return {0.0, 0.0};
  const std::uint64_t key = pairKey(a, b);
  auto it = map_.find(key);
  if (it != map_.end()) return it->second;
  PiecewisePoly pa = basisFunction(a), pb = basisFunction(b);
  std::pair<double, double> val{integrateProduct(pa, pb),
                                integrateProduct(pa.derivative(), pb.derivative())};
  map_.emplace(key, val);
  return val;
}

double entry(EntryCache& cache, double eps, double a, const TensorIndex& lam,
             const TensorIndex& mu) {
  double m[3], s[3];
  for (int l = 0; l < lam.dim; ++l) {
    auto [mv, sv] = cache.factors(factorOf(lam, l), factorOf(mu, l));
    if (mv == 0.0 && sv == 0.0) return 0.0;
    m[l] = mv;
    s[l] = sv;
  }
  double mProd = 1.0;
  for (int l = 0; l < lam.dim; ++l) mProd *= m[l];
  double raw = a * mProd;
  for (int i = 0; i < lam.dim; ++i) {
    double t = s[i];
    for (int l = 0; l < lam.dim; ++l)
      if (l != i) t *= m[l];
    raw += eps * t;
  }
  return raw / std::sqrt(diagEntry(eps, a, lam) * diagEntry(eps, a, mu));
}

namespace {

struct ActiveEntry {
  TensorIndex idx;
  std::array<std::pair<double, double>, 3> supp;
  std::uint64_t rank;
};

ActiveEntry makeEntry(const TensorIndex& ti, int j0) {
  ActiveEntry e{ti, {}, enumerationRank(ti, j0)};
  for (int l = 0; l < ti.dim; ++l) e.supp[l] = support1d(factorOf(ti, l));
  return e;
}

bool overlaps(const ActiveEntry& a, const ActiveEntry& b) {
  for (int l = 0; l < a.idx.dim; ++l)
    if (disjoint(a.supp[l], b.supp[l])) return false;
  return true;
}

/// 1D load factors <v, f> and <v'', f>, cached per function index.
class LoadCache {
 public:
  LoadCache(const ManufacturedProblem& p) : p_(p) {}
  std::pair<double, double> get(const FunctionIndex& idx) {
    std::uint64_t key = functionKey(idx);
    auto it = map_.find(key);
    if (it != map_.end()) return it->second;
    PiecewisePoly f = basisFunction(idx);
    std::pair<double, double> val{integrateAgainst(p_.v, f), integrateAgainst(p_.ddv, f)};
    map_.emplace(key, val);
    return val;
  }

 private:
  const ManufacturedProblem& p_;
  std::unordered_map<std::uint64_t, std::pair<double, double>> map_;
};

double rhsEntry(LoadCache& loads, const ManufacturedProblem& p, const TensorIndex& ti) {
  double gv[3], gw[3];
  for (int l = 0; l < ti.dim; ++l) {
    auto [v, w] = loads.get(factorOf(ti, l));
    gv[l] = v;
    gw[l] = w;
  }
  double vProd = 1.0;
  for (int l = 0; l < ti.dim; ++l) vProd *= gv[l];
  double val = p.a * vProd;
  for (int i = 0; i < ti.dim; ++i) {
    double t = gw[i];
    for (int l = 0; l < ti.dim; ++l)
      if (l != i) t *= gv[l];
    val -= p.eps * t;
  }
  return val / std::sqrt(diagEntry(p.eps, p.a, ti));
}

}  // namespace

AdaptiveResult adaptiveSolve(const ManufacturedProblem& problem,
                             const AdaptiveOptions& opts) {
  const int d = opts.dim;
  const int j0 = opts.j0;
  AdaptiveResult res;
  EntryCache cache;
  LoadCache loads(problem);

  std::vector<ActiveEntry> active;
  std::unordered_set<std::uint64_t> member;
  auto addIndex = [&](const TensorIndex& ti) {
    if (member.insert(tensorKey(ti)).second) active.push_back(makeEntry(ti, j0));
  };

  // seed with the coarsest scaling block
  {
    BasisSpec1D seed{j0, 0, false, Normalization::None};
    for (const TensorIndex& ti : enumerateTensor(d, seed)) addIndex(ti);
  }
  Eigen::VectorXd u = Eigen::VectorXd::Zero(active.size());

  // full-space embedding for error measurement (wavelet levels j0..jmax)
  std::unique_ptr<HelmholtzOperator> errorOp;
  if (opts.trackErrors)
    errorOp = std::make_unique<HelmholtzOperator>(
        d, problem.eps, problem.a,
        BasisSpec1D{j0, opts.jmax - j0 + 1, false, Normalization::None});

  // candidate generation: all indices at levels within one of lam whose
  // supports intersect lam's (includes parents and children)
  auto neighbors = [&](const ActiveEntry& lam, std::vector<TensorIndex>& out) {
    for (int j = std::max(j0, lam.idx.level - 1);
         j <= std::min(opts.jmax, lam.idx.level + 1); ++j) {
      const int n = 1 << j;
      const double twoJ = double(n);
      for (unsigned e = (j == j0) ? 0u : 1u; e < (1u << d); ++e) {
        std::array<int, 3> klo{1, 1, 1}, khi{1, 1, 1};
        for (int l = 0; l < d; ++l) {
          // superset of positions whose supports can intersect lam's; the
          // exact support test happens when entries are evaluated
          auto [lo, hi] = lam.supp[l];
          klo[l] = std::max(1, int(std::floor(lo * twoJ)) - 2);
          khi[l] = std::min(n, int(std::ceil(hi * twoJ)) + 2);
        }
        std::array<int, 3> k = klo;
        for (;;) {
          out.push_back({j, e, k, d});
          int l = d - 1;
          while (l >= 0 && k[l] == khi[l]) k[l--] = klo[l];
          if (l < 0) break;
          ++k[l];
        }
      }
    }
  };

  double prevResidual = -1.0;
  int flatCycles = 0;
  for (int cycle = 1; cycle <= opts.maxCycles; ++cycle) {
    // (1) extended set
    std::vector<ActiveEntry> extended = active;
    {
      std::unordered_set<std::uint64_t> seen = member;
      std::vector<TensorIndex> cand;
      for (const ActiveEntry& lam : active) neighbors(lam, cand);
      for (const TensorIndex& ti : cand)
        if (seen.insert(tensorKey(ti)).second) extended.push_back(makeEntry(ti, j0));
    }

    // (2) residual on the extended set
    Eigen::VectorXd r(extended.size());
    for (std::size_t i = 0; i < extended.size(); ++i) {
      double val = rhsEntry(loads, problem, extended[i].idx);
      for (std::size_t m = 0; m < active.size(); ++m)
        if (u(m) != 0.0 && overlaps(extended[i], active[m]))
          val -= entry(cache, problem.eps, problem.a, extended[i].idx, active[m].idx) *
                 u(m);
      r(i) = val;
    }
    const double resNorm = r.norm();

    bool done = resNorm <= opts.target;
    if (prevResidual > 0.0 && resNorm > 0.99 * prevResidual) {
      if (++flatCycles >= 3) {
        res.stagnated = true;
        done = true;
      }
    } else {
      flatCycles = 0;
    }
    prevResidual = resNorm;

    if (!done) {
      // (3) bulk chasing: smallest prefix of |r| (desc, rank tie-break)
      // capturing theta of the residual norm
      std::vector<std::size_t> order(extended.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        double ra = std::abs(r(a)), rb = std::abs(r(b));
        if (ra != rb) return ra > rb;
        return extended[a].rank < extended[b].rank;
      });
      const double capture = opts.theta * opts.theta * r.squaredNorm();
      double got = 0.0;
      for (std::size_t i : order) {
        if (got >= capture) break;
        got += r(i) * r(i);
        if (member.insert(tensorKey(extended[i].idx)).second)
          active.push_back(extended[i]);
      }

      // (4) Galerkin solve on the active set
      const Eigen::Index nn = Eigen::Index(active.size());
      std::vector<Eigen::Triplet<double>> trips;
      for (Eigen::Index i = 0; i < nn; ++i)
        for (Eigen::Index m = i; m < nn; ++m)
          if (overlaps(active[i], active[m])) {
            double v = entry(cache, problem.eps, problem.a, active[i].idx, active[m].idx);
            if (v != 0.0) {
              trips.emplace_back(i, m, v);
              if (m != i) trips.emplace_back(m, i, v);
            }
          }
      SpMat aMat(nn, nn);
      aMat.setFromTriplets(trips.begin(), trips.end());
      Eigen::VectorXd b(nn), x0 = Eigen::VectorXd::Zero(nn);
      for (Eigen::Index i = 0; i < nn; ++i) b(i) = rhsEntry(loads, problem, active[i].idx);
      x0.head(u.size()) = u;
      CGReport cg = conjugateGradient(
          [&aMat](const Eigen::VectorXd& x) { return aMat * x; }, b, x0,
          0.1 * resNorm, 10000);
      u = std::move(cg.x);

      // (5) coarsen every 5th cycle (coarsest scaling block exempt)
      if (cycle % 5 == 0 && u.size() > 0) {
        double thresh = 0.1 * u.cwiseAbs().mean();
        std::vector<ActiveEntry> kept;
        std::vector<double> keptU;
        for (Eigen::Index i = 0; i < u.size(); ++i)
          if (active[i].idx.type == 0 || std::abs(u(i)) >= thresh) {
            kept.push_back(active[i]);
            keptU.push_back(u(i));
          } else {
            member.erase(tensorKey(active[i].idx));
          }
        active = std::move(kept);
        u = Eigen::Map<Eigen::VectorXd>(keptU.data(), Eigen::Index(keptU.size()));
      }
    }

    AdaptiveCycle rec{cycle, Eigen::Index(active.size()), resNorm, 0.0, 0.0};
    if (opts.trackErrors) {
      Eigen::VectorXd full = Eigen::VectorXd::Zero(errorOp->size());
      for (std::size_t i = 0; i < active.size(); ++i)
        full(Eigen::Index(active[i].rank)) = u(Eigen::Index(i));
      // coarser-than-mesh quadrature grids: the history is diagnostic
      ErrorNorms en = errorNorms(*errorOp, full, problem, 11, 9);
      rec.linf = en.linf;
      rec.l2 = en.l2;
    }
    res.history.push_back(rec);
    if (done) {
      res.reachedTarget = resNorm <= opts.target;
      break;
    }
    if (opts.maxActive > 0 && Eigen::Index(active.size()) >= opts.maxActive) break;
  }

  res.active.reserve(active.size());
  for (const ActiveEntry& e : active) res.active.push_back(e.idx);
  res.coeffs = u;
  return res;
}

}  // namespace wavhelm
