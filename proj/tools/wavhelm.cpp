#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "wavhelm/adaptive.hpp"
#include "wavhelm/problems.hpp"
#include "wavhelm/solver.hpp"

using namespace wavhelm;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.5e", v);
  return buf;
}

std::string fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// Writes csv to `out` (stdout if empty) plus a .manifest.json sidecar.
void emit(const std::string& out, const std::string& command,
          const nlohmann::json& flags, const std::string& csv) {
  if (out.empty()) {
    std::cout << csv;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  f << csv;
  f.close();
  nlohmann::json manifest{
      {"command", command},
      {"flags", flags},
      {"version", kVersion},
      {"timestamp",
       std::chrono::duration_cast<std::chrono::seconds>(
           std::chrono::system_clock::now().time_since_epoch())
           .count()},
      {"output", out},
      {"checksum_fnv1a", fnv1a(csv)}};
  std::ofstream m(out + ".manifest.json");
  m << manifest.dump(2) << "\n";
}

/// "3" -> [3,3]; "1..8" -> [1,8]
bool parseRange(const std::string& s, int& lo, int& hi) {
  auto pos = s.find("..");
  try {
    if (pos == std::string::npos) {
      lo = hi = std::stoi(s);
    } else {
      lo = std::stoi(s.substr(0, pos));
      hi = std::stoi(s.substr(pos + 2));
    }
  } catch (...) {
    return false;
  }
  return lo >= 0 && hi >= lo;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("WAVHELM_THREADS"))
    Eigen::setNbThreads(std::max(1, std::atoi(threads)));

  CLI::App app{"quadratic spline wavelet toolkit on (0,1)^d"};
  app.require_subcommand(1);
  std::string out;
  app.add_option("--out", out, "write CSV here (with JSON manifest sidecar)");

  // ---- cond ----
  auto* cond = app.add_subcommand("cond", "condition numbers of the preconditioned matrix");
  int dim = 1, j0 = 2;
  double eps = 1.0, aCoef = 0.0;
  bool ortho = false;
  std::string levels = "1";
  cond->add_option("--dim", dim, "space dimension")->check(CLI::Range(1, 3));
  cond->add_option("--levels", levels, "wavelet levels s or range lo..hi");
  cond->add_option("--eps", eps, "diffusion coefficient");
  cond->add_option("--a", aCoef, "reaction coefficient");
  cond->add_option("--j0", j0, "coarsest level")->check(CLI::Range(2, 3));
  cond->add_flag("--ortho", ortho, "orthogonalize the coarsest scaling block");

  // ---- galerkin ----
  auto* gal = app.add_subcommand("galerkin", "multilevel Galerkin CG on the boundary-layer problem");
  int gLevels = 4, gDim = 2, gJ0 = 2, gridExp = 0;
  double gEps = 1.0, gA = 0.0;
  gal->add_option("--levels", gLevels, "finest number of wavelet levels s");
  gal->add_option("--dim", gDim)->check(CLI::Range(1, 2));
  gal->add_option("--eps", gEps);
  gal->add_option("--a", gA);
  gal->add_option("--j0", gJ0)->check(CLI::Range(2, 3));
  gal->add_option("--grid-exp", gridExp, "L-infinity grid exponent override");

  // ---- adaptive ----
  auto* ada = app.add_subcommand("adaptive", "adaptive wavelet solver history");
  AdaptiveOptions aopt;
  ada->add_option("--eps", aopt.eps);
  ada->add_option("--a", aopt.a);
  ada->add_option("--dim", aopt.dim)->check(CLI::Range(1, 3));
  ada->add_option("--maxlevel", aopt.jmax);
  ada->add_option("--theta", aopt.theta)->check(CLI::Range(0.0, 1.0));
  ada->add_option("--target", aopt.target);
  ada->add_option("--cycles", aopt.maxCycles);

  // ---- basis dump ----
  auto* basis = app.add_subcommand("basis", "basis function utilities");
  auto* dump = basis->add_subcommand("dump", "sample a basis function");
  int bj = 2, bk = 1, samples = 257;
  std::string kindStr = "scaling";
  dump->add_option("--j", bj, "level")->required();
  dump->add_option("--k", bk, "position")->required();
  dump->add_option("--kind", kindStr)->check(CLI::IsMember({"scaling", "wavelet"}));
  dump->add_option("--samples", samples);

  // ---- lemmas verify ----
  auto* lemmas = app.add_subcommand("lemmas", "dual-matrix norm lemmas");
  auto* verify = lemmas->add_subcommand("verify", "numerical norm-bound checks");
  int jmax = 9;
  verify->add_option("--jmax", jmax)->check(CLI::Range(4, 12));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*cond) {
      int lo, hi;
      if (!parseRange(levels, lo, hi)) {
        std::cerr << "invalid --levels range: " << levels << "\n";
        return 2;
      }
      std::ostringstream csv;
      csv << "s,N,lambda_min,lambda_max,cond\n";
      bool ok = true;
      for (int s = lo; s <= hi; ++s) {
        HelmholtzOperator op(dim, eps, aCoef, {j0, s, ortho, Normalization::None});
        EigenEstimate est = conditionEstimate(op, 1e-6, eps == 0.0 ? 5000 : 1500);
        ok = ok && est.converged;
        csv << s << "," << op.size() << "," << fmt(est.lambdaMin) << ","
            << fmt(est.lambdaMax) << "," << fmt(est.lambdaMax / est.lambdaMin) << "\n";
      }
      emit(out, "cond",
           {{"dim", dim}, {"levels", levels}, {"eps", eps}, {"a", aCoef},
            {"j0", j0}, {"ortho", ortho}},
           csv.str());
      return ok ? 0 : 3;
    }

    if (*gal) {
      ManufacturedProblem p = boundaryLayerProblem(gDim, gEps, gA);
      MultilevelReport rep = multilevelGalerkin(
          gDim, gEps, gA, {gJ0, 0, false, Normalization::None}, gLevels,
          [&p](const HelmholtzOperator& op) { return rhsLoadVector(p, op); });
      HelmholtzOperator op(gDim, gEps, gA, {gJ0, gLevels, false, Normalization::None});
      ErrorNorms en = errorNorms(op, rep.solution, p, gridExp);
      std::ostringstream csv;
      csv << "s,N,M,linf,l2\n";
      char mbuf[32];
      std::snprintf(mbuf, sizeof(mbuf), "%.2f", rep.equivalentIterations);
      csv << gLevels << "," << op.size() << "," << mbuf << "," << fmt(en.linf) << ","
          << fmt(en.l2) << "\n";
      emit(out, "galerkin",
           {{"levels", gLevels}, {"dim", gDim}, {"eps", gEps}, {"a", gA},
            {"j0", gJ0}, {"grid_exp", gridExp}},
           csv.str());
      return rep.converged ? 0 : 3;
    }

    if (*ada) {
      ManufacturedProblem p = boundaryLayerProblem(aopt.dim, aopt.eps, aopt.a);
      AdaptiveResult res = adaptiveSolve(p, aopt);
      std::ostringstream csv;
      csv << "cycle,active,residual,linf,l2\n";
      for (const AdaptiveCycle& c : res.history)
        csv << c.cycle << "," << c.activeSize << "," << fmt(c.residual) << ","
            << fmt(c.linf) << "," << fmt(c.l2) << "\n";
      emit(out, "adaptive",
           {{"eps", aopt.eps}, {"a", aopt.a}, {"dim", aopt.dim},
            {"maxlevel", aopt.jmax}, {"theta", aopt.theta}, {"target", aopt.target}},
           csv.str());
      return res.reachedTarget || !res.stagnated ? 0 : 3;
    }

    if (*dump) {
      if (bk < 1 || bk > (1 << bj)) {
        std::cerr << "position k out of range 1..2^j\n";
        return 2;
      }
      FunctionIndex idx{bj, kindStr == "wavelet" ? FunctionKind::Wavelet
                                                 : FunctionKind::Scaling, bk};
      PiecewisePoly f = basisFunction(idx);
      std::ostringstream csv;
      csv << "x,value\n";
      for (int i = 0; i < samples; ++i) {
        double x = double(i) / double(samples - 1);
        csv << fmt(x) << "," << fmt(f(x)) << "\n";
      }
      emit(out, "basis dump",
           {{"j", bj}, {"k", bk}, {"kind", kindStr}, {"samples", samples}}, csv.str());
      return 0;
    }

    if (*verify) {
      LemmaReport rep = verifyNormLemmas(jmax);
      std::ostringstream csv;
      csv << "check,value,bound,pass\n";
      double dualMax = *std::max_element(rep.dualNorms.begin(), rep.dualNorms.end());
      double pairMax = *std::max_element(rep.pairSumNorms.begin(), rep.pairSumNorms.end());
      csv << "dual_norm_max," << fmt(dualMax) << "," << fmt(2.8) << ","
          << (rep.dualNormsOk ? 1 : 0) << "\n";
      csv << "pair_sum_max," << fmt(pairMax) << "," << fmt(2.0 * std::sqrt(2.0)) << ","
          << (rep.pairSumOk ? 1 : 0) << "\n";
      csv << "growth_exponent," << fmt(rep.fittedExponent) << "," << fmt(0.5) << ","
          << (rep.exponentOk ? 1 : 0) << "\n";
      emit(out, "lemmas verify", {{"jmax", jmax}}, csv.str());
      return rep.dualNormsOk && rep.pairSumOk && rep.exponentOk ? 0 : 3;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
