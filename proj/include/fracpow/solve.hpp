#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fracpow/core.hpp"
#include "fracpow/rational.hpp"

namespace fracpow {

enum class Preconditioner { None, Diagonal };

struct SolverConfig {
  double relTol = 1e-10;
  int maxIter = 20000;
  Preconditioner preconditioner = Preconditioner::Diagonal;
  int workerCount = 1;
  // tridiagonal stiffness goes to direct elimination unless disabled
  bool directTridiagonal = true;

  void check() const;
};

// FRACPOW_WORKERS when set, else 1.
int default_worker_count();

struct SolveReport {
  std::string method;
  std::map<std::string, std::string> parameters;
  std::size_t shiftedSolves = 0;
  std::vector<int> iterations;
  std::vector<double> residuals;
  double wallSeconds = 0.0;
  bool failed = false;
  std::string failure;
  // optional error-vs-oracle entries, keyed e.g. "l2_rel_f", "linf_rel_uref"
  std::map<std::string, double> errors;

  void merge(const SolveReport& other);
};

struct ShiftStats {
  int iterations = 0;
  double residual = 0.0;
};

// (S + c D) w = D b, i.e. (A + c I) w = b; c >= 0.
Vec shifted_solve(const DiscreteOperator& op, double c, const Vec& b, const SolverConfig& cfg,
                  ShiftStats* stats = nullptr);

namespace detail {
// Same system without the sign check on c; the caller guarantees S + cD is SPD.
Vec solve_spd_shift(const DiscreteOperator& op, double c, const Vec& b, const SolverConfig& cfg,
                    ShiftStats& stats);
}

std::pair<Vec, SolveReport> apply_rational(const DiscreteOperator& op,
                                           const PartialFractionRational& r, const Vec& f,
                                           const SolverConfig& cfg);

// Method selection for fractional_solve and friends.
struct MethodSpec {
  std::string tag = "aaa";  // sinc | gauss-jacobi | sigma | aaa | bura | extension
  // sinc
  double kprime = 0.5;
  int sincM = -1;  // explicit counts when both >= 0
  int sincN = -1;
  // gauss-jacobi nodes, aaa degree, bura degree
  int k = 8;
  double tau = 0.0;
  // sigma
  int kappa = 2;
  int Msub = 64;
  // aaa
  AaaOptions aaa{};
  // bura: explicit table path, else the built-in table for (alpha, k)
  std::string table;
  // extension
  int extM = 40;
  double extY = 7.0;
  double extGrading = 3.0;

  std::map<std::string, std::string> echo() const;
};

// Backend PFR with the operator scaling attached (delta = lambdaMin for
// aaa/bura/sigma).
PartialFractionRational build_rational(const DiscreteOperator& op, double alpha,
                                       const MethodSpec& method);

std::pair<Vec, SolveReport> fractional_solve(const DiscreteOperator& op, double alpha,
                                             const MethodSpec& method, const Vec& f,
                                             const SolverConfig& cfg);

// r / (1 + q2 r) in partial fractions; prefactor folded into the coefficients.
PartialFractionRational ura_transform(const PartialFractionRational& r, double q2);

// Approximates (A^alpha + q I)^{-1}. The base must be aaa or bura.
PartialFractionRational diffusion_reaction_rational(const DiscreteOperator& op, double alpha,
                                                    double q, const MethodSpec& base);

// aaa with degree up to 20 and a near-roundoff target.
MethodSpec accurate_method();

std::pair<Vec, SolveReport> diffusion_reaction_solve(const DiscreteOperator& op, double alpha,
                                                     double q, const Vec& f,
                                                     const SolverConfig& cfg,
                                                     const MethodSpec& base = accurate_method());

// A (A^{-(1-alpha)} f)
Vec apply_fractional_power(const DiscreteOperator& op, double alpha, const Vec& f,
                           const SolverConfig& cfg, const MethodSpec& method = accurate_method(),
                           SolveReport* report = nullptr);

}  // namespace fracpow
