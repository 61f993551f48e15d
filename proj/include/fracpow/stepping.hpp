#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "fracpow/core.hpp"
#include "fracpow/solve.hpp"

namespace fracpow {

struct TimeMesh {
  Vec points;
  std::string tag;  // "uniform" or "graded(L,n)"
  int levels = 0;
  int perLevel = 0;

  std::size_t steps() const { return points.empty() ? 0 : points.size() - 1; }
};

TimeMesh graded_time_mesh(int L, int n);
TimeMesh uniform_time_mesh(double T, int M);

// ceil(log2(lambdaMax / delta)), at least 0
int default_levels(double lambdaMax, double delta);

std::pair<Vec, SolveReport> pseudo_parabolic_march(const DiscreteOperator& op, double alpha,
                                                   double delta, int m, const TimeMesh& mesh,
                                                   const Vec& f, const SolverConfig& cfg);

using Source = std::function<Vec(double t)>;  // empty means f = 0

struct Trajectory {
  Vec times;
  std::vector<Vec> states;  // states[j] at times[j], j = 0..M
  SolveReport report;
  // plain explicit scheme: tau * lambdaMax^alpha > 2
  bool stabilityWarning = false;
};

Trajectory implicit_euler_evolution(const DiscreteOperator& op, double alpha, const Source& f,
                                    const Vec& v0, double T, int M, const SolverConfig& cfg,
                                    const MethodSpec& base = accurate_method());

struct ExplicitVariant {
  bool regularized = false;
  double sigma = 0.5;

  static ExplicitVariant plain() { return {}; }
  static ExplicitVariant regular(double sigma) { return {true, sigma}; }
};

inline constexpr double kBlowUpFactor = 1e6;

// Throws BlowUpError once |u^j| > kBlowUpFactor * |u^0|.
Trajectory explicit_evolution(const DiscreteOperator& op, double alpha, const Source& f,
                              const Vec& v0, double T, int M, ExplicitVariant variant,
                              const SolverConfig& cfg, const MethodSpec& power = accurate_method());

struct SplitComponent {
  const DiscreteOperator* op;
  double alpha;
};

// R(u_1..u_m, t) -> du/dt contributions for each component.
using Reaction = std::function<std::vector<Vec>(const std::vector<Vec>&, double t)>;
using ComponentSources = std::function<std::vector<Vec>(double t)>;  // may be empty

struct SplitTrajectory {
  Vec times;
  std::vector<std::vector<Vec>> states;  // states[j][component]
  SolveReport report;
};

inline constexpr int kReactionSubsteps = 4;

SplitTrajectory sequential_splitting(const std::vector<SplitComponent>& components,
                                     const Reaction& reaction, const ComponentSources& sources,
                                     const std::vector<Vec>& U0, double T, int M,
                                     const SolverConfig& cfg,
                                     const MethodSpec& base = accurate_method());

}  // namespace fracpow
