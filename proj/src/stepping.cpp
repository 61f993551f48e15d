#include "fracpow/stepping.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "fracpow/rational.hpp"

namespace fracpow {

TimeMesh graded_time_mesh(int L, int n) {
  if (L < 0 || n < 1) throw DomainError("graded mesh needs L >= 0 and n >= 1");
  TimeMesh mesh;
  mesh.levels = L;
  mesh.perLevel = n;
  mesh.tag = "graded(" + std::to_string(L) + "," + std::to_string(n) + ")";
  mesh.points.push_back(0.0);
  double left = 0.0;
  for (int l = 1; l <= L + 1; ++l) {
    const double right = std::ldexp(1.0, l - 1 - L);
    for (int s = 1; s <= n; ++s) mesh.points.push_back(left + (right - left) * s / n);
    left = right;
  }
  mesh.points.back() = 1.0;
  return mesh;
}

TimeMesh uniform_time_mesh(double T, int M) {
  if (!(T > 0.0) || M < 1) throw DomainError("uniform mesh needs T > 0 and M >= 1");
  TimeMesh mesh;
  mesh.tag = "uniform";
  for (int j = 0; j <= M; ++j) mesh.points.push_back(T * j / M);
  mesh.points.back() = T;
  return mesh;
}

int default_levels(double lambdaMax, double delta) {
  if (!(delta > 0.0) || !(lambdaMax >= delta)) throw DomainError("need 0 < delta <= lambdaMax");
  return std::max(0, static_cast<int>(std::ceil(std::log2(lambdaMax / delta) - 1e-12)));
}

std::pair<Vec, SolveReport> pseudo_parabolic_march(const DiscreteOperator& op, double alpha,
                                                   double delta, int m, const TimeMesh& mesh,
                                                   const Vec& f, const SolverConfig& cfg) {
  require_alpha(alpha);
  if (m < 1 || m > 3) throw DomainError("Pade degree m must be 1, 2 or 3");
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  if (delta > op.lambdaMin() * (1.0 + 1e-14))
    throw DomainError("delta exceeds lambdaMin: A - delta I would be indefinite");
  if (mesh.points.size() < 2) throw DomainError("time mesh needs at least one step");
  if (f.size() != static_cast<std::size_t>(op.dimension()))
    throw DimensionError("right-hand side length does not match operator dimension");
  const auto t0 = std::chrono::steady_clock::now();
  const PartialFractionRational pade = pade_table(alpha, m).fractions;
  for (const auto& t : pade.terms)
    if (!(t.pole < 0.0) || !(t.residue > 0.0)) throw PoleError("Pade pole/residue sign violation");

  SolveReport rep;
  rep.method = "pseudo-parabolic";
  rep.parameters["m"] = std::to_string(m);
  rep.parameters["mesh"] = mesh.tag;
  rep.parameters["alpha"] = std::to_string(alpha);
  {
    std::ostringstream os;
    os.precision(17);
    os << delta;
    rep.parameters["delta"] = os.str();
  }

  const std::size_t n = f.size();
  Vec U(n);
  const double start = std::pow(delta, -alpha);
  for (std::size_t i = 0; i < n; ++i) U[i] = start * f[i];

  for (std::size_t l = 0; l + 1 < mesh.points.size(); ++l) {
    const double t = mesh.points[l];
    const double k = mesh.points[l + 1] - t;
    Vec next(n);
    for (std::size_t i = 0; i < n; ++i) next[i] = pade.c0 * U[i];
    for (const auto& term : pade.terms) {
      const double d = term.pole;
      const double a = k - d * t;  // > 0
      // ((k - d t) B - d delta I) w = U  with B = A - delta I
      const double shift = -delta * (1.0 + d / a);
      Vec rhs(n);
      for (std::size_t i = 0; i < n; ++i) rhs[i] = U[i] / a;
      ShiftStats st;
      Vec w;
      try {
        w = detail::solve_spd_shift(op, shift, rhs, cfg, st);
      } catch (const SolverError& e) {
        rep.failed = true;
        rep.failure = e.what();
        throw;
      }
      rep.shiftedSolves++;
      rep.iterations.push_back(st.iterations);
      rep.residuals.push_back(st.residual);
      // (delta I + t B) w = (1 - t) delta w + t A w
      Vec Aw = matvec(op, w);
      for (std::size_t i = 0; i < n; ++i)
        next[i] += term.residue * ((1.0 - t) * delta * w[i] + t * Aw[i]);
    }
    U.swap(next);
  }
  const std::size_t expected = mesh.steps() * static_cast<std::size_t>(m);
  if (rep.shiftedSolves != expected) throw Error("pseudo-parabolic solve count mismatch");
  rep.wallSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(U), std::move(rep)};
}

namespace {

void checkEvolution(const DiscreteOperator& op, const Vec& v0, double T, int M) {
  if (!(T > 0.0) || M < 1) throw DomainError("need T > 0 and M >= 1 steps");
  if (v0.size() != static_cast<std::size_t>(op.dimension()))
    throw DimensionError("initial state length does not match operator dimension");
}

Vec sampleSource(const Source& f, double t, std::size_t n) {
  if (!f) return Vec(n, 0.0);
  Vec v = f(t);
  if (v.size() != n) throw DimensionError("source length does not match operator dimension");
  return v;
}

}  // namespace

Trajectory implicit_euler_evolution(const DiscreteOperator& op, double alpha, const Source& f,
                                    const Vec& v0, double T, int M, const SolverConfig& cfg,
                                    const MethodSpec& base) {
  checkEvolution(op, v0, T, M);
  const double tau = T / M;
  const PartialFractionRational r = diffusion_reaction_rational(op, alpha, 1.0 / tau, base);
  Trajectory tr;
  tr.report.method = "backward-euler";
  tr.report.parameters = base.echo();
  tr.times.push_back(0.0);
  tr.states.push_back(v0);
  const std::size_t n = v0.size();
  for (int j = 0; j < M; ++j) {
    const double tNext = T * (j + 1) / M;
    const Vec F = sampleSource(f, tNext, n);
    const Vec& u = tr.states.back();
    Vec rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = u[i] / tau + F[i];
    auto [next, rep] = apply_rational(op, r, rhs, cfg);
    tr.report.merge(rep);
    if (rep.failed) throw SolverError("backward Euler step failed: " + rep.failure, 1.0);
    tr.times.push_back(tNext);
    tr.states.push_back(std::move(next));
  }
  return tr;
}

Trajectory explicit_evolution(const DiscreteOperator& op, double alpha, const Source& f,
                              const Vec& v0, double T, int M, ExplicitVariant variant,
                              const SolverConfig& cfg, const MethodSpec& power) {
  require_alpha(alpha);
  checkEvolution(op, v0, T, M);
  if (variant.regularized && !(variant.sigma > 0.0))
    throw DomainError("regularized scheme needs sigma > 0");
  const double tau = T / M;
  const std::size_t n = v0.size();
  // A^alpha = A A^{-(1-alpha)}: one rational built once
  const PartialFractionRational inner = build_rational(op, 1.0 - alpha, power);

  Trajectory tr;
  tr.report.method = variant.regularized ? "regularized-explicit" : "explicit";
  tr.report.parameters = power.echo();
  tr.stabilityWarning = !variant.regularized && tau * std::pow(op.lambdaMax(), alpha) > 2.0;
  tr.times.push_back(0.0);
  tr.states.push_back(v0);
  double norm0 = weighted_norm(op, v0);

  const double sa = variant.sigma * alpha;
  const double shift = variant.regularized ? (1.0 + tau * variant.sigma * (1.0 - alpha)) / (tau * sa) : 0.0;
  for (int j = 0; j < M; ++j) {
    const double t = T * j / M;
    const Vec& u = tr.states.back();
    auto [v, rep] = apply_rational(op, inner, u, cfg);
    tr.report.merge(rep);
    const Vec Au = matvec(op, v);
    const Vec F = sampleSource(f, t, n);
    Vec g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = F[i] - Au[i];
    Vec next(n);
    if (variant.regularized) {
      // (I + tau R) = tau sigma alpha (A + shift I)
      ShiftStats st;
      Vec y = shifted_solve(op, shift, g, cfg, &st);
      tr.report.shiftedSolves++;
      tr.report.iterations.push_back(st.iterations);
      tr.report.residuals.push_back(st.residual);
      for (std::size_t i = 0; i < n; ++i) next[i] = u[i] + y[i] / sa;
    } else {
      for (std::size_t i = 0; i < n; ++i) next[i] = u[i] + tau * g[i];
    }
    const double nrm = weighted_norm(op, next);
    // a zero start is measured against the first nonzero state instead
    if (norm0 == 0.0 && std::isfinite(nrm)) norm0 = nrm;
    if (!std::isfinite(nrm) || nrm > kBlowUpFactor * norm0) {
      std::ostringstream os;
      os << "blow-up at step " << j + 1 << ": norm grew by " << nrm / norm0
         << (tr.stabilityWarning ? " (tau * lambdaMax^alpha > 2)" : "");
      throw BlowUpError(os.str(), static_cast<std::size_t>(j + 1));
    }
    tr.times.push_back(T * (j + 1) / M);
    tr.states.push_back(std::move(next));
  }
  return tr;
}

SplitTrajectory sequential_splitting(const std::vector<SplitComponent>& components,
                                     const Reaction& reaction, const ComponentSources& sources,
                                     const std::vector<Vec>& U0, double T, int M,
                                     const SolverConfig& cfg, const MethodSpec& base) {
  const std::size_t mc = components.size();
  if (mc == 0 || U0.size() != mc) throw DimensionError("one initial state per component required");
  if (!(T > 0.0) || M < 1) throw DomainError("need T > 0 and M >= 1 steps");
  const std::size_t n = U0[0].size();
  for (std::size_t c = 0; c < mc; ++c) {
    if (!components[c].op || components[c].op->dimension() != static_cast<int>(n) ||
        U0[c].size() != n)
      throw DimensionError("all components must share one dimension");
  }
  const double tau = T / M;
  std::vector<PartialFractionRational> steps;
  for (const auto& comp : components)
    steps.push_back(diffusion_reaction_rational(*comp.op, comp.alpha, 1.0 / tau, base));

  auto rhs = [&](const std::vector<Vec>& U, double t) {
    std::vector<Vec> out;
    if (reaction) {
      out = reaction(U, t);
      if (out.size() != mc) throw DimensionError("reaction returned the wrong component count");
    } else {
      out.assign(mc, Vec(n, 0.0));
    }
    if (sources) {
      std::vector<Vec> F = sources(t);
      if (F.size() != mc) throw DimensionError("source returned the wrong component count");
      for (std::size_t c = 0; c < mc; ++c)
        for (std::size_t i = 0; i < n; ++i) out[c][i] += F[c][i];
    }
    return out;
  };
  auto axpy = [&](const std::vector<Vec>& U, double a, const std::vector<Vec>& K) {
    std::vector<Vec> out = U;
    for (std::size_t c = 0; c < mc; ++c)
      for (std::size_t i = 0; i < n; ++i) out[c][i] += a * K[c][i];
    return out;
  };

  SplitTrajectory tr;
  tr.report.method = "sequential-splitting";
  tr.report.parameters = base.echo();
  tr.times.push_back(0.0);
  tr.states.push_back(U0);
  double norm0 = 0.0;
  for (const auto& u : U0)
    for (double x : u) norm0 += x * x;
  norm0 = std::sqrt(norm0);

  for (int j = 0; j < M; ++j) {
    const double t = T * j / M;
    std::vector<Vec> U = tr.states.back();
    // diffusion: one backward Euler step per component
    for (std::size_t c = 0; c < mc; ++c) {
      Vec b(n);
      for (std::size_t i = 0; i < n; ++i) b[i] = U[c][i] / tau;
      auto [next, rep] = apply_rational(*components[c].op, steps[c], b, cfg);
      tr.report.merge(rep);
      if (rep.failed) throw SolverError("diffusion substep failed: " + rep.failure, 1.0);
      U[c] = std::move(next);
    }
    // reaction + source: classical RK4 with fixed substeps
    const double h = tau / kReactionSubsteps;
    for (int s = 0; s < kReactionSubsteps; ++s) {
      const double ts = t + s * h;
      std::vector<Vec> k1, k2, k3, k4;
      try {
        k1 = rhs(U, ts);
        k2 = rhs(axpy(U, 0.5 * h, k1), ts + 0.5 * h);
        k3 = rhs(axpy(U, 0.5 * h, k2), ts + 0.5 * h);
        k4 = rhs(axpy(U, h, k3), ts + h);
      } catch (const Error&) {
        throw;
      } catch (const std::exception& e) {
        throw Error(std::string("reaction callback failed: ") + e.what());
      }
      for (std::size_t c = 0; c < mc; ++c)
        for (std::size_t i = 0; i < n; ++i)
          U[c][i] += h / 6.0 * (k1[c][i] + 2.0 * k2[c][i] + 2.0 * k3[c][i] + k4[c][i]);
    }
    double nrm = 0.0;
    for (const auto& u : U)
      for (double x : u) nrm += x * x;
    nrm = std::sqrt(nrm);
    if (norm0 == 0.0 && std::isfinite(nrm)) norm0 = nrm;
    if (!std::isfinite(nrm) || nrm > kBlowUpFactor * norm0)
      throw BlowUpError("splitting blow-up at step " + std::to_string(j + 1),
                        static_cast<std::size_t>(j + 1));
    tr.times.push_back(T * (j + 1) / M);
    tr.states.push_back(std::move(U));
  }
  return tr;
}

}  // namespace fracpow
