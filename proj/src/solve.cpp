#include "fracpow/solve.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <thread>

namespace fracpow {

void SolverConfig::check() const {
  if (!(relTol > 0.0 && relTol < 1.0)) throw DomainError("relTol must lie in (0,1)");
  if (maxIter < 1) throw DomainError("maxIter must be >= 1");
  if (workerCount < 1) throw DomainError("workerCount must be >= 1");
}

int default_worker_count() {
  if (const char* env = std::getenv("FRACPOW_WORKERS")) {
    const int w = std::atoi(env);
    if (w >= 1) return w;
  }
  return 1;
}

void SolveReport::merge(const SolveReport& other) {
  shiftedSolves += other.shiftedSolves;
  iterations.insert(iterations.end(), other.iterations.begin(), other.iterations.end());
  residuals.insert(residuals.end(), other.residuals.begin(), other.residuals.end());
  wallSeconds += other.wallSeconds;
  if (other.failed) {
    failed = true;
    if (failure.empty()) failure = other.failure;
  }
}

namespace {

double norm2(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// (S + cD) w - D b in the Euclidean norm, relative to |D b|.
double relativeResidual(const DiscreteOperator& op, double c, const Vec& w, const Vec& b) {
  Vec Sw = stiffnessProduct(op, w);
  const Vec& D = op.massDiag();
  double rr = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double rhs = D[i] * b[i];
    const double r = Sw[i] + c * D[i] * w[i] - rhs;
    rr += r * r;
    bb += rhs * rhs;
  }
  return bb > 0.0 ? std::sqrt(rr / bb) : std::sqrt(rr);
}

Vec thomas(const DiscreteOperator& op, double c, const Vec& b) {
  const int n = op.dimension();
  const auto& S = op.stiffness();
  const Vec& D = op.massDiag();
  Vec diag(n), lower(n, 0.0), upper(n, 0.0), rhs(n);
  for (int i = 0; i < n; ++i) {
    diag[i] = S.at(i, i) + c * D[i];
    if (i > 0) lower[i] = S.at(i, i - 1);
    if (i + 1 < n) upper[i] = S.at(i, i + 1);
    rhs[i] = D[i] * b[i];
  }
  for (int i = 1; i < n; ++i) {
    if (diag[i - 1] == 0.0) throw SolverError("zero pivot in tridiagonal elimination", 1.0);
    const double m = lower[i] / diag[i - 1];
    diag[i] -= m * upper[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  Vec w(n);
  if (diag[n - 1] == 0.0) throw SolverError("zero pivot in tridiagonal elimination", 1.0);
  w[n - 1] = rhs[n - 1] / diag[n - 1];
  for (int i = n - 2; i >= 0; --i) w[i] = (rhs[i] - upper[i] * w[i + 1]) / diag[i];
  return w;
}

Vec conjugateGradient(const DiscreteOperator& op, double c, const Vec& b,
                      const SolverConfig& cfg, ShiftStats& stats) {
  const int n = op.dimension();
  const auto& S = op.stiffness();
  const Vec& D = op.massDiag();
  Vec rhs(n), precond(n, 1.0);
  for (int i = 0; i < n; ++i) rhs[i] = D[i] * b[i];
  if (cfg.preconditioner == Preconditioner::Diagonal) {
    for (int i = 0; i < n; ++i) {
      const double d = S.at(i, i) + c * D[i];
      if (!(d > 0.0)) throw SolverError("nonpositive diagonal in shifted matrix", 1.0);
      precond[i] = 1.0 / d;
    }
  }
  const double bnorm = norm2(rhs);
  Vec x(n, 0.0);
  if (bnorm == 0.0) {
    stats.iterations = 0;
    stats.residual = 0.0;
    return x;
  }
  Vec r = rhs, z(n), p(n), q(n);
  for (int i = 0; i < n; ++i) z[i] = precond[i] * r[i];
  p = z;
  double rz = 0.0;
  for (int i = 0; i < n; ++i) rz += r[i] * z[i];
  double rnorm = bnorm;
  int it = 0;
  while (rnorm > cfg.relTol * bnorm) {
    if (it >= cfg.maxIter) {
      stats.iterations = it;
      stats.residual = rnorm / bnorm;
      std::ostringstream os;
      os << "CG reached maxIter=" << cfg.maxIter << " with relative residual " << rnorm / bnorm;
      throw SolverError(os.str(), rnorm / bnorm);
    }
    S.multiply(p, q);
    double pq = 0.0;
    for (int i = 0; i < n; ++i) {
      q[i] += c * D[i] * p[i];
      pq += p[i] * q[i];
    }
    if (!(pq > 0.0)) throw SolverError("shifted matrix is not positive definite", rnorm / bnorm);
    const double step = rz / pq;
    double rzNew = 0.0, rr = 0.0;
    for (int i = 0; i < n; ++i) {
      x[i] += step * p[i];
      r[i] -= step * q[i];
      z[i] = precond[i] * r[i];
      rzNew += r[i] * z[i];
      rr += r[i] * r[i];
    }
    rnorm = std::sqrt(rr);
    const double beta = rzNew / rz;
    rz = rzNew;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    ++it;
  }
  stats.iterations = it;
  stats.residual = rnorm / bnorm;
  return x;
}

}  // namespace

namespace detail {

Vec solve_spd_shift(const DiscreteOperator& op, double c, const Vec& b, const SolverConfig& cfg,
                    ShiftStats& stats) {
  cfg.check();
  if (b.size() != static_cast<std::size_t>(op.dimension()))
    throw DimensionError("right-hand side length does not match operator dimension");
  if (cfg.directTridiagonal && op.stiffness().isTridiagonal()) {
    Vec w = thomas(op, c, b);
    stats.iterations = 1;
    stats.residual = relativeResidual(op, c, w, b);
    return w;
  }
  return conjugateGradient(op, c, b, cfg, stats);
}

}  // namespace detail

Vec shifted_solve(const DiscreteOperator& op, double c, const Vec& b, const SolverConfig& cfg,
                  ShiftStats* stats) {
  if (!(c >= 0.0)) throw DomainError("shift c must be nonnegative");
  ShiftStats local;
  Vec w = detail::solve_spd_shift(op, c, b, cfg, local);
  if (stats) *stats = local;
  return w;
}

std::pair<Vec, SolveReport> apply_rational(const DiscreteOperator& op,
                                           const PartialFractionRational& r, const Vec& f,
                                           const SolverConfig& cfg) {
  cfg.check();
  validate(r);
  if (f.size() != static_cast<std::size_t>(op.dimension()))
    throw DimensionError("right-hand side length does not match operator dimension");
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t k = r.terms.size();
  const double s = r.matrixScale;
  Vec rhs(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) rhs[i] = f[i] / s;

  std::vector<Vec> parts(k);
  std::vector<ShiftStats> stats(k);
  std::vector<std::string> errors(k);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < k; i = next++) {
      try {
        // (sA - d) w = f  <=>  (A + (-d/s)) w = f/s
        parts[i] = detail::solve_spd_shift(op, -r.terms[i].pole / s, rhs, cfg, stats[i]);
      } catch (const SolverError& e) {
        errors[i] = e.what();
        stats[i].residual = e.achievedResidual;
      }
    }
  };
  const int threads = static_cast<int>(std::min<std::size_t>(cfg.workerCount, k));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  SolveReport rep;
  rep.method = r.method;
  rep.shiftedSolves = k;
  Vec u(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) u[j] = r.c0 * f[j];
  // merged in term order regardless of completion order
  for (std::size_t i = 0; i < k; ++i) {
    rep.iterations.push_back(stats[i].iterations);
    rep.residuals.push_back(stats[i].residual);
    if (!errors[i].empty()) {
      rep.failed = true;
      if (rep.failure.empty()) rep.failure = "term " + std::to_string(i) + ": " + errors[i];
      continue;
    }
    const double c = r.terms[i].residue;
    for (std::size_t j = 0; j < f.size(); ++j) u[j] += c * parts[i][j];
  }
  for (double& x : u) x *= r.prefactor;
  rep.wallSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(u), std::move(rep)};
}

std::map<std::string, std::string> MethodSpec::echo() const {
  std::map<std::string, std::string> m;
  auto num = [](double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  };
  m["method"] = tag;
  if (tag == "sinc") {
    m["kprime"] = num(kprime);
    if (sincM >= 0 && sincN >= 0) {
      m["M"] = std::to_string(sincM);
      m["N"] = std::to_string(sincN);
    }
  } else if (tag == "gauss-jacobi") {
    m["k"] = std::to_string(k);
    if (tau > 0.0) m["tau"] = num(tau);
  } else if (tag == "sigma") {
    m["kappa"] = std::to_string(kappa);
    m["Msub"] = std::to_string(Msub);
  } else if (tag == "aaa") {
    m["degree"] = std::to_string(k);
    m["tol"] = num(aaa.tol);
    m["samples"] = std::to_string(aaa.sampleCount);
    m["lawsonSteps"] = std::to_string(aaa.lawsonSteps);
  } else if (tag == "bura") {
    m["k"] = std::to_string(k);
    if (!table.empty()) m["table"] = table;
  } else if (tag == "extension") {
    m["M"] = std::to_string(extM);
    m["Y"] = num(extY);
    m["grading"] = num(extGrading);
  }
  return m;
}

MethodSpec accurate_method() {
  MethodSpec m;
  m.tag = "aaa";
  m.k = 20;
  m.aaa.tol = 1e-13;
  return m;
}

namespace {

// z^{-alpha} approximant in the variable z = A / lambdaMin, no scaling attached.
PartialFractionRational normalizedBase(const DiscreteOperator& op, double alpha,
                                       const MethodSpec& method) {
  if (method.tag == "aaa") {
    AaaOptions opt = method.aaa;
    opt.maxDegree = method.k;
    const double ratio = std::max(op.lambdaMax() / op.lambdaMin(), 2.0);
    return aaa_rational(alpha, ratio, opt);
  }
  if (method.tag == "bura") {
    const std::string path = method.table.empty() ? bura_table_path(alpha, method.k) : method.table;
    BuraTable t = bura_from_table(path);
    if (std::abs(t.rational.alpha - alpha) > 1e-12)
      throw DomainError("table alpha does not match the requested alpha");
    PartialFractionRational r = t.rational;
    r.prefactor = 1.0;
    r.matrixScale = 1.0;
    return r;
  }
  throw DomainError("base approximant must be aaa or bura, got '" + method.tag + "'");
}

}  // namespace

PartialFractionRational build_rational(const DiscreteOperator& op, double alpha,
                                       const MethodSpec& method) {
  require_alpha(alpha);
  const std::string& tag = method.tag;
  if (tag == "sinc") {
    SincSpec spec = SincSpec::automatic(alpha, method.kprime);
    if (method.sincM >= 0 && method.sincN >= 0) {
      spec.M = method.sincM;
      spec.N = method.sincN;
    }
    return sinc_quadrature(spec);
  }
  if (tag == "gauss-jacobi")
    return gauss_jacobi(alpha, method.k, op.lambdaMin(), op.lambdaMax(), method.tau);
  if (tag == "sigma") return sigma_quadrature(alpha, method.kappa, method.Msub, op.lambdaMin());
  if (tag == "extension") {
    ExtensionSpec spec;
    spec.alpha = alpha;
    spec.M = method.extM;
    spec.Y = method.extY;
    spec.gradingExponent = method.extGrading;
    return extension_eigen(spec);
  }
  if (tag == "aaa" || tag == "bura") {
    PartialFractionRational r = normalizedBase(op, alpha, method);
    const double delta = op.lambdaMin();
    r.prefactor = std::pow(delta, -alpha);
    r.matrixScale = 1.0 / delta;
    return r;
  }
  throw DomainError("unknown method '" + tag + "'");
}

std::pair<Vec, SolveReport> fractional_solve(const DiscreteOperator& op, double alpha,
                                             const MethodSpec& method, const Vec& f,
                                             const SolverConfig& cfg) {
  require_alpha(alpha);
  const auto t0 = std::chrono::steady_clock::now();
  PartialFractionRational r = build_rational(op, alpha, method);
  auto [u, rep] = apply_rational(op, r, f, cfg);
  rep.method = method.tag;
  rep.parameters = method.echo();
  rep.parameters["alpha"] = std::to_string(alpha);
  rep.wallSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(u), std::move(rep)};
}

namespace {

// Root of 1 + beta * sum c_j / (z - d_j) written as z = d[anchor] + dir * offset.
// The secular function is monotone on the bracket; bisection runs in log
// scale while the bracket spans more than a factor two.
double secularOffset(const std::vector<PoleTerm>& t, double beta, std::size_t anchor, int dir,
                     double hi) {
  auto g = [&](double off) {
    double s = 0.0;
    for (std::size_t j = 0; j < t.size(); ++j) {
      const double gap = (t[anchor].pole - t[j].pole) + dir * off;
      s += t[j].residue / gap;
    }
    return 1.0 + beta * s;
  };
  // sign of g right next to the anchor pole
  const double nearSign = dir < 0 ? -1.0 : 1.0;
  double lo = hi * 1e-290;
  if (g(lo) * nearSign < 0.0) return lo;  // root closer than lo
  for (int it = 0; it < 400; ++it) {
    const double mid = (hi > 2.0 * lo) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (g(mid) * nearSign > 0.0) lo = mid;
    else hi = mid;
    if (hi - lo <= 2e-16 * hi) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

PartialFractionRational ura_transform(const PartialFractionRational& r, double q2) {
  if (!(q2 >= 0.0)) throw DomainError("q2 must be nonnegative");
  validate(r);
  PartialFractionRational in = r;
  in.c0 *= r.prefactor;
  for (auto& t : in.terms) t.residue *= r.prefactor;
  in.prefactor = 1.0;
  if (q2 == 0.0) return in;

  const std::size_t k = in.terms.size();
  const double beta = q2 / (1.0 + q2 * in.c0);
  if (!(1.0 + q2 * in.c0 > 0.0)) throw PoleError("1 + q2 c0 must be positive");
  PartialFractionRational out;
  out.alpha = in.alpha;
  out.matrixScale = in.matrixScale;
  out.method = in.method.empty() ? std::string("ura") : in.method + "+ura";
  out.c0 = in.c0 / (1.0 + q2 * in.c0);

  bool positive = true;
  for (const auto& t : in.terms) positive = positive && t.residue > 0.0;
  if (!positive)
    throw PoleError("ura_transform: mixed residue signs give complex roots in general; rejected");

  double csum = 0.0;
  for (const auto& t : in.terms) csum += t.residue;
  // poles decrease: terms[0].pole > terms[1].pole > ...
  for (std::size_t i = 0; i < k; ++i) {
    double off;
    std::size_t anchor;
    int dir;
    if (i + 1 < k) {
      const double gap = in.terms[i].pole - in.terms[i + 1].pole;
      // which half of (d_{i+1}, d_i) holds the root
      const double mid = in.terms[i + 1].pole + 0.5 * gap;
      double s = 0.0;
      for (const auto& t : in.terms) s += t.residue / (mid - t.pole);
      if (1.0 + beta * s < 0.0) {
        anchor = i + 1;
        dir = +1;
      } else {
        anchor = i;
        dir = -1;
      }
      off = secularOffset(in.terms, beta, anchor, dir, 0.5 * gap);
    } else {
      anchor = i;
      dir = -1;
      off = secularOffset(in.terms, beta, anchor, dir, 2.0 * beta * csum + 1e-300);
    }
    const double pole = in.terms[anchor].pole + dir * off;
    double deriv = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double gap = (in.terms[anchor].pole - in.terms[j].pole) + dir * off;
      deriv += in.terms[j].residue / (gap * gap);
    }
    // residue of r/(1+q2 r) at a root of 1 + q2 r
    out.terms.push_back({1.0 / (q2 * q2 * deriv), pole});
  }
  bool signs = out.c0 > 0.0;
  for (const auto& t : out.terms) signs = signs && t.residue > 0.0;
  out.kind = (in.kind == RationalKind::BestUniform && signs) ? RationalKind::BestUniform
             : signs                                          ? RationalKind::Quadrature
                                                              : RationalKind::Generic;
  try {
    return make_rational(std::move(out));
  } catch (const PoleError& e) {
    throw PoleError(std::string("ura_transform rejected: ") + e.what());
  }
}

PartialFractionRational diffusion_reaction_rational(const DiscreteOperator& op, double alpha,
                                                    double q, const MethodSpec& base) {
  require_alpha(alpha);
  if (!(q >= 0.0)) throw DomainError("reaction coefficient q must be nonnegative");
  const double delta = op.lambdaMin();
  const double qScaled = q * std::pow(delta, -alpha);
  PartialFractionRational r = ura_transform(normalizedBase(op, alpha, base), qScaled);
  r.prefactor = std::pow(delta, -alpha);
  r.matrixScale = 1.0 / delta;
  return r;
}

std::pair<Vec, SolveReport> diffusion_reaction_solve(const DiscreteOperator& op, double alpha,
                                                     double q, const Vec& f,
                                                     const SolverConfig& cfg,
                                                     const MethodSpec& base) {
  const auto t0 = std::chrono::steady_clock::now();
  PartialFractionRational r = diffusion_reaction_rational(op, alpha, q, base);
  auto [u, rep] = apply_rational(op, r, f, cfg);
  rep.method = "diffusion-reaction/" + base.tag;
  rep.parameters = base.echo();
  rep.parameters["alpha"] = std::to_string(alpha);
  rep.parameters["q"] = std::to_string(q);
  rep.wallSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(u), std::move(rep)};
}

Vec apply_fractional_power(const DiscreteOperator& op, double alpha, const Vec& f,
                           const SolverConfig& cfg, const MethodSpec& method,
                           SolveReport* report) {
  require_alpha(alpha);
  auto [v, rep] = fractional_solve(op, 1.0 - alpha, method, f, cfg);
  if (report) *report = rep;
  return matvec(op, v);
}

}  // namespace fracpow
