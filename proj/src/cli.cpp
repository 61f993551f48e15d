#include "fracpow/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "fracpow/discretize.hpp"
#include "fracpow/io.hpp"
#include "fracpow/rational.hpp"
#include "fracpow/reference.hpp"
#include "fracpow/stepping.hpp"

namespace fracpow::cli {

using nlohmann::json;

namespace {

std::string num17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> splitList(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

double parseNumber(const std::string& s, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw DomainError("bad number '" + s + "' in " + what);
  return v;
}

std::vector<int> parseCounts(const std::string& s) {
  std::vector<int> out;
  for (const auto& part : splitList(s)) {
    const auto colon = part.find(':');
    if (colon == std::string::npos) {
      out.push_back(static_cast<int>(parseNumber(part, "--counts")));
    } else {
      const int a = static_cast<int>(parseNumber(part.substr(0, colon), "--counts"));
      const int b = static_cast<int>(parseNumber(part.substr(colon + 1), "--counts"));
      for (int c = a; c <= b; ++c) out.push_back(c);
    }
  }
  for (int c : out)
    if (c < 1) throw DomainError("solve counts must be >= 1");
  return out;
}

}  // namespace

Problem build_problem(const ProblemSpec& spec) {
  if (spec.assemble.empty() == spec.matrix.empty())
    throw DomainError("give exactly one problem source: --assemble or --matrix");
  if (!spec.matrix.empty()) {
    DiscreteOperator op = read_matrix_market(spec.matrix);
    return {op, 0, 0, "matrix:" + spec.matrix};
  }
  const int n = spec.n;
  if (n < 1) throw DomainError("--n must be >= 1");
  if (spec.assemble == "laplace1d") {
    DiscreteOperator op = assemble_1d_variable(Vec(n + 1, 1.0));
    auto [lo, hi] = extreme_eigs_uniform(n, 1);
    return {op.withBounds(lo, hi, BoundsSource::Analytic), n, 1, "laplace1d"};
  }
  if (spec.assemble == "laplace2d") return {assemble_2d_laplacian(n), n, 2, "laplace2d"};
  if (spec.assemble == "variable1d") {
    const std::string& c = spec.coefficient;
    if (c.rfind("const:", 0) == 0) {
      const double v = parseNumber(c.substr(6), "--coef");
      return {assemble_1d_variable([v](double) { return v; }, n), 0, 0, "variable1d " + c};
    }
    if (c.rfind("linear:", 0) == 0) {
      auto parts = splitList(c.substr(7));
      if (parts.size() != 2) throw DomainError("--coef linear:a,b expects two numbers");
      const double a = parseNumber(parts[0], "--coef"), b = parseNumber(parts[1], "--coef");
      return {assemble_1d_variable([a, b](double x) { return a + b * x; }, n), 0, 0,
              "variable1d " + c};
    }
    if (c.rfind("file:", 0) == 0) {
      Vec faces = read_vector(c.substr(5));
      return {assemble_1d_variable(faces), 0, 0, "variable1d " + c};
    }
    throw DomainError("unknown coefficient spec '" + c + "'");
  }
  if (spec.assemble == "nonuniform1d") {
    Vec x;
    if (!spec.meshFile.empty()) {
      x = read_vector(spec.meshFile);
    } else {
      if (!(spec.grading > 0.0)) throw DomainError("--grading must be positive");
      for (int i = 0; i <= n + 1; ++i) x.push_back(std::pow(static_cast<double>(i) / (n + 1), spec.grading));
      x.back() = 1.0;
    }
    return {assemble_1d_nonuniform(Mesh1D(x)), 0, 0, "nonuniform1d"};
  }
  throw DomainError("unknown assembler '" + spec.assemble + "'");
}

Vec build_rhs(const std::string& rhs, const Problem& p) {
  const int N = p.op.dimension();
  if (rhs == "ones") return Vec(N, 1.0);
  if (rhs == "checkerboard" || rhs == "checkerboard-positive") {
    Vec f;
    if (p.uniformD == 2) f = checkerboard_rhs(p.uniformN, 2);
    else f = checkerboard_rhs(N, 1);
    return rhs == "checkerboard" ? f : positive_part(f);
  }
  if (rhs.rfind("random:", 0) == 0) {
    std::mt19937_64 gen(static_cast<unsigned long long>(parseNumber(rhs.substr(7), "--rhs")));
    std::normal_distribution<double> dist;
    Vec f(N);
    for (double& v : f) v = dist(gen);
    return f;
  }
  if (rhs.rfind("eigen:", 0) == 0) {
    if (p.uniformD != 1) throw DomainError("eigen:<j> right-hand sides need laplace1d");
    return uniform_eigenvector(p.uniformN, static_cast<int>(parseNumber(rhs.substr(6), "--rhs")));
  }
  if (rhs.rfind("file:", 0) == 0) {
    Vec f = read_vector(rhs.substr(5));
    if (f.size() != static_cast<std::size_t>(N)) throw DimensionError("rhs file length mismatch");
    return f;
  }
  throw DomainError("unknown rhs '" + rhs + "'");
}

MethodSpec matched_method(const std::string& tag, double alpha, int count) {
  MethodSpec m;
  m.tag = tag;
  if (tag == "sinc") {
    const int nodes = count - 1;
    const int M = static_cast<int>(std::lround(nodes * alpha));
    m.sincM = M;
    m.sincN = nodes - M;
    m.kprime = nodes > 0 ? 0.5 * M_PI * std::sqrt((1.0 / alpha + 1.0 / (1.0 - alpha)) / nodes) : 1.0;
  } else if (tag == "gauss-jacobi" || tag == "bura") {
    m.k = count;
  } else if (tag == "aaa") {
    m.k = count;
  } else if (tag == "sigma") {
    m.kappa = 2;
    m.Msub = count + 1;
  } else if (tag == "extension") {
    m.extM = count;
  } else if (tag != "pseudo-parabolic") {
    throw DomainError("unknown method '" + tag + "'");
  }
  return m;
}

MarchSpec matched_march(int count) {
  MarchSpec s;
  s.m = 1;
  s.n = 1;
  s.L = count - 1;
  return s;
}

namespace {

std::pair<Vec, SolveReport> runMethod(const Problem& p, double alpha, const MethodSpec& m,
                                      const MarchSpec& march, const Vec& f,
                                      const SolverConfig& cfg) {
  if (m.tag == "pseudo-parabolic") {
    const double delta = march.delta > 0.0 ? march.delta : p.op.lambdaMin();
    const int L = march.L >= 0 ? march.L : default_levels(p.op.lambdaMax(), delta);
    return pseudo_parabolic_march(p.op, alpha, delta, march.m, graded_time_mesh(L, march.n), f,
                                  cfg);
  }
  return fractional_solve(p.op, alpha, m, f, cfg);
}

std::string describe(const MethodSpec& m, const MarchSpec& march) {
  std::ostringstream os;
  if (m.tag == "pseudo-parabolic") {
    os << "m=" << march.m << ";n=" << march.n << ";L=" << march.L;
    return os.str();
  }
  bool first = true;
  for (const auto& [k, v] : m.echo()) {
    if (k == "method") continue;
    os << (first ? "" : ";") << k << '=' << v;
    first = false;
  }
  return os.str();
}

}  // namespace

std::vector<CompareRow> run_comparison(const Problem& p, double alpha, const Vec& f,
                                       const Vec& uref, const std::vector<std::string>& methods,
                                       const std::vector<int>& counts, const SolverConfig& cfg,
                                       const MethodSpec& base, const MarchSpec& march) {
  if (methods.empty()) throw DomainError("compare needs a non-empty method list");
  double f2 = 0.0, finf = 0.0;
  for (double v : f) {
    f2 += v * v;
    finf = std::max(finf, std::abs(v));
  }
  f2 = std::sqrt(f2);
  std::vector<CompareRow> rows;
  auto one = [&](const std::string& tag, const MethodSpec& m, const MarchSpec& ms) {
    CompareRow row;
    row.method = tag;
    row.parameter = describe(m, ms);
    try {
      auto [u, rep] = runMethod(p, alpha, m, ms, f, cfg);
      double e2 = 0.0, einf = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) {
        const double d = u[i] - uref[i];
        e2 += d * d;
        einf = std::max(einf, std::abs(d));
      }
      row.solves = rep.shiftedSolves;
      row.l2 = std::sqrt(e2) / f2;
      row.linf = einf / finf;
      row.wall = rep.wallSeconds;
      row.ok = !rep.failed;
      row.note = rep.failure;
    } catch (const Error& e) {
      row.ok = false;
      row.note = e.what();
    }
    rows.push_back(row);
  };
  for (const auto& tag : methods) {
    if (counts.empty()) {
      MethodSpec m = base;
      m.tag = tag;
      one(tag, m, march);
      continue;
    }
    for (int c : counts) {
      if (tag == "bura" && c > 8) continue;
      MarchSpec ms = tag == "pseudo-parabolic" ? matched_march(c) : march;
      MethodSpec m = matched_method(tag, alpha, c);
      m.aaa = base.aaa;
      one(tag, m, ms);
    }
  }
  return rows;
}

std::string comparison_csv(const std::vector<CompareRow>& rows) {
  std::ostringstream os;
  os << "method,parameter,solves,l2_rel,linf_rel,wall_s,status\n";
  for (const auto& r : rows) {
    os << r.method << ',' << '"' << r.parameter << '"' << ',' << r.solves << ',' << num17(r.l2)
       << ',' << num17(r.linf) << ',' << num17(r.wall) << ',';
    if (r.ok) {
      os << "ok";
    } else {
      std::string note = r.note;
      for (char& ch : note)
        if (ch == ',' || ch == '"' || ch == '\n') ch = ' ';
      os << "failed: " << note;
    }
    os << '\n';
  }
  return os.str();
}

std::string comparison_long_csv(const std::vector<CompareRow>& rows) {
  std::ostringstream os;
  os << "method,solves,error\n";
  for (const auto& r : rows)
    if (r.ok) os << r.method << ',' << r.solves << ',' << num17(r.l2) << '\n';
  return os.str();
}

namespace {

struct Options {
  ProblemSpec problem;
  double alpha = 0.5;
  double q = 0.0;
  MethodSpec method;
  MarchSpec march;
  std::string methods;
  std::string counts;
  std::string rhs = "ones";
  bool oracle = false;
  std::string out;
  std::string report;
  std::string csv;
  std::string longCsv;
  std::string base = "aaa";
  double lambdaMin = 1.0;
  double lambdaMax = 1e6;
  bool allEigs = false;
  SolverConfig solver;
  std::string preconditioner = "diagonal";
};

void addProblem(CLI::App* sub, Options& o) {
  sub->add_option("--assemble", o.problem.assemble,
                  "built-in operator: laplace1d | laplace2d | variable1d | nonuniform1d");
  sub->add_option("--matrix", o.problem.matrix, "Matrix Market file (sidecar <file>.meta optional)");
  sub->add_option("--n", o.problem.n, "interior points per direction");
  sub->add_option("--coef", o.problem.coefficient, "variable1d coefficient: const:c | linear:a,b | file:path");
  sub->add_option("--grading", o.problem.grading, "nonuniform1d grading exponent");
  sub->add_option("--mesh-file", o.problem.meshFile, "nonuniform1d node file");
}

void addMethod(CLI::App* sub, Options& o) {
  sub->add_option("--method", o.method.tag,
                  "sinc | gauss-jacobi | sigma | aaa | bura | extension | pseudo-parabolic");
  sub->add_option("--kprime", o.method.kprime, "sinc step k'");
  sub->add_option("--sinc-M", o.method.sincM, "sinc nodes on the negative side");
  sub->add_option("--sinc-N", o.method.sincN, "sinc nodes on the positive side");
  sub->add_option("--k", o.method.k, "degree / node count");
  sub->add_option("--tau", o.method.tau, "Gauss-Jacobi tau override");
  sub->add_option("--kappa", o.method.kappa, "sigma quadrature order (2 or 4)");
  sub->add_option("--msub", o.method.Msub, "sigma quadrature subintervals");
  sub->add_option("--table", o.method.table, "BURA coefficient table");
  sub->add_option("--ext-M", o.method.extM, "extension eigenpairs");
  sub->add_option("--ext-Y", o.method.extY, "extension truncation length");
  sub->add_option("--ext-grading", o.method.extGrading, "extension mesh grading");
  sub->add_option("--aaa-samples", o.method.aaa.sampleCount, "AAA sample count");
  sub->add_option("--aaa-tol", o.method.aaa.tol, "AAA tolerance");
  sub->add_option("--lawson", o.method.aaa.lawsonSteps, "Lawson refinement steps");
  sub->add_option("--pp-m", o.march.m, "pseudo-parabolic Pade degree");
  sub->add_option("--pp-n", o.march.n, "pseudo-parabolic steps per level");
  sub->add_option("--pp-L", o.march.L, "pseudo-parabolic levels");
  sub->add_option("--delta", o.march.delta, "pseudo-parabolic delta");
}

void addSolver(CLI::App* sub, Options& o) {
  sub->add_option("--rel-tol", o.solver.relTol, "CG relative residual tolerance");
  sub->add_option("--max-iter", o.solver.maxIter, "CG iteration cap");
  sub->add_option("--workers", o.solver.workerCount, "concurrent shifted solves (default FRACPOW_WORKERS)");
  sub->add_option("--preconditioner", o.preconditioner, "none | diagonal");
}

SolverConfig solverConfig(const Options& o) {
  SolverConfig cfg = o.solver;
  if (o.preconditioner == "none") cfg.preconditioner = Preconditioner::None;
  else if (o.preconditioner == "diagonal") cfg.preconditioner = Preconditioner::Diagonal;
  else throw DomainError("unknown preconditioner '" + o.preconditioner + "'");
  cfg.check();
  return cfg;
}

json solverJson(const SolverConfig& cfg) {
  return {{"relTol", cfg.relTol},
          {"maxIter", cfg.maxIter},
          {"workers", cfg.workerCount},
          {"preconditioner", cfg.preconditioner == Preconditioner::None ? "none" : "diagonal"}};
}

json problemJson(const Options& o, const Problem& p) {
  json j = {{"description", p.description},
            {"dimension", p.op.dimension()},
            {"lambdaMin", p.op.lambdaMin()},
            {"lambdaMax", p.op.lambdaMax()},
            {"boundsSource", toString(p.op.boundsSource())}};
  if (!o.problem.assemble.empty()) {
    j["assemble"] = o.problem.assemble;
    j["n"] = o.problem.n;
    if (o.problem.assemble == "variable1d") j["coef"] = o.problem.coefficient;
    if (o.problem.assemble == "nonuniform1d") j["grading"] = o.problem.grading;
  } else {
    j["matrix"] = o.problem.matrix;
  }
  if (p.op.formulaBoundViolated()) {
    j["formulaLambdaMin"] = p.op.formulaLambdaMin();
    j["formulaBoundViolated"] = true;
  }
  return j;
}

json reportJson(const SolveReport& r) {
  json j = {{"method", r.method},
            {"parameters", r.parameters},
            {"shiftedSolves", r.shiftedSolves},
            {"iterations", r.iterations},
            {"residuals", r.residuals},
            {"wallSeconds", r.wallSeconds},
            {"failed", r.failed}};
  if (!r.failure.empty()) j["failure"] = r.failure;
  if (!r.errors.empty()) j["errors"] = r.errors;
  return j;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  f << text;
}

Vec oracleSolution(const Problem& p, double alpha, double q, const Vec& f, std::string& tag) {
  if (p.uniformD > 0) {
    tag = "uniform-spectral";
    return uniform_spectral_solve(p.uniformN, p.uniformD, alpha, f, q);
  }
  tag = "dense-spectral";
  return dense_spectral_solve(p.op, alpha, f, q);
}

// JSON config keys become leading "--key value" arguments so later flags win.
std::vector<std::string> expandConfig(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  std::string configPath;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      configPath = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      configPath = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (configPath.empty()) return rest;
  std::ifstream f(configPath);
  if (!f) throw DomainError("cannot open config file " + configPath);
  json cfg = json::parse(f);
  if (!cfg.is_object()) throw DomainError("config file must hold a JSON object");
  if (rest.empty()) throw DomainError("missing subcommand");
  out.push_back(rest.front());
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    const std::string key = "--" + it.key();
    if (it->is_boolean()) {
      if (it->get<bool>()) out.push_back(key);
    } else if (it->is_string()) {
      out.push_back(key);
      out.push_back(it->get<std::string>());
    } else if (it->is_number()) {
      out.push_back(key);
      out.push_back(num17(it->get<double>()));
    } else {
      throw DomainError("unsupported config value for " + it.key());
    }
  }
  out.insert(out.end(), rest.begin() + 1, rest.end());
  return out;
}

int cmdSolve(Options& o, std::ostream& out) {
  require_alpha(o.alpha);
  const SolverConfig cfg = solverConfig(o);
  Problem p = build_problem(o.problem);
  const Vec f = build_rhs(o.rhs, p);
  Vec u;
  SolveReport rep;
  if (o.q > 0.0) {
    MethodSpec base = o.method;
    if (base.tag != "aaa" && base.tag != "bura") base = accurate_method();
    std::tie(u, rep) = diffusion_reaction_solve(p.op, o.alpha, o.q, f, cfg, base);
  } else if (o.method.tag == "pseudo-parabolic") {
    const double delta = o.march.delta > 0.0 ? o.march.delta : p.op.lambdaMin();
    const int L = o.march.L >= 0 ? o.march.L : default_levels(p.op.lambdaMax(), delta);
    std::tie(u, rep) = pseudo_parabolic_march(p.op, o.alpha, delta, o.march.m,
                                              graded_time_mesh(L, o.march.n), f, cfg);
  } else {
    std::tie(u, rep) = fractional_solve(p.op, o.alpha, o.method, f, cfg);
  }
  json j = {{"command", "solve"},
            {"problem", problemJson(o, p)},
            {"alpha", o.alpha},
            {"q", o.q},
            {"rhs", o.rhs},
            {"solver", solverJson(cfg)}};
  if (o.oracle) {
    std::string tag;
    const Vec uref = oracleSolution(p, o.alpha, o.q, f, tag);
    ErrorReport er = error_report(u, uref, p.op, &f, tag);
    rep.errors["l2_rel_f"] = er.l2RelF;
    rep.errors["linf_rel_f"] = er.linfRelF;
    rep.errors["l2_rel_uref"] = er.l2RelRef;
    rep.errors["linf_rel_uref"] = er.linfRelRef;
    rep.errors["dnorm_rel_uref"] = er.dNormRelRef;
    j["oracle"] = tag;
    if (er.absoluteFallback) j["oracleAbsoluteFallback"] = true;
  }
  j["report"] = reportJson(rep);
  if (!o.out.empty()) write_vector(o.out, u);
  emit(o.report, j.dump(2) + "\n", out);
  return rep.failed ? kSolverFailure : kOk;
}

int cmdCompare(Options& o, std::ostream& out) {
  require_alpha(o.alpha);
  const auto methods = splitList(o.methods);
  if (methods.empty()) throw CLI::ValidationError("--methods", "empty method list");
  const SolverConfig cfg = solverConfig(o);
  Problem p = build_problem(o.problem);
  const Vec f = build_rhs(o.rhs, p);
  std::string tag;
  const Vec uref = oracleSolution(p, o.alpha, 0.0, f, tag);
  const std::vector<int> counts = o.counts.empty() ? std::vector<int>{} : parseCounts(o.counts);
  auto rows = run_comparison(p, o.alpha, f, uref, methods, counts, cfg, o.method, o.march);
  emit(o.csv, comparison_csv(rows), out);
  if (!o.longCsv.empty()) emit(o.longCsv, comparison_long_csv(rows), out);
  return kOk;
}

int cmdApprox(Options& o, std::ostream& out) {
  require_alpha(o.alpha);
  if (!(o.lambdaMin > 0.0 && o.lambdaMax >= o.lambdaMin))
    throw DomainError("need 0 < --lambda-min <= --lambda-max");
  // a stand-in operator carrying only the interval
  DiscreteOperator carrier(CsrMatrix::fromTriplets(1, {{0, 0, o.lambdaMin}}), Vec{1.0},
                           o.lambdaMin, o.lambdaMax);
  PartialFractionRational r;
  if (o.method.tag == "pseudo-parabolic") throw DomainError("pseudo-parabolic has no single rational");
  if (o.method.tag == "pade") r = pade_table(o.alpha, o.march.m).fractions;
  else r = build_rational(carrier, o.alpha, o.method);
  emit(o.out, format_rational(r), out);
  return kOk;
}

int cmdAssemble(Options& o, std::ostream& out) {
  Problem p = build_problem(o.problem);
  if (o.out.empty()) throw DomainError("assemble needs --out <file.mtx>");
  write_matrix_market(o.out, p.op);
  json j = {{"command", "assemble"}, {"problem", problemJson(o, p)}, {"matrix", o.out},
            {"sidecar", o.out + ".meta"}};
  out << j.dump(2) << "\n";
  return kOk;
}

int cmdSpectrum(Options& o, std::ostream& out) {
  Problem p = build_problem(o.problem);
  json j = {{"command", "spectrum"}, {"problem", problemJson(o, p)}};
  if (p.op.dimension() <= kDenseOracleLimit) {
    Vec ev = dense_spectrum(p.op, false).eigenvalues;
    j["denseMin"] = ev.front();
    j["denseMax"] = ev.back();
    j["boundsHold"] = ev.front() >= p.op.lambdaMin() * (1 - 1e-10) &&
                      ev.back() <= p.op.lambdaMax() * (1 + 1e-10);
    if (o.allEigs && !o.out.empty()) write_vector(o.out, ev);
  }
  if (p.uniformD > 0) {
    auto [lo, hi] = extreme_eigs_uniform(p.uniformN, p.uniformD);
    j["analyticMin"] = lo;
    j["analyticMax"] = hi;
  }
  out << j.dump(2) << "\n";
  return kOk;
}

void writeError(std::ostream& err, int code, const std::string& kind, const std::string& msg) {
  json j = {{"error", msg}, {"kind", kind}, {"exitCode", code}};
  err << j.dump() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& rawArgs, std::ostream& out, std::ostream& err) {
  Options o;
  o.solver.workerCount = default_worker_count();
  CLI::App app{"Fractional-power solvers for sparse SPD operators", "fracpow"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  auto* solve = app.add_subcommand("solve", "solve A^alpha u = f (or (A^alpha + q) u = f)");
  addProblem(solve, o);
  addMethod(solve, o);
  addSolver(solve, o);
  solve->add_option("--alpha", o.alpha, "fractional exponent in (0,1)");
  solve->add_option("--q", o.q, "reaction coefficient q >= 0");
  solve->add_option("--rhs", o.rhs, "ones | checkerboard | checkerboard-positive | random:<seed> | eigen:<j> | file:<path>");
  solve->add_flag("--oracle", o.oracle, "compare against the spectral oracle");
  solve->add_option("--out", o.out, "solution vector file");
  solve->add_option("--report", o.report, "JSON report file (default stdout)");

  auto* compare = app.add_subcommand("compare", "comparison table over methods and solve counts");
  addProblem(compare, o);
  addMethod(compare, o);
  addSolver(compare, o);
  compare->add_option("--alpha", o.alpha, "fractional exponent in (0,1)");
  compare->add_option("--rhs", o.rhs, "right-hand side");
  compare->add_option("--methods", o.methods, "comma-separated method list")->required();
  compare->add_option("--counts", o.counts, "matched solve counts, e.g. 4:30 or 5,9");
  compare->add_option("--csv", o.csv, "table CSV (default stdout)");
  compare->add_option("--long", o.longCsv, "long-form (solves, error) CSV");

  auto* approx = app.add_subcommand("approx", "export a rational approximation");
  addMethod(approx, o);
  approx->add_option("--alpha", o.alpha, "fractional exponent in (0,1)");
  approx->add_option("--lambda-min", o.lambdaMin, "lower end of the spectral interval");
  approx->add_option("--lambda-max", o.lambdaMax, "upper end of the spectral interval");
  approx->add_option("--out", o.out, "coefficient file (default stdout)");

  auto* assemble = app.add_subcommand("assemble", "write an operator as Matrix Market + sidecar");
  addProblem(assemble, o);
  assemble->add_option("--out", o.out, "Matrix Market output path");

  auto* spectrum = app.add_subcommand("spectrum", "spectral bounds and dense extremes");
  addProblem(spectrum, o);
  spectrum->add_flag("--all", o.allEigs, "write all eigenvalues to --out");
  spectrum->add_option("--out", o.out, "eigenvalue file");

  try {
    std::vector<std::string> args = expandConfig(rawArgs);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (solve->parsed()) return cmdSolve(o, out);
    if (compare->parsed()) return cmdCompare(o, out);
    if (approx->parsed()) return cmdApprox(o, out);
    if (assemble->parsed()) return cmdAssemble(o, out);
    if (spectrum->parsed()) return cmdSpectrum(o, out);
    return kUsage;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    writeError(err, kUsage, "usage", e.what());
    return kUsage;
  } catch (const TableRejected& e) {
    writeError(err, kTableRejected, "table-rejected", e.what());
    return kTableRejected;
  } catch (const DomainError& e) {
    writeError(err, kUsage, "domain", e.what());
    return kUsage;
  } catch (const SolverError& e) {
    writeError(err, kSolverFailure, "solver", e.what());
    return kSolverFailure;
  } catch (const std::exception& e) {
    writeError(err, kFailure, "error", e.what());
    return kFailure;
  }
}

}  // namespace fracpow::cli
