#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fracpow/core.hpp"
#include "fracpow/solve.hpp"

namespace fracpow::cli {

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2, kTableRejected = 3, kSolverFailure = 4 };

// Problem source for solve/compare/assemble/spectrum.
struct ProblemSpec {
  std::string assemble;  // laplace1d | laplace2d | variable1d | nonuniform1d
  std::string matrix;    // Matrix Market path (exclusive with assemble)
  int n = 63;
  std::string coefficient = "const:1";  // variable1d: const:c | linear:a,b | file:path
  double grading = 1.0;                 // nonuniform1d: x_i = (i/(n+1))^grading
  std::string meshFile;                 // nonuniform1d: explicit nodes
};

struct Problem {
  DiscreteOperator op;
  // set for the uniform Laplacians, enabling the closed-form oracle
  int uniformN = 0;
  int uniformD = 0;
  std::string description;
};

Problem build_problem(const ProblemSpec& spec);
Vec build_rhs(const std::string& rhs, const Problem& p);

// Pseudo-parabolic parameters used when the method tag is "pseudo-parabolic".
struct MarchSpec {
  int m = 2;
  int n = 8;
  int L = -1;          // default: ceil(log2(lambdaMax / delta))
  double delta = -1.0; // default: lambdaMin
};

struct CompareRow {
  std::string method;
  std::string parameter;
  std::size_t solves = 0;
  double l2 = 0.0;
  double linf = 0.0;
  double wall = 0.0;
  bool ok = true;
  std::string note;
};

// One method configured to use (about) `count` shifted solves.
MethodSpec matched_method(const std::string& tag, double alpha, int count);
MarchSpec matched_march(int count);

// Errors are relative to |f| (l2 and l-infinity).
std::vector<CompareRow> run_comparison(const Problem& p, double alpha, const Vec& f,
                                       const Vec& uref, const std::vector<std::string>& methods,
                                       const std::vector<int>& counts, const SolverConfig& cfg,
                                       const MethodSpec& base, const MarchSpec& march);

std::string comparison_csv(const std::vector<CompareRow>& rows);
std::string comparison_long_csv(const std::vector<CompareRow>& rows);

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fracpow::cli
