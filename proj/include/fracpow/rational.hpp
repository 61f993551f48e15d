#pragma once

#include <string>

#include "fracpow/core.hpp"

namespace fracpow {

void require_alpha(double alpha);

// ---- sinc quadrature of the Balakrishnan integral ----

struct SincSpec {
  double alpha = 0.5;
  double kprime = 0.5;
  int M = 0;  // nodes on the negative semi-axis, y_l = l k' for l = -M..-1
  int N = 0;  // nodes on the positive semi-axis

  // Counts balanced against the integrand's decay: e^{-(1-alpha)|y|} as
  // y -> -inf and e^{-alpha y} as y -> +inf.
  static SincSpec automatic(double alpha, double kprime);
  int termCount() const { return M + N + 1; }
};

PartialFractionRational sinc_quadrature(const SincSpec& spec);

// ---- Gauss-Jacobi ----

struct GaussRule {
  Vec nodes;    // ascending
  Vec weights;
};

// k-point Gauss rule for (1-x)^a (1+x)^b on (-1,1) via Golub-Welsch.
GaussRule gauss_jacobi_rule(double a, double b, int k);

// tau <= 0 selects sqrt(lambdaMin * lambdaMax).
PartialFractionRational gauss_jacobi(double alpha, int k, double lambdaMin, double lambdaMax,
                                     double tau = 0.0);

// ---- sigma-substituted quadrature ----

// kappa * max(1/alpha, 1/(1-alpha))
double sigma_exponent(double alpha, int kappa);
PartialFractionRational sigma_quadrature(double alpha, int kappa, int Msub, double lambdaRef);

// ---- AAA ----

struct AaaOptions {
  int sampleCount = 4000;
  double tol = 1e-13;
  int maxDegree = 16;   // support points = degree + 1
  int lawsonSteps = 20;
};

// Samples z^{-alpha} on a log-spaced grid of [lambdaMin, lambdaMax].
BarycentricRational aaa_build(double alpha, double lambdaMin, double lambdaMax,
                              const AaaOptions& opt);
// General data version used by the tests.
BarycentricRational aaa_fit(const Vec& z, const Vec& f, const AaaOptions& opt);

PartialFractionRational barycentric_to_partial_fractions(const BarycentricRational& b,
                                                         double alpha = 0.5);

// AAA approximant of z^{-alpha} on [1, ratio] in partial fractions.
PartialFractionRational aaa_rational(double alpha, double ratio, const AaaOptions& opt);

// ---- BURA coefficient tables ----

enum class TableForm { BestPower, Reciprocal };

struct BuraTable {
  PartialFractionRational rational;  // z^{-alpha} form on [1, inf)
  TableForm sourceForm = TableForm::BestPower;
  double declaredError = -1.0;       // value from a "max error E" comment, if any
};

BuraTable bura_from_text(const std::string& text);
BuraTable bura_from_table(const std::string& path);
// Built-in tables: alpha in {0.25, 0.5, 0.75}, k in 1..8.
std::string bura_table_path(double alpha, int k);
std::string data_directory();

// c~0 = c0 - sum c_i/d_i, c~_i = -c_i/d_i^2, d~_i = 1/d_i
PartialFractionRational bura_convert(double alpha, double c0, const std::vector<PoleTerm>& trg);

// ---- extension eigenproblem ----

struct ExtensionSpec {
  double alpha = 0.5;
  int M = 40;
  double Y = 7.0;
  double gradingExponent = 3.0;

  double normalization() const;  // d_alpha
};

struct ExtensionDiagnostics {
  double massCondition = 0.0;
  double minEigenvalue = 0.0;
  double maxEigenvalue = 0.0;
};

PartialFractionRational extension_eigen(const ExtensionSpec& spec,
                                        ExtensionDiagnostics* diag = nullptr);

// ---- diagonal Pade of (1+z)^{-alpha} ----

struct PadeApproximant {
  Vec numerator;    // ascending coefficients, constant term 1
  Vec denominator;  // ascending coefficients, constant term 1
  PartialFractionRational fractions;
};

PadeApproximant pade_table(double alpha, int m);
double eval_poly(const Vec& ascending, double z);

// ---- diagnostics ----

// max |r(z) - z^{-alpha}| over a log grid of [lo, hi]; relative to z^{-alpha}
// when relative is set.
double uniform_error(const PartialFractionRational& r, double alpha, double lo, double hi,
                     int points = 20000, bool relative = false);
double uniform_error(const BarycentricRational& b, double alpha, double lo, double hi,
                     int points = 20000, bool relative = false);

}  // namespace fracpow
