#pragma once

#include <optional>
#include <string>

#include "fracpow/core.hpp"

namespace fracpow {

inline constexpr int kDenseOracleLimit = 4096;

// Generalized eigenpairs of (S, D); vectors are D-orthonormal.
Spectrum dense_spectrum(const DiscreteOperator& op, bool vectors = true);

// sum_j (lambda_j^alpha + q)^{-1} (f, psi_j)_D psi_j; alpha = 1 is allowed.
Vec dense_spectral_solve(const DiscreteOperator& op, double alpha, const Vec& f, double q = 0.0);
Vec dense_spectral_solve(const Spectrum& spec, const DiscreteOperator& op, double alpha,
                         const Vec& f, double q = 0.0);
// Generic spectral function g(lambda) applied through the eigen-expansion.
template <class G>
Vec dense_spectral_apply(const Spectrum& spec, const DiscreteOperator& op, const Vec& f, G&& g);

// Closed-form sine eigenpairs of the uniform Laplacian, n points per direction.
Vec uniform_spectral_solve(int n, int d, double alpha, const Vec& f, double q = 0.0);
// Sine coefficients (f, psi_j) in the l2 orthonormal basis; 1D and 2D.
Vec uniform_sine_transform(int n, int d, const Vec& f);
// l2-normalized analytic eigenvector and eigenvalue, modes are 1-based.
Vec uniform_eigenvector(int n, int mode);
double uniform_eigenvalue(int n, int mode);

Vec checkerboard_rhs(int n, int d = 2);
Vec positive_part(const Vec& f);

struct ErrorReport {
  double l2RelRef = 0.0;
  double linfRelRef = 0.0;
  double dNormRelRef = 0.0;
  double l2RelF = 0.0;
  double linfRelF = 0.0;
  bool hasF = false;
  bool absoluteFallback = false;  // some denominator was zero
  std::string oracle;
};

ErrorReport error_report(const Vec& u, const Vec& uref, const DiscreteOperator& op,
                         const Vec* f = nullptr, const std::string& oracle = "");

struct SeriesResult {
  Vec values;
  long terms = 0;
  double tailBound = 0.0;
};

// f given by sine coefficients f_j (j = 1..size), or f = 1 when coefficients
// is empty and unitSource is set.
SeriesResult continuum_series_oracle(double alpha, const Vec& coefficients, bool unitSource,
                                     const Vec& grid, double tailTol = 1e-12,
                                     long maxTerms = 400000000L);

// ---- template body ----

template <class G>
Vec dense_spectral_apply(const Spectrum& spec, const DiscreteOperator& op, const Vec& f, G&& g) {
  const int n = spec.dimension;
  if (!spec.hasVectors()) throw Error("spectrum has no eigenvectors");
  if (f.size() != static_cast<std::size_t>(n)) throw DimensionError("length mismatch");
  const Vec& D = op.massDiag();
  Vec u(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double c = 0.0;
    for (int i = 0; i < n; ++i) c += D[i] * f[i] * spec.vec(i, j);
    c *= g(spec.eigenvalues[j]);
    for (int i = 0; i < n; ++i) u[i] += c * spec.vec(i, j);
  }
  return u;
}

}  // namespace fracpow
