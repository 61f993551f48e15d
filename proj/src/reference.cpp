#include "fracpow/reference.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace fracpow {

using std::numbers::pi;

Spectrum dense_spectrum(const DiscreteOperator& op, bool vectors) {
  const int n = op.dimension();
  if (n > kDenseOracleLimit) throw DomainError("operator too large for a dense eigensolve");
  const auto& S = op.stiffness();
  const Vec& D = op.massDiag();
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int p = S.rowPtr()[i]; p < S.rowPtr()[i + 1]; ++p) {
      const int j = S.colIdx()[p];
      B(i, j) = S.values()[p] / std::sqrt(D[i] * D[j]);
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      B, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error("dense eigensolve failed");
  Spectrum spec;
  spec.dimension = n;
  spec.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
  if (vectors) {
    spec.eigenvectors.resize(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        spec.eigenvectors[static_cast<std::size_t>(j) * n + i] =
            es.eigenvectors()(i, j) / std::sqrt(D[i]);
  }
  return spec;
}

Vec dense_spectral_solve(const Spectrum& spec, const DiscreteOperator& op, double alpha,
                         const Vec& f, double q) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha out of (0,1]");
  return dense_spectral_apply(spec, op, f,
                              [&](double lam) { return 1.0 / (std::pow(lam, alpha) + q); });
}

Vec dense_spectral_solve(const DiscreteOperator& op, double alpha, const Vec& f, double q) {
  return dense_spectral_solve(dense_spectrum(op, true), op, alpha, f, q);
}

double uniform_eigenvalue(int n, int mode) {
  const double s = std::sin(mode * pi / (2.0 * (n + 1)));
  return 4.0 * (n + 1.0) * (n + 1.0) * s * s;
}

Vec uniform_eigenvector(int n, int mode) {
  Vec v(n);
  const double c = std::sqrt(2.0 / (n + 1));
  for (int i = 0; i < n; ++i) v[i] = c * std::sin(static_cast<double>(i + 1) * mode * pi / (n + 1));
  return v;
}

namespace {

Eigen::MatrixXd sineMatrix(int n) {
  Eigen::MatrixXd P(n, n);
  const double c = std::sqrt(2.0 / (n + 1));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      P(i, j) = c * std::sin(static_cast<double>(i + 1) * (j + 1) * pi / (n + 1));
  return P;
}

}  // namespace

Vec uniform_sine_transform(int n, int d, const Vec& f) {
  if (n < 1 || (d != 1 && d != 2)) throw DomainError("need n >= 1 and d in {1,2}");
  const std::size_t N = d == 1 ? n : static_cast<std::size_t>(n) * n;
  if (f.size() != N) throw DimensionError("mismatched operator type: vector length");
  const Eigen::MatrixXd P = sineMatrix(n);
  if (d == 1) {
    Eigen::VectorXd c = P * Eigen::Map<const Eigen::VectorXd>(f.data(), n);
    return Vec(c.data(), c.data() + n);
  }
  // index k = j n + i: column-major map gives F(i, j)
  Eigen::MatrixXd F = Eigen::Map<const Eigen::MatrixXd>(f.data(), n, n);
  Eigen::MatrixXd C = P * F * P;
  return Vec(C.data(), C.data() + N);
}

Vec uniform_spectral_solve(int n, int d, double alpha, const Vec& f, double q) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha out of (0,1]");
  Vec c = uniform_sine_transform(n, d, f);
  Vec lam(n);
  for (int j = 0; j < n; ++j) lam[j] = uniform_eigenvalue(n, j + 1);
  if (d == 1) {
    for (int j = 0; j < n; ++j) c[j] /= std::pow(lam[j], alpha) + q;
  } else {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        c[static_cast<std::size_t>(j) * n + i] /= std::pow(lam[i] + lam[j], alpha) + q;
  }
  // the sine matrix is symmetric and orthogonal
  return uniform_sine_transform(n, d, c);
}

Vec checkerboard_rhs(int n, int d) {
  if (n < 1 || (d != 1 && d != 2)) throw DomainError("need n >= 1 and d in {1,2}");
  // interface nodes (coordinate exactly 1/2) follow the lower-left quadrant
  auto low = [&](int idx) { return 2 * (idx + 1) <= n + 1; };
  if (d == 1) {
    Vec f(n);
    for (int i = 0; i < n; ++i) f[i] = low(i) ? 1.0 : -1.0;
    return f;
  }
  Vec f(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      f[static_cast<std::size_t>(j) * n + i] = (low(i) != low(j)) ? -1.0 : 1.0;
  return f;
}

Vec positive_part(const Vec& f) {
  Vec g(f.size());
  std::transform(f.begin(), f.end(), g.begin(), [](double v) { return std::max(v, 0.0); });
  return g;
}

ErrorReport error_report(const Vec& u, const Vec& uref, const DiscreteOperator& op, const Vec* f,
                         const std::string& oracle) {
  if (u.size() != uref.size() || u.size() != static_cast<std::size_t>(op.dimension()))
    throw DimensionError("error_report: length mismatch");
  ErrorReport r;
  r.oracle = oracle;
  double e2 = 0.0, einf = 0.0, r2 = 0.0, rinf = 0.0;
  Vec diff(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    diff[i] = u[i] - uref[i];
    e2 += diff[i] * diff[i];
    einf = std::max(einf, std::abs(diff[i]));
    r2 += uref[i] * uref[i];
    rinf = std::max(rinf, std::abs(uref[i]));
  }
  e2 = std::sqrt(e2);
  r2 = std::sqrt(r2);
  auto rel = [&](double num, double den) {
    if (den == 0.0) {
      r.absoluteFallback = true;
      return num;
    }
    return num / den;
  };
  r.l2RelRef = rel(e2, r2);
  r.linfRelRef = rel(einf, rinf);
  r.dNormRelRef = rel(weighted_norm(op, diff), weighted_norm(op, uref));
  if (f) {
    if (f->size() != u.size()) throw DimensionError("error_report: f length mismatch");
    double f2 = 0.0, finf = 0.0;
    for (double v : *f) {
      f2 += v * v;
      finf = std::max(finf, std::abs(v));
    }
    r.hasF = true;
    r.l2RelF = rel(e2, std::sqrt(f2));
    r.linfRelF = rel(einf, finf);
  }
  return r;
}

SeriesResult continuum_series_oracle(double alpha, const Vec& coefficients, bool unitSource,
                                     const Vec& grid, double tailTol, long maxTerms) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha out of (0,1]");
  SeriesResult out;
  out.values.assign(grid.size(), 0.0);
  if (!unitSource) {
    const long J = static_cast<long>(coefficients.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
      double s = 0.0, comp = 0.0;
      for (long j = 1; j <= J; ++j) {
        const double term = std::pow(j * pi, -2.0 * alpha) * coefficients[j - 1] *
                            std::sin(j * pi * grid[g]);
        const double y = term - comp;
        const double t = s + y;
        comp = (t - s) - y;
        s = t;
      }
      out.values[g] = s;
    }
    out.terms = J;
    return out;
  }
  // f = 1: f_j = 4/(j pi) for odd j. Partial sums of sin(j pi x) over odd j are
  // bounded by 1/|sin(pi x)|, so the tail after J is at most
  // 2 a_{J+2} / |sin(pi x)| with a_j = 4 (j pi)^{-1-2 alpha} decreasing.
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double x = grid[g];
    const double sx = std::abs(std::sin(pi * x));
    if (sx == 0.0) {
      out.values[g] = 0.0;
      continue;
    }
    const double need = 8.0 / (tailTol * sx);  // (J pi)^{1+2 alpha} >= need
    double Jd = std::pow(need, 1.0 / (1.0 + 2.0 * alpha)) / pi;
    if (!(Jd < static_cast<double>(maxTerms))) throw Error("series tail bound not met within term cap");
    long J = static_cast<long>(std::ceil(Jd));
    if (J % 2 == 0) ++J;
    double s = 0.0, comp = 0.0;
    for (long j = 1; j <= J; j += 2) {
      const double jp = j * pi;
      const double term = 4.0 * std::pow(jp, -1.0 - 2.0 * alpha) * std::sin(std::fmod(j * x, 2.0) * pi);
      const double y = term - comp;
      const double t = s + y;
      comp = (t - s) - y;
      s = t;
    }
    out.values[g] = s;
    out.terms = std::max(out.terms, J);
    out.tailBound = std::max(out.tailBound, 2.0 * 4.0 * std::pow((J + 2) * pi, -1.0 - 2.0 * alpha) / sx);
  }
  return out;
}

}  // namespace fracpow
