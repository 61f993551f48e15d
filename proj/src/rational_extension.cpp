#include <Eigen/Dense>
#include <cmath>

#include "fracpow/rational.hpp"

namespace fracpow {

double ExtensionSpec::normalization() const {
  return std::pow(2.0, 1.0 - 2.0 * alpha) * std::tgamma(1.0 - alpha) / std::tgamma(alpha);
}

namespace {

// b^p - a^p for 0 <= a < b, p > 0, without cancellation when a ~ b.
double powDiff(double a, double b, double p) {
  if (a == 0.0) return std::pow(b, p);
  return -std::pow(b, p) * std::expm1(p * std::log(a / b));
}

}  // namespace

PartialFractionRational extension_eigen(const ExtensionSpec& spec, ExtensionDiagnostics* diag) {
  require_alpha(spec.alpha);
  if (spec.M < 1) throw DomainError("extension eigenpair count must be >= 1");
  if (!(spec.Y > 0.0)) throw DomainError("truncation length Y must be positive");
  if (!(spec.gradingExponent >= 1.0)) throw DomainError("grading exponent must be >= 1");
  const int M = spec.M;
  const double beta = 1.0 - 2.0 * spec.alpha;  // weight y^beta, beta in (-1, 1)

  Vec y(M + 1);
  for (int j = 0; j <= M; ++j)
    y[j] = spec.Y * std::pow(static_cast<double>(j) / M, spec.gradingExponent);

  // nodes 0..M-1 are free; psi(Y) = 0 removes node M
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(M, M);
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(M, M);
  for (int e = 0; e < M; ++e) {
    const double lo = y[e], hi = y[e + 1], h = hi - lo;
    double I[3];  // int_lo^hi y^{beta+n} dy
    for (int n = 0; n < 3; ++n) I[n] = powDiff(lo, hi, beta + n + 1.0) / (beta + n + 1.0);
    const double k = I[0] / (h * h);
    const double mLo = (hi * hi * I[0] - 2.0 * hi * I[1] + I[2]) / (h * h);
    const double mHi = (lo * lo * I[0] - 2.0 * lo * I[1] + I[2]) / (h * h);
    const double mX = (-lo * hi * I[0] + (lo + hi) * I[1] - I[2]) / (h * h);
    const int a = e, b = e + 1;
    K(a, a) += k;
    W(a, a) += mLo;
    if (b < M) {
      K(b, b) += k;
      K(a, b) -= k;
      K(b, a) -= k;
      W(b, b) += mHi;
      W(a, b) += mX;
      W(b, a) += mX;
    }
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(K, W);
  if (es.info() != Eigen::Success) throw Error("extension eigenproblem failed");
  if (diag) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ws(W, Eigen::EigenvaluesOnly);
    diag->massCondition = ws.eigenvalues().maxCoeff() / ws.eigenvalues().minCoeff();
    diag->minEigenvalue = es.eigenvalues().minCoeff();
    diag->maxEigenvalue = es.eigenvalues().maxCoeff();
  }
  const double dAlpha = spec.normalization();
  PartialFractionRational r;
  r.alpha = spec.alpha;
  r.kind = RationalKind::Quadrature;
  r.method = "extension";
  for (int k = 0; k < M; ++k) {
    const double mu = es.eigenvalues()[k];
    const double psi0 = es.eigenvectors()(0, k);  // W-orthonormal
    if (!(mu > 0.0)) throw PoleError("nonpositive extension eigenvalue");
    r.terms.push_back({dAlpha * psi0 * psi0, -mu});
  }
  return make_rational(std::move(r));
}

}  // namespace fracpow
