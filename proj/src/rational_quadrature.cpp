#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "fracpow/rational.hpp"

namespace fracpow {

using std::numbers::pi;

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha out of (0,1)");
}

SincSpec SincSpec::automatic(double alpha, double kprime) {
  require_alpha(alpha);
  if (!(kprime > 0.0)) throw DomainError("k' must be positive");
  SincSpec s;
  s.alpha = alpha;
  s.kprime = kprime;
  const double base = pi * pi / (4.0 * kprime * kprime);
  // guard against 2.0000000000000004 style ceilings
  auto ceilTight = [](double v) { return static_cast<int>(std::ceil(v - 1e-12 * v)); };
  s.M = ceilTight(base / (1.0 - alpha));
  s.N = ceilTight(base / alpha);
  return s;
}

PartialFractionRational sinc_quadrature(const SincSpec& spec) {
  require_alpha(spec.alpha);
  if (!(spec.kprime > 0.0) || spec.M < 0 || spec.N < 0)
    throw DomainError("invalid sinc parameters");
  PartialFractionRational r;
  r.alpha = spec.alpha;
  r.kind = RationalKind::Quadrature;
  r.method = "sinc";
  const double scale = spec.kprime * std::sin(pi * spec.alpha) / pi;
  for (int l = -spec.M; l <= spec.N; ++l) {
    const double y = l * spec.kprime;
    r.terms.push_back({scale * std::exp((1.0 - spec.alpha) * y), -std::exp(y)});
  }
  return make_rational(std::move(r));
}

GaussRule gauss_jacobi_rule(double a, double b, int k) {
  if (k < 1) throw DomainError("node count must be >= 1");
  if (!(a > -1.0 && b > -1.0)) throw DomainError("Jacobi exponents must exceed -1");
  const double ab = a + b;
  Eigen::VectorXd diag(k);
  Eigen::VectorXd off(std::max(k - 1, 0));
  for (int n = 0; n < k; ++n) {
    const double s = 2.0 * n + ab;
    diag[n] = (n == 0) ? (b - a) / (ab + 2.0) : (b * b - a * a) / (s * (s + 2.0));
  }
  for (int n = 1; n < k; ++n) {
    const double s = 2.0 * n + ab;
    double beta;
    if (n == 1) {
      // (n+a+b) cancels against (2n+a+b-1) here; keeps a+b = -1 well defined
      beta = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      beta = 4.0 * n * (n + a) * (n + b) * (n + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    off[n - 1] = std::sqrt(beta);
  }
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) +
                              std::lgamma(b + 1.0) - std::lgamma(ab + 2.0));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw Error("Gauss-Jacobi eigen iteration did not converge");
  GaussRule rule;
  rule.nodes.resize(k);
  rule.weights.resize(k);
  for (int j = 0; j < k; ++j) {
    rule.nodes[j] = es.eigenvalues()[j];
    const double v0 = es.eigenvectors()(0, j);
    rule.weights[j] = mu0 * v0 * v0;
  }
  return rule;
}

PartialFractionRational gauss_jacobi(double alpha, int k, double lambdaMin, double lambdaMax,
                                     double tau) {
  require_alpha(alpha);
  if (!(lambdaMin > 0.0 && lambdaMax >= lambdaMin)) throw DomainError("invalid spectral bounds");
  if (tau <= 0.0) tau = std::sqrt(lambdaMin * lambdaMax);
  const GaussRule rule = gauss_jacobi_rule(-alpha, alpha - 1.0, k);
  PartialFractionRational r;
  r.alpha = alpha;
  r.kind = RationalKind::Quadrature;
  r.method = "gauss-jacobi";
  const double scale = 2.0 * std::sin(pi * alpha) * std::pow(tau, 1.0 - alpha) / pi;
  for (int j = 0; j < k; ++j) {
    const double th = rule.nodes[j];
    r.terms.push_back({scale * rule.weights[j] / (1.0 + th), -tau * (1.0 - th) / (1.0 + th)});
  }
  return make_rational(std::move(r));
}

double sigma_exponent(double alpha, int kappa) {
  return kappa * std::max(1.0 / alpha, 1.0 / (1.0 - alpha));
}

PartialFractionRational sigma_quadrature(double alpha, int kappa, int Msub, double lambdaRef) {
  require_alpha(alpha);
  if (kappa != 2 && kappa != 4) throw DomainError("kappa must be 2 or 4");
  if (Msub < 2 || (kappa == 4 && Msub % 2 != 0))
    throw DomainError("Msub must be >= 2 (and even for Simpson)");
  if (!(lambdaRef > 0.0)) throw DomainError("lambdaRef must be positive");
  const double sigma = sigma_exponent(alpha, kappa);
  const double wExp = sigma * (1.0 - alpha) / alpha - 1.0;
  const double pExp = sigma / alpha;
  if (!std::isfinite(pExp) || pExp > 700.0)
    throw DomainError("alpha too close to 0 or 1 for the sigma substitution");
  const double h = 1.0 / Msub;
  auto weight = [&](int i) {
    if (kappa == 2) return (i == 0 || i == Msub) ? 0.5 * h : h;
    if (i == 0 || i == Msub) return h / 3.0;
    return (i % 2 == 1) ? 4.0 * h / 3.0 : 2.0 * h / 3.0;
  };
  const double C = std::sin(alpha * pi) / (alpha * pi);
  PartialFractionRational r;
  r.alpha = alpha;
  r.kind = RationalKind::Quadrature;
  r.method = "sigma";
  // xi -> 0: the integrand tends to C (its pole runs off to -inf)
  r.c0 = weight(0) * C;
  for (int i = 1; i < Msub; ++i) {
    const double xi = i * h;
    const double lx = std::log(xi) / alpha;
    const double res = weight(i) * C * std::pow(1.0 - xi, wExp) * (1.0 + (sigma - 1.0) * xi) *
                       std::exp(-lx);
    const double pole = -std::pow(1.0 - xi, pExp) * std::exp(-lx);
    if (res > 0.0 && pole < 0.0) r.terms.push_back({res, pole});
  }
  // xi = 1 contributes only when wExp == 0, which the sigma choice excludes
  r.prefactor = std::pow(lambdaRef, -alpha);
  r.matrixScale = 1.0 / lambdaRef;
  return make_rational(std::move(r));
}

double eval_poly(const Vec& c, double z) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * z + *it;
  return v;
}

PadeApproximant pade_table(double alpha, int m) {
  if (m < 1 || m > 4) throw DomainError("Pade degree must be in 1..4");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0,1]");
  Vec t(2 * m + 1);
  t[0] = 1.0;
  for (int j = 1; j <= 2 * m; ++j) t[j] = t[j - 1] * (-alpha - (j - 1)) / j;
  // sum_{i=0}^m q_i t_{k-i} = 0 for k = m+1..2m, q_0 = 1
  Eigen::MatrixXd H(m, m);
  Eigen::VectorXd rhs(m);
  for (int row = 0; row < m; ++row) {
    const int k = m + 1 + row;
    for (int i = 1; i <= m; ++i) H(row, i - 1) = t[k - i];
    rhs[row] = -t[k];
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(H);
  if (!lu.isInvertible()) throw Error("Pade Hankel system is singular");
  Eigen::VectorXd q = lu.solve(rhs);
  PadeApproximant out;
  out.denominator.assign(m + 1, 0.0);
  out.denominator[0] = 1.0;
  for (int i = 1; i <= m; ++i) out.denominator[i] = q[i - 1];
  out.numerator.assign(m + 1, 0.0);
  for (int k = 0; k <= m; ++k)
    for (int i = 0; i <= k; ++i) out.numerator[k] += out.denominator[i] * t[k - i];

  // Denominator roots from its companion matrix.
  const Vec& Q = out.denominator;
  Vec roots;
  if (m == 1) {
    roots.push_back(-1.0 / Q[1]);
  } else {
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(m, m);
    for (int i = 1; i < m; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < m; ++i) comp(i, m - 1) = -Q[i] / Q[m];
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    for (int i = 0; i < m; ++i) {
      const auto ev = es.eigenvalues()[i];
      if (std::abs(ev.imag()) > 1e-10 * std::abs(ev)) throw PoleError("complex Pade pole");
      roots.push_back(ev.real());
    }
  }
  PartialFractionRational r;
  r.alpha = alpha;
  r.kind = RationalKind::Pade;
  r.method = "pade";
  r.c0 = out.numerator[m] / Q[m];
  for (double d : roots) {
    // Newton polish on Q
    for (int it = 0; it < 3; ++it) {
      double qv = eval_poly(Q, d), dq = 0.0;
      for (int i = 1; i <= m; ++i) dq += i * Q[i] * std::pow(d, i - 1);
      if (dq != 0.0) d -= qv / dq;
    }
    double dq = 0.0;
    for (int i = 1; i <= m; ++i) dq += i * Q[i] * std::pow(d, i - 1);
    // alpha = 1 is exactly 1/(1+z), pole at -1
    const bool below = d < -1.0 || (alpha == 1.0 && std::abs(d + 1.0) <= 1e-12);
    if (!below) throw PoleError("Pade pole not below -1");
    r.terms.push_back({eval_poly(out.numerator, d) / dq, d});
  }
  out.fractions = make_rational(std::move(r));
  for (const auto& term : out.fractions.terms)
    if (!(term.residue > 0.0)) throw PoleError("Pade residue sign violation");
  return out;
}

namespace {

template <class F>
double scanError(F&& eval, double alpha, double lo, double hi, int points, bool relative) {
  double worst = 0.0;
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < points; ++i) {
    const double z = std::exp(points == 1 ? a : a + (b - a) * i / (points - 1.0));
    const double exact = std::pow(z, -alpha);
    double e = std::abs(eval(z) - exact);
    if (relative) e /= exact;
    worst = std::max(worst, e);
  }
  return worst;
}

}  // namespace

double uniform_error(const PartialFractionRational& r, double alpha, double lo, double hi,
                     int points, bool relative) {
  return scanError([&](double z) { return eval_rational(r, z); }, alpha, lo, hi, points,
                   relative);
}

double uniform_error(const BarycentricRational& b, double alpha, double lo, double hi,
                     int points, bool relative) {
  return scanError([&](double z) { return eval_barycentric(b, z); }, alpha, lo, hi, points,
                   relative);
}

}  // namespace fracpow
