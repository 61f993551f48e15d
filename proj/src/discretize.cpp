#include "fracpow/discretize.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace fracpow {

Mesh1D::Mesh1D(Vec x) : nodes(std::move(x)) {
  if (nodes.size() < 3) throw DomainError("mesh needs at least one interior node");
  if (nodes.front() != 0.0 || nodes.back() != 1.0)
    throw DomainError("mesh must start at 0 and end at 1");
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (!(nodes[i] > nodes[i - 1])) throw DomainError("degenerate mesh: nodes not strictly increasing");
}

Mesh1D Mesh1D::uniform(int n) {
  if (n < 1) throw DomainError("n must be >= 1");
  Vec x(n + 2);
  for (int i = 0; i <= n + 1; ++i) x[i] = static_cast<double>(i) / (n + 1);
  x.back() = 1.0;
  return Mesh1D(std::move(x));
}

namespace {

double sinSq(double t) {
  const double s = std::sin(t);
  return s * s;
}

Vec tridiagonalEigenvalues(const Vec& diag, const Vec& off) {
  const int n = static_cast<int>(diag.size());
  Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(diag.data(), n);
  Eigen::VectorXd e(std::max(n - 1, 0));
  for (int i = 0; i + 1 < n; ++i) e[i] = off[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error("tridiagonal eigensolve failed");
  return Vec(es.eigenvalues().data(), es.eigenvalues().data() + n);
}

// D^{-1/2} S D^{-1/2} bands, for tridiagonal S.
void symmetricBands(const DiscreteOperator& op, Vec& diag, Vec& off) {
  const int n = op.dimension();
  const auto& S = op.stiffness();
  const auto& D = op.massDiag();
  diag.resize(n);
  off.assign(std::max(n - 1, 0), 0.0);
  for (int i = 0; i < n; ++i) {
    diag[i] = S.at(i, i) / D[i];
    if (i + 1 < n) off[i] = S.at(i, i + 1) / std::sqrt(D[i] * D[i + 1]);
  }
}

}  // namespace

Vec dense_eigenvalues(const DiscreteOperator& op) {
  const int n = op.dimension();
  if (op.stiffness().isTridiagonal()) {
    Vec diag, off;
    symmetricBands(op, diag, off);
    return tridiagonalEigenvalues(diag, off);
  }
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
  const auto& S = op.stiffness();
  const auto& D = op.massDiag();
  for (int i = 0; i < n; ++i)
    for (int p = S.rowPtr()[i]; p < S.rowPtr()[i + 1]; ++p) {
      const int j = S.colIdx()[p];
      B(i, j) = S.values()[p] / std::sqrt(D[i] * D[j]);
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error("dense eigensolve failed");
  return Vec(es.eigenvalues().data(), es.eigenvalues().data() + n);
}

std::pair<double, double> extreme_eigs_uniform(int n, int d) {
  if (n < 1) throw DomainError("n must be >= 1");
  if (d != 1 && d != 2) throw DomainError("dimension must be 1 or 2");
  const double np1 = n + 1.0;
  const double c = (d == 2 ? 8.0 : 4.0) * np1 * np1;
  const double lo = c * sinSq(std::numbers::pi / (2.0 * np1));
  const double hi = c * sinSq(std::numbers::pi * n / (2.0 * np1));
  return {lo, hi};
}

DiscreteOperator assemble_1d_variable(const Vec& a) {
  const int n = static_cast<int>(a.size()) - 1;
  if (n < 1) throw DomainError("need n >= 1 interior nodes");
  for (double v : a)
    if (!(v > 0.0)) throw DomainError("coefficient samples must be positive");
  const double h = 1.0 / (n + 1);
  const double ih2 = 1.0 / (h * h);
  std::vector<Triplet> t;
  t.reserve(3 * n);
  for (int i = 0; i < n; ++i) {
    t.push_back({i, i, (a[i] + a[i + 1]) * ih2});
    if (i + 1 < n) {
      t.push_back({i, i + 1, -a[i + 1] * ih2});
      t.push_back({i + 1, i, -a[i + 1] * ih2});
    }
  }
  const double amin = *std::min_element(a.begin(), a.end());
  const double amax = *std::max_element(a.begin(), a.end());
  const double formulaMin = 4.0 * std::numbers::pi * std::numbers::pi * amin;
  const double upper = 4.0 * ih2 * amax;

  DiscreteOperator op(CsrMatrix::fromTriplets(n, std::move(t)), Vec(n, 1.0),
                      std::min(formulaMin, upper), upper, BoundsSource::Analytic);
  double lower;
  BoundsSource src;
  if (n <= kDenseBoundsLimit) {
    lower = dense_eigenvalues(op).front();
    src = BoundsSource::Dense;
  } else {
    // S >= min(a) * S_uniform in the quadratic-form sense.
    lower = amin * extreme_eigs_uniform(n, 1).first;
    src = BoundsSource::Analytic;
  }
  DiscreteOperator out = op.withBounds(std::min(lower, upper), upper, src);
  out.recordFormulaBound(formulaMin, lower < formulaMin * (1.0 - 1e-12));
  return out;
}

DiscreteOperator assemble_1d_variable(const std::function<double(double)>& a, int n,
                                      CoefficientSampling mode) {
  if (n < 1) throw DomainError("need n >= 1 interior nodes");
  const double h = 1.0 / (n + 1);
  Vec faces(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double left = i * h;
    if (mode == CoefficientSampling::Midpoint) {
      faces[i] = a(left + 0.5 * h);
    } else {
      // 4-point Gauss-Legendre average over the cell
      static const double xg[4] = {-0.8611363115940526, -0.3399810435848563,
                                   0.3399810435848563, 0.8611363115940526};
      static const double wg[4] = {0.3478548451374538, 0.6521451548625461,
                                   0.6521451548625461, 0.3478548451374538};
      double s = 0.0;
      for (int g = 0; g < 4; ++g) s += wg[g] * a(left + 0.5 * h * (1.0 + xg[g]));
      faces[i] = 0.5 * s;
    }
  }
  return assemble_1d_variable(faces);
}

DiscreteOperator assemble_2d_laplacian(int n) {
  if (n < 1) throw DomainError("n must be >= 1");
  const double ih2 = (n + 1.0) * (n + 1.0);
  const int N = n * n;
  std::vector<Triplet> t;
  t.reserve(5 * static_cast<std::size_t>(N));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int k = j * n + i;
      t.push_back({k, k, 4.0 * ih2});
      if (i > 0) t.push_back({k, k - 1, -ih2});
      if (i + 1 < n) t.push_back({k, k + 1, -ih2});
      if (j > 0) t.push_back({k, k - n, -ih2});
      if (j + 1 < n) t.push_back({k, k + n, -ih2});
    }
  auto [lo, hi] = extreme_eigs_uniform(n, 2);
  return DiscreteOperator(CsrMatrix::fromTriplets(N, std::move(t)), Vec(N, 1.0), lo, hi,
                          BoundsSource::Analytic);
}

DiscreteOperator assemble_1d_nonuniform(const Mesh1D& mesh) {
  const int n = mesh.interiorCount();
  const Vec& x = mesh.nodes;
  Vec h(n + 2, 0.0);  // h[i] = x_i - x_{i-1}, i = 1..n+1
  for (int i = 1; i <= n + 1; ++i) h[i] = x[i] - x[i - 1];
  std::vector<Triplet> t;
  Vec D(n);
  for (int r = 0; r < n; ++r) {
    const int i = r + 1;
    t.push_back({r, r, 1.0 / h[i] + 1.0 / h[i + 1]});
    if (r + 1 < n) {
      t.push_back({r, r + 1, -1.0 / h[i + 1]});
      t.push_back({r + 1, r, -1.0 / h[i + 1]});
    }
    D[r] = 0.5 * (h[i] + h[i + 1]);
  }
  DiscreteOperator op(CsrMatrix::fromTriplets(n, std::move(t)), D, 1.0, 1.0,
                      BoundsSource::User);
  Vec diag, off;
  symmetricBands(op, diag, off);
  if (n <= kDenseBoundsLimit) {
    Vec ev = tridiagonalEigenvalues(diag, off);
    return op.withBounds(ev.front(), ev.back(), BoundsSource::Dense);
  }
  // Gershgorin on D^{-1/2} S D^{-1/2}; the lower end uses the uniform-mesh
  // bound scaled by the worst mass ratio, which stays positive.
  double hi = 0.0;
  for (int i = 0; i < n; ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::abs(off[i - 1]);
    if (i + 1 < n) radius += std::abs(off[i]);
    hi = std::max(hi, diag[i] + radius);
  }
  // u^T S u >= (1/hmax) * u^T T u and u^T D u <= hmax' * |u|^2
  const double hmax = *std::max_element(h.begin() + 1, h.end());
  const double dmax = *std::max_element(D.begin(), D.end());
  const double lo = extreme_eigs_uniform(n, 1).first / (n + 1.0) / (n + 1.0) / hmax / dmax;
  return op.withBounds(std::min(lo, hi), hi, BoundsSource::Gershgorin);
}

}  // namespace fracpow
