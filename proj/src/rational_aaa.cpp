#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>

#include "fracpow/rational.hpp"

namespace fracpow {

namespace {

// Right singular vector of the smallest singular value; QR first so the SVD
// is only (cols x cols).
Eigen::VectorXd smallestRightSingular(const Eigen::MatrixXd& A) {
  const Eigen::Index n = A.cols();
  if (A.rows() == 0) {
    Eigen::VectorXd v(n);
    for (Eigen::Index j = 0; j < n; ++j) v[j] = (j % 2 == 0) ? 1.0 : -1.0;
    return v / std::sqrt(static_cast<double>(n));
  }
  Eigen::MatrixXd R;
  if (A.rows() > n) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
    R = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  } else {
    R = A;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(R, Eigen::ComputeFullV);
  return svd.matrixV().col(n - 1);
}

struct Fit {
  Vec num;  // numerator coefficients (w_j f_j)
  Vec den;  // denominator coefficients (w_j)
};

Vec evalOnSamples(const Vec& Z, const std::vector<int>& rest, const Vec& zs, const Fit& fit) {
  Vec out(rest.size());
  for (std::size_t r = 0; r < rest.size(); ++r) {
    double n = 0.0, d = 0.0;
    const double z = Z[rest[r]];
    for (std::size_t j = 0; j < zs.size(); ++j) {
      const double c = 1.0 / (z - zs[j]);
      n += c * fit.num[j];
      d += c * fit.den[j];
    }
    out[r] = n / d;
  }
  return out;
}

}  // namespace

BarycentricRational aaa_fit(const Vec& Z, const Vec& F, const AaaOptions& opt) {
  const int S = static_cast<int>(Z.size());
  if (Z.size() != F.size() || S < 2) throw DimensionError("AAA needs matching samples (>= 2)");
  if (!(opt.tol > 0.0)) throw DomainError("AAA tolerance must be positive");
  if (opt.maxDegree < 0) throw DomainError("maxDegree must be >= 0");
  if (S < opt.maxDegree + 1) throw DomainError("fewer samples than support points");

  double fscale = 0.0;
  for (double v : F) fscale = std::max(fscale, std::abs(v));
  const double mean = std::accumulate(F.begin(), F.end(), 0.0) / S;

  std::vector<int> rest(S);
  std::iota(rest.begin(), rest.end(), 0);
  Vec zs, fs, R(S, mean);
  Fit fit;
  double err = 0.0;
  bool converged = false;
  bool lawsonUsed = false;
  for (int m = 1; m <= opt.maxDegree + 1; ++m) {
    // point of maximal error; lowest index wins ties
    int pick = -1;
    double worst = -1.0;
    for (int i : rest) {
      const double e = std::abs(F[i] - R[i]);
      if (e > worst) {
        worst = e;
        pick = i;
      }
    }
    zs.push_back(Z[pick]);
    fs.push_back(F[pick]);
    rest.erase(std::find(rest.begin(), rest.end(), pick));

    const int rows = static_cast<int>(rest.size());
    Eigen::MatrixXd L(rows, m);
    for (int r = 0; r < rows; ++r)
      for (int j = 0; j < m; ++j) L(r, j) = (F[rest[r]] - fs[j]) / (Z[rest[r]] - zs[j]);
    Eigen::VectorXd w = smallestRightSingular(L);
    fit.den.assign(w.data(), w.data() + m);
    fit.num.resize(m);
    for (int j = 0; j < m; ++j) fit.num[j] = fit.den[j] * fs[j];

    Vec vals = evalOnSamples(Z, rest, zs, fit);
    R = F;
    err = 0.0;
    for (int r = 0; r < rows; ++r) {
      R[rest[r]] = vals[r];
      err = std::max(err, std::abs(F[rest[r]] - vals[r]));
    }
    if (err <= opt.tol * fscale) {
      converged = true;
      break;
    }
  }

  // Lawson: reweighted linearized fits with independent numerator coefficients.
  if (!converged && opt.lawsonSteps > 0 && zs.size() >= 2) {
    const int m = static_cast<int>(zs.size());
    const int rows = static_cast<int>(rest.size());
    Eigen::MatrixXd A(rows, 2 * m);
    for (int r = 0; r < rows; ++r)
      for (int j = 0; j < m; ++j) {
        const double c = 1.0 / (Z[rest[r]] - zs[j]);
        A(r, j) = c;
        A(r, m + j) = -F[rest[r]] * c;
      }
    Eigen::VectorXd wt = Eigen::VectorXd::Constant(rows, 1.0 / rows);
    Fit best = fit, cur = fit;
    double bestErr = err;
    for (int it = 0; it < opt.lawsonSteps; ++it) {
      Vec vals = evalOnSamples(Z, rest, zs, cur);
      double e = 0.0, total = 0.0;
      Eigen::VectorXd pointErr(rows);
      for (int r = 0; r < rows; ++r) {
        pointErr[r] = std::abs(F[rest[r]] - vals[r]);
        e = std::max(e, pointErr[r]);
      }
      if (!std::isfinite(e)) break;
      if (e < bestErr) {
        bestErr = e;
        best = cur;
      }
      for (int r = 0; r < rows; ++r) {
        wt[r] *= pointErr[r];
        total += wt[r];
      }
      if (!(total > 0.0)) break;
      wt /= total;
      Eigen::MatrixXd WA = wt.array().sqrt().matrix().asDiagonal() * A;
      Eigen::VectorXd ab = smallestRightSingular(WA);
      cur.num.assign(ab.data(), ab.data() + m);
      cur.den.assign(ab.data() + m, ab.data() + 2 * m);
    }
    Vec vals = evalOnSamples(Z, rest, zs, cur);
    double e = 0.0;
    for (int r = 0; r < rows; ++r) e = std::max(e, std::abs(F[rest[r]] - vals[r]));
    if (std::isfinite(e) && e < bestErr) {
      bestErr = e;
      best = cur;
    }
    lawsonUsed = bestErr < err;
    fit = best;
    err = bestErr;
  }

  BarycentricRational b;
  b.support = zs;
  b.weights = fit.den;
  b.values = fs;
  if (lawsonUsed)
    for (std::size_t j = 0; j < zs.size(); ++j)
      if (fit.den[j] != 0.0) b.values[j] = fit.num[j] / fit.den[j];
  b.converged = converged;
  b.sampleError = err;
  return b;
}

BarycentricRational aaa_build(double alpha, double lambdaMin, double lambdaMax,
                              const AaaOptions& opt) {
  require_alpha(alpha);
  if (!(lambdaMin > 0.0 && lambdaMax > lambdaMin)) throw DomainError("invalid AAA interval");
  const int S = opt.sampleCount;
  if (S < 2 * (opt.maxDegree + 1)) throw DomainError("sampleCount must be >= 2*kmax");
  Vec Z(S), F(S);
  const double a = std::log(lambdaMin), b = std::log(lambdaMax);
  for (int i = 0; i < S; ++i) {
    Z[i] = std::exp(a + (b - a) * i / (S - 1.0));
    F[i] = std::pow(Z[i], -alpha);
  }
  Z.front() = lambdaMin;
  Z.back() = lambdaMax;
  return aaa_fit(Z, F, opt);
}

PartialFractionRational barycentric_to_partial_fractions(const BarycentricRational& b,
                                                         double alpha) {
  const int m = static_cast<int>(b.size());
  if (m == 0) throw DomainError("empty barycentric rational");
  const double wsum = std::accumulate(b.weights.begin(), b.weights.end(), 0.0);
  double nsum = 0.0;
  for (int j = 0; j < m; ++j) nsum += b.weights[j] * b.values[j];

  PartialFractionRational r;
  r.alpha = alpha;
  r.method = "aaa";
  if (wsum == 0.0) throw DomainError("barycentric rational is not proper");
  r.c0 = nsum / wsum;
  if (m == 1) return make_rational(std::move(r));

  // Finite eigenvalues of [[0, w^T], [1, diag(z)]] against diag(0, I).
  double zscale = 0.0;
  for (double z : b.support) zscale = std::max(zscale, std::abs(z));
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(m + 1, m + 1);
  Eigen::MatrixXd B = Eigen::MatrixXd::Identity(m + 1, m + 1);
  B(0, 0) = 0.0;
  for (int j = 0; j < m; ++j) {
    E(0, j + 1) = b.weights[j];
    E(j + 1, 0) = 1.0;
    E(j + 1, j + 1) = b.support[j] / zscale;
  }
  Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> ges(E, B, false);
  if (ges.info() != Eigen::Success) throw Error("companion pencil eigensolve failed");
  Vec poles;
  const auto al = ges.alphas();
  const auto be = ges.betas();
  // two eigenvalues of the pencil are infinite; keep the m-1 most finite ones
  std::vector<int> order(m + 1);
  std::iota(order.begin(), order.end(), 0);
  auto finiteness = [&](int i) {
    const double a = std::abs(al[i]);
    return a == 0.0 ? std::numeric_limits<double>::infinity() : std::abs(be[i]) / a;
  };
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return finiteness(x) > finiteness(y); });
  for (int k = 0; k < m - 1; ++k) {
    const int i = order[k];
    const std::complex<double> ev = al[i] / be[i];
    const double mag = std::abs(ev);
    if (!std::isfinite(mag)) throw PoleError("pole at infinity in a proper rational");
    if (std::abs(ev.imag()) > 1e-10 * mag)
      throw PoleError("complex pole " + std::to_string(ev.real() * zscale) + " + " +
                      std::to_string(ev.imag() * zscale) + "i");
    poles.push_back(ev.real() * zscale);
  }
  auto den = [&](double z, double& d1) {
    double d0 = 0.0;
    d1 = 0.0;
    for (int j = 0; j < m; ++j) {
      const double c = 1.0 / (z - b.support[j]);
      d0 += b.weights[j] * c;
      d1 -= b.weights[j] * c * c;
    }
    return d0;
  };
  for (double& p : poles) {
    for (int it = 0; it < 4; ++it) {
      double d1;
      const double d0 = den(p, d1);
      if (d1 == 0.0) break;
      const double step = d0 / d1;
      if (!std::isfinite(step) || std::abs(step) > 1e-3 * std::abs(p)) break;
      p -= step;
    }
    if (!(p < 0.0)) throw PoleError("nonnegative pole " + std::to_string(p));
    double d1;
    den(p, d1);
    double n0 = 0.0;
    for (int j = 0; j < m; ++j) n0 += b.weights[j] * b.values[j] / (p - b.support[j]);
    r.terms.push_back({n0 / d1, p});
  }
  bool signs = r.c0 > 0.0;
  for (const auto& t : r.terms) signs = signs && t.residue > 0.0;
  r.kind = signs ? RationalKind::BestUniform : RationalKind::Generic;
  return make_rational(std::move(r));
}

PartialFractionRational aaa_rational(double alpha, double ratio, const AaaOptions& opt) {
  if (!(ratio > 1.0)) throw DomainError("AAA interval ratio must exceed 1");
  // Near the rounding floor AAA produces spurious (positive or complex) poles.
  // Retry without Lawson, then with one degree less, until the poles are valid.
  AaaOptions cur = opt;
  for (;;) {
    try {
      return barycentric_to_partial_fractions(aaa_build(alpha, 1.0, ratio, cur), alpha);
    } catch (const PoleError&) {
      if (cur.lawsonSteps > 0 && opt.lawsonSteps > 0 && cur.maxDegree == opt.maxDegree) {
        cur.lawsonSteps = 0;
      } else if (cur.maxDegree > 1) {
        --cur.maxDegree;
        cur.lawsonSteps = opt.lawsonSteps;
      } else {
        throw;
      }
    }
  }
}

}  // namespace fracpow
