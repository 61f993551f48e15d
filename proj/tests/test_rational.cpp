#include <doctest.h>

#include <fstream>
#include <sstream>

#include "fracpow/rational.hpp"
#include "helpers.hpp"

using namespace fracpow;
using namespace testing_util;

namespace {

// Best uniform errors E_{alpha,k} of z^alpha on [0,1], k = 5..8.
double tabulated_error(double alpha, int k) {
  static const double e025[] = {2.7348e-3, 1.4312e-3, 7.8650e-4, 4.4950e-4};
  static const double e050[] = {2.6896e-4, 1.0747e-4, 4.6037e-5, 2.0852e-5};
  static const double e075[] = {2.8676e-5, 9.2522e-6, 3.2566e-6, 1.2288e-6};
  const double* t = alpha == 0.25 ? e025 : alpha == 0.5 ? e050 : e075;
  return t[k - 5];
}

// With x = 1/z, r(z) ~ z^{-alpha} on [1, 1e6] is r(1/x) ~ x^alpha on [1e-6, 1]
// with the same sup error, which is what the table measures.
double aaa_unit_interval_error(double alpha, int degree) {
  AaaOptions opt;
  opt.maxDegree = degree;
  auto r = aaa_rational(alpha, 1e6, opt);
  return uniform_error(r, alpha, 1.0, 1e6, 100000);
}

double error_at(const PartialFractionRational& r, double z) {
  return std::abs(eval_rational(r, z) - std::pow(z, -r.alpha));
}

}  // namespace

TEST_CASE("sinc counts") {
  auto half = SincSpec::automatic(0.5, 1.0);
  CHECK(half.M == 5);
  CHECK(half.N == 5);
  CHECK(sinc_quadrature(half).size() == 11);

  auto quarter = SincSpec::automatic(0.25, 1.0 / 3.0);
  CHECK(quarter.termCount() == 120);
  CHECK(std::min(quarter.M, quarter.N) == 30);
  CHECK(std::max(quarter.M, quarter.N) == 89);
  // the slower e^{-alpha y} decay on the positive side gets the longer tail
  CHECK(quarter.N == 89);
  CHECK(SincSpec::automatic(0.5, 1.0 / 3.0).termCount() == 91);
  auto r = sinc_quadrature(quarter);
  CHECK(r.size() == 120);
  CHECK(r.c0 == 0.0);
}

TEST_CASE("sinc accuracy improves as k' shrinks") {
  double prev = 1e300;
  for (double kp : {1.0, 0.8, 2.0 / 3.0, 0.5, 0.4, 1.0 / 3.0}) {
    const double e = error_at(sinc_quadrature(SincSpec::automatic(0.5, kp)), 1.0);
    CHECK(e < prev);
    prev = e;
  }
}

TEST_CASE("sinc error model: slope against 1/k'") {
  Vec x, y;
  for (double kp : {1.0, 2.0 / 3.0, 0.5, 0.4}) {
    x.push_back(1.0 / kp);
    y.push_back(std::log(uniform_error(sinc_quadrature(SincSpec::automatic(0.5, kp)), 0.5, 1.0,
                                       1e6)));
  }
  const double s = slope(x, y);
  MESSAGE("observed slope " << s << " vs " << -M_PI * M_PI / 2);
  CHECK(s < 0.0);
  CHECK(std::abs(s + M_PI * M_PI / 2) <= 0.2 * M_PI * M_PI / 2);
}

TEST_CASE("Gauss-Jacobi one-point rule") {
  for (double alpha : {0.25, 0.5, 0.75}) {
    auto rule = gauss_jacobi_rule(-alpha, alpha - 1.0, 1);
    CHECK(rule.nodes[0] == doctest::Approx(2 * alpha - 1));
    CHECK(rule.weights[0] == doctest::Approx(M_PI / std::sin(M_PI * alpha)));
    const double tau = std::sqrt(3.0 * 700.0);
    auto r = gauss_jacobi(alpha, 1, 3.0, 700.0);
    REQUIRE(r.size() == 1);
    CHECK(r.terms[0].residue == doctest::Approx(std::pow(tau, 1 - alpha) / alpha));
    CHECK(r.terms[0].pole == doctest::Approx(-tau * (1 - alpha) / alpha));
  }
  const double tau = 25.0;
  auto r = gauss_jacobi(0.5, 1, 1.0, 625.0);
  CHECK(eval_rational(r, 7.0) == doctest::Approx(2 * std::sqrt(tau) / (tau + 7.0)));
  CHECK(eval_rational(r, tau) == doctest::Approx(1.0 / std::sqrt(tau)).epsilon(1e-14));
  auto overridden = gauss_jacobi(0.5, 1, 1.0, 625.0, 4.0);
  CHECK(eval_rational(overridden, 4.0) == doctest::Approx(0.5));
}

TEST_CASE("Gauss-Jacobi rule integrates polynomials exactly") {
  // moments of (1-x)^a (1+x)^b against x^0 and x^1
  const double a = -0.3, b = -0.7;
  auto rule = gauss_jacobi_rule(a, b, 6);
  const double m0 = std::pow(2.0, a + b + 1) * std::tgamma(a + 1) * std::tgamma(b + 1) /
                    std::tgamma(a + b + 2);
  double s0 = 0, s1 = 0;
  for (int j = 0; j < 6; ++j) {
    s0 += rule.weights[j];
    s1 += rule.weights[j] * rule.nodes[j];
  }
  CHECK(s0 == doctest::Approx(m0).epsilon(1e-13));
  CHECK(s1 == doctest::Approx(m0 * (b - a) / (a + b + 2)).epsilon(1e-12));
}

TEST_CASE("Gauss-Jacobi sign pattern up to k = 40") {
  for (double alpha : {0.25, 0.5, 0.75})
    for (int k = 1; k <= 40; ++k) {
      auto r = gauss_jacobi(alpha, k, 10.0, 1e5);
      CHECK(r.size() == static_cast<std::size_t>(k));
      for (const auto& t : r.terms) {
        CHECK(t.pole < 0.0);
        CHECK(t.residue > 0.0);
      }
    }
}

TEST_CASE("sigma quadrature") {
  CHECK(sigma_exponent(0.5, 2) == 4.0);
  CHECK(sigma_exponent(0.25, 4) == doctest::Approx(16.0));
  // xi = 1 carries the weight (1 - xi)^{sigma(1-alpha)/alpha - 1} with a positive power
  CHECK(sigma_exponent(0.5, 2) * 0.5 / 0.5 - 1 > 0);
  auto r = sigma_quadrature(0.5, 2, 32, 1.0);
  CHECK(r.size() == 31);
  for (const auto& t : r.terms) CHECK(t.residue > 0.0);
  CHECK(r.c0 > 0.0);

  for (double alpha : {0.5, 0.25})
    for (int kappa : {2, 4})
      for (double z : {1.0, 10.0, 100.0}) {
        const double e16 = error_at(sigma_quadrature(alpha, kappa, 16, 1.0), z);
        const double e256 = error_at(sigma_quadrature(alpha, kappa, 256, 1.0), z);
        const double order = std::log(e16 / e256) / std::log(16.0);
        INFO("alpha=" << alpha << " kappa=" << kappa << " z=" << z << " order=" << order);
        CHECK(order >= kappa - 0.5);
      }

  // lambdaRef rescales the operator to lambda_min = 1
  auto scaled = sigma_quadrature(0.5, 2, 64, 50.0);
  CHECK(eval_rational(scaled, 200.0) ==
        doctest::Approx(std::pow(50.0, -0.5) * eval_rational(sigma_quadrature(0.5, 2, 64, 1.0), 4.0)));
  CHECK_THROWS_AS(sigma_quadrature(0.5, 3, 16, 1.0), DomainError);
}

TEST_CASE("AAA interpolation basics") {
  AaaOptions opt;
  opt.maxDegree = 1;
  opt.lawsonSteps = 0;
  auto b = aaa_fit({1.0, 2.0}, {0.5, 1.0 / 3.0}, opt);
  CHECK(b.size() == 2);
  CHECK(eval_barycentric(b, 1.0) == 0.5);
  CHECK(eval_barycentric(b, 2.0) == 1.0 / 3.0);
}

TEST_CASE("AAA degree 6 on [1e-6, 1] within twice the best error") {
  const double err = aaa_unit_interval_error(0.5, 6);
  MESSAGE("degree 6 error " << err);
  CHECK(err <= 2 * 1.0747e-4);
}

TEST_CASE("AAA error vs best approximation table, degrees 5-8") {
  for (double alpha : {0.25, 0.5, 0.75})
    for (int k = 5; k <= 8; ++k) {
      const double err = aaa_unit_interval_error(alpha, k);
      INFO("alpha=" << alpha << " k=" << k << " err/E=" << err / tabulated_error(alpha, k));
      CHECK(err <= 2 * tabulated_error(alpha, k));
    }
}

TEST_CASE("AAA error non-increasing in degree") {
  double prev = 1e300;
  for (int k = 3; k <= 8; ++k) {
    const double e = aaa_unit_interval_error(0.5, k);
    CHECK(e <= prev * 1.05);
    prev = e;
  }
}

TEST_CASE("barycentric to partial fractions") {
  SUBCASE("1/(1+z)") {
    AaaOptions opt;
    opt.maxDegree = 1;
    opt.lawsonSteps = 0;
    // two support points plus extra samples so the weights are determined
    auto b = aaa_fit({1.0, 2.0, 3.0, 5.0, 8.0}, {0.5, 1.0 / 3.0, 0.25, 1.0 / 6.0, 1.0 / 9.0}, opt);
    auto r = barycentric_to_partial_fractions(b, 1.0);
    REQUIRE(r.size() == 1);
    CHECK(r.terms[0].pole == doctest::Approx(-1.0));
    CHECK(r.terms[0].residue == doctest::Approx(1.0));
    CHECK(std::abs(r.c0) < 1e-12);
  }
  SUBCASE("constant data") {
    BarycentricRational b{{1.0}, {5.0}, {1.0}};
    auto r = barycentric_to_partial_fractions(b);
    CHECK(r.c0 == 5.0);
    CHECK(r.size() == 0);
  }
  SUBCASE("round trip on AAA output") {
    AaaOptions opt;
    opt.maxDegree = 8;
    auto b = aaa_build(0.5, 1.0, 1e5, opt);
    auto r = barycentric_to_partial_fractions(b, 0.5);
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.0, std::log(1e5));
    for (int i = 0; i < 100; ++i) {
      const double z = std::exp(u(gen));
      const double bz = eval_barycentric(b, z);
      CHECK(std::abs(eval_rational(r, z) - bz) <= 1e-11 * std::abs(bz));
    }
    CHECK((r.kind == RationalKind::BestUniform));
  }
  SUBCASE("positive pole rejected") {
    // 1/(2 - z) sampled away from its pole
    AaaOptions opt;
    opt.maxDegree = 1;
    opt.lawsonSteps = 0;
    auto b = aaa_fit({3.0, 4.0, 5.0, 6.0}, {-1.0, -0.5, -1.0 / 3.0, -0.25}, opt);
    CHECK_THROWS_AS(barycentric_to_partial_fractions(b), PoleError);
  }
}

TEST_CASE("BURA tables reproduce pole samples and errors") {
  auto quarter = bura_from_table(bura_table_path(0.25, 8));
  auto half = bura_from_table(bura_table_path(0.5, 8));
  auto three = bura_from_table(bura_table_path(0.75, 8));
  // the z^{-alpha} form stores 1/d_i; the smallest |d_i| is the largest reciprocal
  auto firstPole = [](const BuraTable& t) { return 1.0 / t.rational.terms.back().pole; };
  CHECK(firstPole(quarter) == doctest::Approx(-2.39e-11).epsilon(5e-3));
  CHECK(firstPole(half) == doctest::Approx(-7.35e-8).epsilon(5e-3));
  CHECK(firstPole(three) == doctest::Approx(-2.38e-6).epsilon(5e-3));
  auto nth = [](const BuraTable& t, int i) {
    return 1.0 / t.rational.terms[t.rational.size() - i].pole;
  };
  CHECK(nth(quarter, 2) == doctest::Approx(-8.37e-9).epsilon(5e-3));
  CHECK(nth(quarter, 3) == doctest::Approx(-5.95e-7).epsilon(5e-3));

  for (double alpha : {0.25, 0.5, 0.75})
    for (int k = 5; k <= 8; ++k) {
      auto t = bura_from_table(bura_table_path(alpha, k));
      INFO("alpha=" << alpha << " k=" << k);
      CHECK(t.rational.c0 == doctest::Approx(tabulated_error(alpha, k)).epsilon(0.01));
      CHECK((t.rational.kind == RationalKind::BestUniform));
      CHECK(t.rational.size() == static_cast<std::size_t>(k));
    }
  CHECK(bura_from_table(bura_table_path(0.5, 6)).rational.c0 ==
        doctest::Approx(1.0747e-4).epsilon(0.01));
}

TEST_CASE("BURA conversion arithmetic and rejection") {
  auto r = bura_convert(0.5, 2.0, {{-1.0, -2.0}});
  CHECK(r.c0 == doctest::Approx(2.0 - 0.5));
  CHECK(r.terms[0].residue == doctest::Approx(0.25));
  CHECK(r.terms[0].pole == doctest::Approx(-0.5));
  // c~0 = 1 - (-1)/(-1) = 0 violates c~0 > 0
  CHECK_THROWS_AS(bura_convert(0.5, 1.0, {{-1.0, -1.0}}), TableRejected);
  CHECK_THROWS_AS(bura_from_text("format trg\n0.5 1 1 1 1\n-1 -1\n"), TableRejected);
  CHECK_THROWS_AS(bura_from_text("format trg\n0.5 1 1 1 1\n-1 0.5\n"), TableRejected);
  // poles of z^alpha's approximant must interlace with its zeros
  CHECK_THROWS_AS(bura_from_text("format trg\n0.5 2 1 1 1\n-1 -1\n1 -2\n"), TableRejected);
}

TEST_CASE("BURA table scaled to an operator range") {
  auto t = bura_from_table(bura_table_path(0.5, 6)).rational;
  // on [1, inf) in the z^{-alpha} form the error is bounded by E
  CHECK(uniform_error(t, 0.5, 1.0, 1e8) <= 1.0747e-4 * 1.001);
}

TEST_CASE("extension eigen-rational") {
  SUBCASE("alpha = 1/2 uniform mesh matches closed-form FEM eigenvalues") {
    ExtensionSpec spec{0.5, 20, 3.0, 1.0};
    auto r = extension_eigen(spec);
    REQUIRE(r.size() == 20);
    const double h = spec.Y / spec.M;
    Vec expect;
    for (int k = 1; k <= spec.M; ++k) {
      const double th = (k - 0.5) * M_PI / spec.M;
      expect.push_back(6.0 / (h * h) * (1 - std::cos(th)) / (2 + std::cos(th)));
    }
    for (int k = 0; k < spec.M; ++k)
      CHECK(-r.terms[k].pole == doctest::Approx(expect[k]).epsilon(1e-10));
  }
  SUBCASE("sign pattern and normalization") {
    for (double alpha : {0.25, 0.5, 0.75}) {
      auto r = extension_eigen({alpha, 30, 7.0, 3.0});
      for (const auto& t : r.terms) {
        CHECK(t.pole < 0.0);
        CHECK(t.residue > 0.0);
      }
      CHECK(r.c0 == 0.0);
    }
    CHECK(ExtensionSpec{0.5}.normalization() == doctest::Approx(1.0));
    const double a = 0.3;
    CHECK(ExtensionSpec{a}.normalization() ==
          doctest::Approx(std::pow(2.0, 1 - 2 * a) * std::tgamma(1 - a) / std::tgamma(a)));
  }
  SUBCASE("calibrated scalar accuracy") {
    auto r40 = extension_eigen({0.5, 40, 7.0, 3.0});
    auto r80 = extension_eigen({0.5, 80, 7.0, 3.0});
    const double lo = 2 * M_PI * M_PI;
    const double e40 = uniform_error(r40, 0.5, lo, 1e5, 20000, true);
    const double e80 = uniform_error(r80, 0.5, lo, 1e5, 20000, true);
    MESSAGE("extension relative error M=40: " << e40 << ", M=80: " << e80);
    CHECK(e40 <= 2e-2);
    CHECK(e80 <= 1e-2);
  }
}

TEST_CASE("Pade of (1+z)^{-alpha}") {
  for (double alpha : {0.25, 0.5, 0.75}) {
    auto p = pade_table(alpha, 1);
    CHECK(p.numerator[0] == 1.0);
    CHECK(p.numerator[1] == doctest::Approx((1 - alpha) / 2));
    CHECK(p.denominator[1] == doctest::Approx((1 + alpha) / 2));
  }
  auto one = pade_table(1.0, 1);
  for (double z : {0.0, 0.3, 5.0}) CHECK(eval_rational(one.fractions, z) == doctest::Approx(1 / (1 + z)));

  for (double alpha : {0.25, 0.5, 0.75})
    for (int m = 1; m <= 4; ++m) {
      auto p = pade_table(alpha, m);
      for (const auto& t : p.fractions.terms) CHECK(t.pole < -1.0);
      // residual Q(z)(1+z)^{-alpha} - P(z) scales like z^{2m+1}
      auto resid = [&](long double z) {
        long double q = 0, n = 0;
        for (int i = m; i >= 0; --i) {
          q = q * z + p.denominator[i];
          n = n * z + p.numerator[i];
        }
        return static_cast<double>(q * std::pow(1 + z, static_cast<long double>(-alpha)) - n);
      };
      const double z1 = 0.1, z2 = 0.05;
      const double order = std::log(std::abs(resid(z1) / resid(z2))) / std::log(2.0);
      INFO("alpha=" << alpha << " m=" << m << " order=" << order);
      CHECK(order == doctest::Approx(2 * m + 1).epsilon(0.05));
      for (double z : {0.0, 0.5, 3.0, 40.0})
        CHECK(eval_rational(p.fractions, z) ==
              doctest::Approx(eval_poly(p.numerator, z) / eval_poly(p.denominator, z)));
    }
  CHECK_THROWS_AS(pade_table(0.5, 5), DomainError);
}

TEST_CASE("backend refinement is monotone") {
  const double lo = 1.0, hi = 1e4;
  auto noisyDecreasing = [](const Vec& e) {
    for (std::size_t i = 1; i < e.size(); ++i)
      if (e[i] > 1.05 * e[i - 1]) return false;
    return true;
  };
  for (double alpha : {0.25, 0.5, 0.75}) {
    INFO("alpha=" << alpha);
    Vec sinc, gj, sig, aaa, ext;
    for (double kp : {1.0, 0.8, 0.6, 0.45, 0.35})
      sinc.push_back(uniform_error(sinc_quadrature(SincSpec::automatic(alpha, kp)), alpha, lo, hi));
    for (int k : {2, 4, 8, 16, 32}) gj.push_back(uniform_error(gauss_jacobi(alpha, k, lo, hi), alpha, lo, hi));
    for (int m : {8, 16, 32, 64, 128}) sig.push_back(uniform_error(sigma_quadrature(alpha, 2, m, lo), alpha, lo, hi));
    for (int k : {2, 3, 4, 5, 6}) {
      AaaOptions opt;
      opt.maxDegree = k;
      aaa.push_back(uniform_error(aaa_rational(alpha, hi, opt), alpha, lo, hi));
    }
    for (int m : {10, 20, 40, 80}) ext.push_back(uniform_error(extension_eigen({alpha, m}), alpha, lo, hi));
    CHECK(noisyDecreasing(sinc));
    CHECK(noisyDecreasing(gj));
    CHECK(noisyDecreasing(sig));
    CHECK(noisyDecreasing(aaa));
    CHECK(noisyDecreasing(ext));
  }
}
