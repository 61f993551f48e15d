#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "fracpow/discretize.hpp"
#include "fracpow/io.hpp"
#include "fracpow/reference.hpp"
#include "helpers.hpp"

using namespace fracpow;
using namespace testing_util;

namespace {

void check_bounds_contain_spectrum(const DiscreteOperator& op) {
  Vec ev = dense_spectrum(op, false).eigenvalues;
  CHECK(ev.front() >= op.lambdaMin() * (1 - 1e-10));
  CHECK(ev.back() <= op.lambdaMax() * (1 + 1e-10));
}

void check_m_matrix(const DiscreteOperator& op) {
  const auto& S = op.stiffness();
  for (int i = 0; i < S.size(); ++i)
    for (int p = S.rowPtr()[i]; p < S.rowPtr()[i + 1]; ++p) {
      if (S.colIdx()[p] == i) CHECK(S.values()[p] > 0.0);
      else CHECK(S.values()[p] <= 0.0);
    }
}

}  // namespace

TEST_CASE("variable coefficient, a = 1, n = 3") {
  auto op = assemble_1d_variable([](double) { return 1.0; }, 3);
  CHECK(op.stiffness().at(0, 0) == doctest::Approx(32.0));
  CHECK(op.stiffness().at(0, 1) == doctest::Approx(-16.0));
  CHECK(op.stiffness().at(1, 1) == doctest::Approx(32.0));
  CHECK(op.stiffness().at(0, 2) == 0.0);
  CHECK(op.lambdaMax() == doctest::Approx(64.0));  // (4/h^2) max a
  // the 4 pi^2 closed-form value is recorded; the effective bound must hold
  CHECK(op.formulaLambdaMin() == doctest::Approx(4 * M_PI * M_PI));
  check_bounds_contain_spectrum(op);
  const double true_min = 64.0 * std::pow(std::sin(M_PI / 8), 2);
  CHECK(true_min < 4 * M_PI * M_PI);
  CHECK(op.formulaBoundViolated());
  CHECK(op.lambdaMin() <= true_min * (1 + 1e-12));
}

TEST_CASE("variable coefficient is linear in a") {
  auto one = assemble_1d_variable([](double) { return 1.0; }, 7);
  auto c = assemble_1d_variable([](double) { return 3.5; }, 7);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j)
      CHECK(c.stiffness().at(i, j) == doctest::Approx(3.5 * one.stiffness().at(i, j)));
}

TEST_CASE("variable coefficient a = 1 + x, n = 2") {
  auto op = assemble_1d_variable([](double x) { return 1.0 + x; }, 2);
  CHECK(op.stiffness().at(0, 0) == doctest::Approx(9.0 * 8.0 / 3.0));
  CHECK(op.stiffness().at(0, 1) == doctest::Approx(-9.0 * 1.5));
  CHECK(op.stiffness().at(1, 0) == doctest::Approx(-9.0 * 1.5));
  CHECK(op.stiffness().at(1, 1) == doctest::Approx(9.0 * 10.0 / 3.0));
  auto fromFaces = assemble_1d_variable(Vec{7.0 / 6.0, 1.5, 11.0 / 6.0});
  CHECK(fromFaces.stiffness().at(1, 1) == doctest::Approx(30.0));
}

TEST_CASE("variable coefficient errors and cell averages") {
  CHECK_THROWS_AS(assemble_1d_variable([](double x) { return x - 0.5; }, 5), DomainError);
  CHECK_THROWS_AS(assemble_1d_variable([](double) { return 1.0; }, 0), DomainError);
  auto avg = assemble_1d_variable([](double x) { return 1.0 + x; }, 2,
                                  CoefficientSampling::CellAverage);
  // a linear coefficient averages to its midpoint value
  CHECK(avg.stiffness().at(0, 0) == doctest::Approx(24.0));
}

TEST_CASE("2D Laplacian examples") {
  auto one = assemble_2d_laplacian(1);
  CHECK(one.dimension() == 1);
  CHECK(one.stiffness().at(0, 0) == doctest::Approx(16.0));

  auto two = assemble_2d_laplacian(2);
  CHECK(two.dimension() == 4);
  for (int i = 0; i < 4; ++i) CHECK(two.stiffness().at(i, i) == doctest::Approx(36.0));
  CHECK(two.stiffness().at(0, 1) == doctest::Approx(-9.0));
  CHECK(two.stiffness().at(0, 2) == doctest::Approx(-9.0));
  CHECK(two.stiffness().at(0, 3) == 0.0);
  CHECK(two.stiffness().at(1, 2) == 0.0);
  Vec ev = dense_spectrum(two, false).eigenvalues;
  CHECK(ev[0] == doctest::Approx(18.0));
  CHECK(ev[1] == doctest::Approx(36.0));
  CHECK(ev[2] == doctest::Approx(36.0));
  CHECK(ev[3] == doctest::Approx(54.0));

  auto five = assemble_2d_laplacian(5);
  Vec ones(25, 1.0), rs = stiffnessProduct(five, ones);
  for (int j = 0; j < 5; ++j)
    for (int i = 0; i < 5; ++i) {
      const bool inner = i > 0 && i < 4 && j > 0 && j < 4;
      if (inner) CHECK(std::abs(rs[j * 5 + i]) < 1e-12);
      else CHECK(rs[j * 5 + i] > 0.0);
    }
}

TEST_CASE("nonuniform mesh") {
  SUBCASE("uniform nodes recover the finite-difference operator") {
    auto op = assemble_1d_nonuniform(Mesh1D::uniform(7));
    const double h = 1.0 / 8;
    CHECK(op.stiffness().at(3, 3) == doctest::Approx(2.0 / h));
    CHECK(op.stiffness().at(3, 4) == doctest::Approx(-1.0 / h));
    for (double d : op.massDiag()) CHECK(d == doctest::Approx(h));
    Vec x = random_vec(7, 3);
    auto ref = assemble_1d_variable([](double) { return 1.0; }, 7);
    CHECK(rel_diff(matvec(op, x), matvec(ref, x)) < 1e-13);
  }
  SUBCASE("mesh {0, 1/4, 1/2, 1}") {
    auto op = assemble_1d_nonuniform(Mesh1D({0.0, 0.25, 0.5, 1.0}));
    CHECK(op.stiffness().at(0, 0) == doctest::Approx(8.0));
    CHECK(op.stiffness().at(0, 1) == doctest::Approx(-4.0));
    CHECK(op.stiffness().at(1, 0) == doctest::Approx(-4.0));
    CHECK(op.stiffness().at(1, 1) == doctest::Approx(6.0));
    // h~_1 = (1/4 + 1/4)/2, h~_2 = (1/4 + 1/2)/2
    CHECK(op.massDiag()[0] == doctest::Approx(0.25));
    CHECK(op.massDiag()[1] == doctest::Approx(0.375));
    check_bounds_contain_spectrum(op);
  }
  SUBCASE("self-adjointness on a graded mesh") {
    Vec x;
    for (int i = 0; i <= 41; ++i) x.push_back(std::pow(i / 41.0, 2.0));
    auto op = assemble_1d_nonuniform(Mesh1D(x));
    Vec a = random_vec(40, 1), b = random_vec(40, 2);
    const double l = weighted_dot(op, a, matvec(op, b)), r = weighted_dot(op, b, matvec(op, a));
    CHECK(std::abs(l - r) <= 1e-12 * std::abs(l));
    check_bounds_contain_spectrum(op);
    check_m_matrix(op);
  }
  CHECK_THROWS_AS(Mesh1D({0.0, 0.5, 0.5, 1.0}), DomainError);
  CHECK_THROWS_AS(Mesh1D({0.1, 0.5, 1.0}), DomainError);
}

TEST_CASE("extreme eigenvalue formulas") {
  auto [lo2, hi2] = extreme_eigs_uniform(2, 2);
  CHECK(lo2 == doctest::Approx(18.0));
  CHECK(hi2 == doctest::Approx(54.0));
  auto [lo1, hi1] = extreme_eigs_uniform(1, 1);
  CHECK(lo1 == doctest::Approx(8.0));
  CHECK(hi1 == doctest::Approx(8.0));
  auto [loBig, hiBig] = extreme_eigs_uniform(4000, 2);
  CHECK(loBig == doctest::Approx(2 * M_PI * M_PI).epsilon(1e-5));
  CHECK(hiBig == doctest::Approx(8.0 * 4001.0 * 4001.0).epsilon(1e-5));
  for (int d = 1; d <= 2; ++d)
    for (int n : {1, 3, 8, 17, 32}) {
      auto op = d == 1 ? assemble_1d_variable([](double) { return 1.0; }, n)
                       : assemble_2d_laplacian(n);
      Vec ev = dense_spectrum(op, false).eigenvalues;
      auto [lo, hi] = extreme_eigs_uniform(n, d);
      CHECK(std::abs(ev.front() - lo) <= 1e-10 * lo);
      CHECK(std::abs(ev.back() - hi) <= 1e-10 * hi);
    }
}

TEST_CASE("2D spectrum is the tensor sum of 1D spectra") {
  const int n = 9;
  Vec ev = dense_spectrum(assemble_2d_laplacian(n), false).eigenvalues;
  Vec sums;
  for (int j = 1; j <= n; ++j)
    for (int k = 1; k <= n; ++k) sums.push_back(uniform_eigenvalue(n, j) + uniform_eigenvalue(n, k));
  std::sort(sums.begin(), sums.end());
  for (std::size_t i = 0; i < ev.size(); ++i) CHECK(std::abs(ev[i] - sums[i]) <= 1e-10 * sums[i]);
}

TEST_CASE("assembled operators are M-matrices with valid bounds") {
  check_m_matrix(assemble_2d_laplacian(6));
  auto var = random_coefficient_operator(60, 11);
  check_m_matrix(var);
  check_bounds_contain_spectrum(var);
  check_bounds_contain_spectrum(assemble_2d_laplacian(12));
}

TEST_CASE("matrix market round trip keeps mass and bounds") {
  auto op = assemble_1d_nonuniform(Mesh1D({0.0, 0.2, 0.3, 0.7, 1.0}));
  const auto path = (std::filesystem::temp_directory_path() / "fracpow_rt.mtx").string();
  write_matrix_market(path, op);
  auto back = read_matrix_market(path);
  CHECK(back.dimension() == op.dimension());
  CHECK(back.lambdaMin() == op.lambdaMin());
  CHECK(back.lambdaMax() == op.lambdaMax());
  for (int i = 0; i < op.dimension(); ++i) {
    CHECK(back.massDiag()[i] == op.massDiag()[i]);
    for (int j = 0; j < op.dimension(); ++j)
      CHECK(back.stiffness().at(i, j) == op.stiffness().at(i, j));
  }
  std::remove((path + ".meta").c_str());
  auto bare = read_matrix_market(path);
  CHECK(bare.massDiag()[0] == 1.0);
  check_bounds_contain_spectrum(bare);
  std::remove(path.c_str());
}
