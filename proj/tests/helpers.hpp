#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "fracpow/core.hpp"
#include "fracpow/discretize.hpp"

namespace testing_util {

using fracpow::Vec;

inline Vec random_vec(int n, unsigned seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  Vec v(n);
  for (double& x : v) x = dist(gen);
  return v;
}

inline double norm2(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double rel_diff(const Vec& a, const Vec& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / den);
}

inline Vec scaled(const Vec& v, double s) {
  Vec out(v);
  for (double& x : out) x *= s;
  return out;
}

// Least-squares slope of y against x.
inline double slope(const Vec& x, const Vec& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline fracpow::DiscreteOperator identity_operator(int n) {
  std::vector<fracpow::Triplet> t;
  for (int i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  return {fracpow::CsrMatrix::fromTriplets(n, t), Vec(n, 1.0), 1.0, 1.0};
}

inline fracpow::DiscreteOperator scalar_operator(double lambda) {
  return {fracpow::CsrMatrix::fromTriplets(1, {{0, 0, lambda}}), Vec{1.0}, lambda, lambda};
}

// Random-coefficient 1D operator, coefficient in [0.5, 2].
inline fracpow::DiscreteOperator random_coefficient_operator(int n, unsigned seed) {
  Vec faces = random_vec(n + 1, seed, 0.5, 2.0);
  return fracpow::assemble_1d_variable(faces);
}

}  // namespace testing_util

