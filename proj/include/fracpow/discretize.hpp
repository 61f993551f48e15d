#pragma once

#include <functional>
#include <utility>

#include "fracpow/core.hpp"

namespace fracpow {

struct Mesh1D {
  // x_0 = 0 < x_1 < ... < x_{N+1} = 1
  Vec nodes;

  explicit Mesh1D(Vec nodes);
  int interiorCount() const { return static_cast<int>(nodes.size()) - 2; }
  static Mesh1D uniform(int n);
};

enum class CoefficientSampling { Midpoint, CellAverage };

// Balance-method operator for -(a u')' on (0,1), Dirichlet ends, D = I.
DiscreteOperator assemble_1d_variable(const std::function<double(double)>& a, int n,
                                      CoefficientSampling mode = CoefficientSampling::Midpoint);
// a_{i-1/2}, i = 1..n+1 given directly.
DiscreteOperator assemble_1d_variable(const Vec& faceCoefficients);

DiscreteOperator assemble_2d_laplacian(int n);
DiscreteOperator assemble_1d_nonuniform(const Mesh1D& mesh);

std::pair<double, double> extreme_eigs_uniform(int n, int d);

// Generalized eigenvalues of (S, D), ascending. Dense; tridiagonal input takes
// the O(N^2) path.
Vec dense_eigenvalues(const DiscreteOperator& op);

inline constexpr int kDenseBoundsLimit = 2048;

}  // namespace fracpow
