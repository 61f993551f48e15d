#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracpow {

using Vec = std::vector<double>;

// Error hierarchy. Every failure surfaced by the library derives from Error.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionError : Error {
  using Error::Error;
};
struct DomainError : Error {
  using Error::Error;
};
struct PoleError : Error {
  using Error::Error;
};
struct TableRejected : Error {
  using Error::Error;
};
struct SolverError : Error {
  SolverError(const std::string& what, double residual)
      : Error(what), achievedResidual(residual) {}
  double achievedResidual;
};
struct BlowUpError : Error {
  BlowUpError(const std::string& what, std::size_t step)
      : Error(what), step(step) {}
  std::size_t step;
};

struct Triplet {
  int row;
  int col;
  double value;
};

// Compressed-row sparse matrix with sorted column indices.
class CsrMatrix {
 public:
  CsrMatrix() = default;
  CsrMatrix(int n, std::vector<int> rowPtr, std::vector<int> colIdx, Vec values);

  // Duplicates are summed; explicit zeros are kept.
  static CsrMatrix fromTriplets(int n, std::vector<Triplet> entries);

  int size() const { return n_; }
  std::size_t nonZeros() const { return values_.size(); }
  const std::vector<int>& rowPtr() const { return rowPtr_; }
  const std::vector<int>& colIdx() const { return colIdx_; }
  const Vec& values() const { return values_; }

  void multiply(const Vec& x, Vec& y) const;
  Vec diagonal() const;
  double at(int i, int j) const;
  bool isTridiagonal() const;
  // Largest |a_ij - a_ji| relative to max(|a_ij|, |a_ji|), 0 for a symmetric matrix.
  double asymmetry() const;

 private:
  int n_ = 0;
  std::vector<int> rowPtr_{0};
  std::vector<int> colIdx_;
  Vec values_;
};

enum class BoundsSource { Analytic, Dense, Gershgorin, User };

const char* toString(BoundsSource s);

// A = D^{-1} S with S sparse symmetric and D a positive diagonal.
class DiscreteOperator {
 public:
  DiscreteOperator(CsrMatrix stiffness, Vec massDiag, double lambdaMin,
                   double lambdaMax, BoundsSource source = BoundsSource::User);

  int dimension() const { return stiffness_.size(); }
  const CsrMatrix& stiffness() const { return stiffness_; }
  const Vec& massDiag() const { return mass_; }
  double lambdaMin() const { return lambdaMin_; }
  double lambdaMax() const { return lambdaMax_; }
  BoundsSource boundsSource() const { return source_; }
  bool uniformMass() const { return uniformMass_; }

  // Closed-form 4*pi^2*min(a) lower bound, kept for diagnostics.
  double formulaLambdaMin() const { return formulaLambdaMin_; }
  bool formulaBoundViolated() const { return formulaViolated_; }
  void recordFormulaBound(double value, bool violated) {
    formulaLambdaMin_ = value;
    formulaViolated_ = violated;
  }

  // Same matrices, new bounds.
  DiscreteOperator withBounds(double lambdaMin, double lambdaMax,
                              BoundsSource source) const;

 private:
  CsrMatrix stiffness_;
  Vec mass_;
  double lambdaMin_;
  double lambdaMax_;
  BoundsSource source_;
  bool uniformMass_ = false;
  double formulaLambdaMin_ = 0.0;
  bool formulaViolated_ = false;
};

Vec matvec(const DiscreteOperator& op, const Vec& x);
// S x only (no mass scaling).
Vec stiffnessProduct(const DiscreteOperator& op, const Vec& x);
double weighted_dot(const DiscreteOperator& op, const Vec& x, const Vec& y);
double weighted_norm(const DiscreteOperator& op, const Vec& x);

// Sign pattern a rational is expected to satisfy.
enum class RationalKind {
  Quadrature,    // residues > 0, c0 >= 0
  BestUniform,   // residues > 0, c0 > 0
  Pade,          // poles < 0 only
  Generic        // poles < 0 only
};

const char* toString(RationalKind k);

struct PoleTerm {
  double residue;
  double pole;
};

// prefactor * (c0 + sum residue_i / (matrixScale * z - pole_i))
struct PartialFractionRational {
  double alpha = 0.5;
  double c0 = 0.0;
  std::vector<PoleTerm> terms;
  double prefactor = 1.0;
  double matrixScale = 1.0;
  RationalKind kind = RationalKind::Generic;
  std::string method;

  std::size_t size() const { return terms.size(); }
};

// relative to the larger pole magnitude; sigma rules put legitimate poles below 1e-20
inline constexpr double kPoleMergeTol = 1e-13;

// Sorts terms so poles strictly decrease, then checks negativity, distinctness
// and the sign pattern for r.kind. Throws PoleError.
PartialFractionRational make_rational(PartialFractionRational r);
void validate(const PartialFractionRational& r);

double eval_rational(const PartialFractionRational& r, double z);

// b * prod(z - zeros_j) / prod(z - poles_i), #zeros <= #poles.
double eval_product_form(double b, const Vec& zeros, const Vec& poles, double z);
PartialFractionRational from_product_form(double b, const Vec& zeros,
                                          const Vec& poles, double alpha = 0.5);

struct BarycentricRational {
  Vec support;
  Vec values;
  Vec weights;

  std::size_t size() const { return support.size(); }
  // Set when construction stopped before reaching the requested tolerance.
  bool converged = true;
  double sampleError = 0.0;
};

double eval_barycentric(const BarycentricRational& b, double z);

struct Spectrum {
  Vec eigenvalues;
  // Column-major N x N, D-orthonormal columns; empty when not requested.
  Vec eigenvectors;
  int dimension = 0;

  bool hasVectors() const { return !eigenvectors.empty(); }
  double vec(int row, int col) const {
    return eigenvectors[static_cast<std::size_t>(col) * dimension + row];
  }
};

}  // namespace fracpow
