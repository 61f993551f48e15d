#include "fracpow/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace fracpow {

CsrMatrix::CsrMatrix(int n, std::vector<int> rowPtr, std::vector<int> colIdx, Vec values)
    : n_(n), rowPtr_(std::move(rowPtr)), colIdx_(std::move(colIdx)), values_(std::move(values)) {
  if (n_ < 0 || rowPtr_.size() != static_cast<std::size_t>(n_) + 1 ||
      colIdx_.size() != values_.size() ||
      static_cast<std::size_t>(rowPtr_.back()) != values_.size())
    throw DimensionError("malformed CSR arrays");
  for (int i = 0; i < n_; ++i) {
    for (int p = rowPtr_[i]; p < rowPtr_[i + 1]; ++p) {
      if (colIdx_[p] < 0 || colIdx_[p] >= n_)
        throw DimensionError("CSR column index out of range");
      if (p > rowPtr_[i] && colIdx_[p] <= colIdx_[p - 1])
        throw DimensionError("CSR columns must be sorted and unique within a row");
    }
  }
}

CsrMatrix CsrMatrix::fromTriplets(int n, std::vector<Triplet> entries) {
  for (const auto& t : entries)
    if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n)
      throw DimensionError("triplet index out of range");
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<int> rowPtr(n + 1, 0);
  std::vector<int> cols;
  Vec vals;
  cols.reserve(entries.size());
  vals.reserve(entries.size());
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& t = entries[k];
    if (!cols.empty() && k > 0 && entries[k - 1].row == t.row && entries[k - 1].col == t.col) {
      vals.back() += t.value;
      continue;
    }
    cols.push_back(t.col);
    vals.push_back(t.value);
    rowPtr[t.row + 1]++;
  }
  for (int i = 0; i < n; ++i) rowPtr[i + 1] += rowPtr[i];
  return CsrMatrix(n, std::move(rowPtr), std::move(cols), std::move(vals));
}

void CsrMatrix::multiply(const Vec& x, Vec& y) const {
  y.assign(n_, 0.0);
  for (int i = 0; i < n_; ++i) {
    double s = 0.0;
    for (int p = rowPtr_[i]; p < rowPtr_[i + 1]; ++p) s += values_[p] * x[colIdx_[p]];
    y[i] = s;
  }
}

Vec CsrMatrix::diagonal() const {
  Vec d(n_, 0.0);
  for (int i = 0; i < n_; ++i) d[i] = at(i, i);
  return d;
}

double CsrMatrix::at(int i, int j) const {
  auto b = colIdx_.begin() + rowPtr_[i];
  auto e = colIdx_.begin() + rowPtr_[i + 1];
  auto it = std::lower_bound(b, e, j);
  if (it == e || *it != j) return 0.0;
  return values_[it - colIdx_.begin()];
}

bool CsrMatrix::isTridiagonal() const {
  for (int i = 0; i < n_; ++i)
    for (int p = rowPtr_[i]; p < rowPtr_[i + 1]; ++p)
      if (std::abs(colIdx_[p] - i) > 1) return false;
  return true;
}

double CsrMatrix::asymmetry() const {
  double worst = 0.0;
  for (int i = 0; i < n_; ++i) {
    for (int p = rowPtr_[i]; p < rowPtr_[i + 1]; ++p) {
      const int j = colIdx_[p];
      const double a = values_[p];
      const double b = at(j, i);
      const double scale = std::max(std::abs(a), std::abs(b));
      if (scale > 0) worst = std::max(worst, std::abs(a - b) / scale);
    }
  }
  return worst;
}

const char* toString(BoundsSource s) {
  switch (s) {
    case BoundsSource::Analytic: return "analytic";
    case BoundsSource::Dense: return "dense";
    case BoundsSource::Gershgorin: return "gershgorin";
    case BoundsSource::User: return "user";
  }
  return "?";
}

DiscreteOperator::DiscreteOperator(CsrMatrix stiffness, Vec massDiag, double lambdaMin,
                                   double lambdaMax, BoundsSource source)
    : stiffness_(std::move(stiffness)),
      mass_(std::move(massDiag)),
      lambdaMin_(lambdaMin),
      lambdaMax_(lambdaMax),
      source_(source) {
  if (mass_.size() != static_cast<std::size_t>(stiffness_.size()))
    throw DimensionError("mass diagonal length differs from matrix dimension");
  for (double d : mass_)
    if (!(d > 0.0)) throw DomainError("mass diagonal entries must be positive");
  if (!(lambdaMin_ > 0.0) || !(lambdaMax_ >= lambdaMin_))
    throw DomainError("spectral bounds must satisfy 0 < lambdaMin <= lambdaMax");
  if (stiffness_.asymmetry() > 1e-14) throw DomainError("stiffness matrix is not symmetric");
  uniformMass_ = std::all_of(mass_.begin(), mass_.end(),
                             [&](double d) { return d == mass_.front(); });
  formulaLambdaMin_ = lambdaMin_;
}

DiscreteOperator DiscreteOperator::withBounds(double lambdaMin, double lambdaMax,
                                              BoundsSource source) const {
  DiscreteOperator copy = *this;
  if (!(lambdaMin > 0.0) || !(lambdaMax >= lambdaMin))
    throw DomainError("spectral bounds must satisfy 0 < lambdaMin <= lambdaMax");
  copy.lambdaMin_ = lambdaMin;
  copy.lambdaMax_ = lambdaMax;
  copy.source_ = source;
  return copy;
}

static void checkLength(const DiscreteOperator& op, const Vec& x) {
  if (x.size() != static_cast<std::size_t>(op.dimension()))
    throw DimensionError("vector length " + std::to_string(x.size()) +
                         " does not match operator dimension " +
                         std::to_string(op.dimension()));
}

Vec stiffnessProduct(const DiscreteOperator& op, const Vec& x) {
  checkLength(op, x);
  Vec y;
  op.stiffness().multiply(x, y);
  return y;
}

Vec matvec(const DiscreteOperator& op, const Vec& x) {
  Vec y = stiffnessProduct(op, x);
  const Vec& d = op.massDiag();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] /= d[i];
  return y;
}

double weighted_dot(const DiscreteOperator& op, const Vec& x, const Vec& y) {
  checkLength(op, x);
  checkLength(op, y);
  const Vec& d = op.massDiag();
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += d[i] * x[i] * y[i];
  return s;
}

double weighted_norm(const DiscreteOperator& op, const Vec& x) {
  return std::sqrt(weighted_dot(op, x, x));
}

const char* toString(RationalKind k) {
  switch (k) {
    case RationalKind::Quadrature: return "quadrature";
    case RationalKind::BestUniform: return "best-uniform";
    case RationalKind::Pade: return "pade";
    case RationalKind::Generic: return "generic";
  }
  return "?";
}

void validate(const PartialFractionRational& r) {
  if (!(r.matrixScale > 0.0)) throw PoleError("matrixScale must be positive");
  for (std::size_t i = 0; i < r.terms.size(); ++i) {
    const auto& t = r.terms[i];
    if (!std::isfinite(t.pole) || !std::isfinite(t.residue))
      throw PoleError("non-finite residue or pole");
    if (!(t.pole < 0.0)) {
      std::ostringstream os;
      os << "pole " << i << " = " << t.pole << " is not negative";
      throw PoleError(os.str());
    }
    if (i > 0) {
      const double prev = r.terms[i - 1].pole;
      if (std::abs(prev - t.pole) <= kPoleMergeTol * std::max(std::abs(prev), std::abs(t.pole)))
        throw PoleError("coincident poles at " + std::to_string(t.pole));
      if (!(t.pole < prev)) throw PoleError("poles are not strictly decreasing");
    }
  }
  const bool positiveResidues =
      r.kind == RationalKind::Quadrature || r.kind == RationalKind::BestUniform;
  if (positiveResidues) {
    for (const auto& t : r.terms)
      if (!(t.residue > 0.0)) throw PoleError("residue sign violates the expected pattern");
    if (r.c0 < 0.0) throw PoleError("negative constant term");
  }
  if (r.kind == RationalKind::BestUniform && !(r.c0 > 0.0))
    throw PoleError("best-uniform form requires c0 > 0");
}

PartialFractionRational make_rational(PartialFractionRational r) {
  std::sort(r.terms.begin(), r.terms.end(),
            [](const PoleTerm& a, const PoleTerm& b) { return a.pole > b.pole; });
  validate(r);
  return r;
}

double eval_rational(const PartialFractionRational& r, double z) {
  const double sz = r.matrixScale * z;
  double s = r.c0;
  for (const auto& t : r.terms) {
    const double gap = sz - t.pole;
    if (gap == 0.0) throw PoleError("evaluation at a pole");
    s += t.residue / gap;
  }
  return r.prefactor * s;
}

double eval_product_form(double b, const Vec& zeros, const Vec& poles, double z) {
  double v = b;
  for (double p : poles) {
    if (z == p) throw PoleError("evaluation at a pole");
    v /= (z - p);
  }
  for (double q : zeros) v *= (z - q);
  return v;
}

PartialFractionRational from_product_form(double b, const Vec& zeros, const Vec& poles,
                                          double alpha) {
  if (zeros.size() > poles.size())
    throw DomainError("product form must be proper (#zeros <= #poles)");
  PartialFractionRational r;
  r.alpha = alpha;
  r.c0 = zeros.size() == poles.size() ? b : 0.0;
  for (std::size_t i = 0; i < poles.size(); ++i) {
    double num = b;
    for (double q : zeros) num *= (poles[i] - q);
    for (std::size_t j = 0; j < poles.size(); ++j)
      if (j != i) num /= (poles[i] - poles[j]);
    r.terms.push_back({num, poles[i]});
  }
  return make_rational(std::move(r));
}

double eval_barycentric(const BarycentricRational& b, double z) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < b.support.size(); ++j) {
    const double dz = z - b.support[j];
    if (dz == 0.0) return b.values[j];
    const double c = b.weights[j] / dz;
    num += c * b.values[j];
    den += c;
  }
  return num / den;
}

}  // namespace fracpow
