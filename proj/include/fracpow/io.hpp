#pragma once

#include <string>

#include "fracpow/core.hpp"

namespace fracpow {

// Coefficient text format: "alpha k c0 prefactor matrixScale" then k lines
// "c_i d_i", 17 significant digits.
std::string format_rational(const PartialFractionRational& r);
PartialFractionRational parse_rational(const std::string& text,
                                       RationalKind kind = RationalKind::Generic);
void write_rational(const std::string& path, const PartialFractionRational& r);
PartialFractionRational read_rational(const std::string& path,
                                      RationalKind kind = RationalKind::Generic);

// Matrix Market coordinate (symmetric, lower triangle) for S, plus a sidecar
// "<path>.meta" holding the mass diagonal and spectral bounds.
void write_matrix_market(const std::string& path, const DiscreteOperator& op);
DiscreteOperator read_matrix_market(const std::string& path);
// Stiffness only; mass defaults to ones, bounds from a dense solve when small.
CsrMatrix read_matrix_market_stiffness(const std::string& path);

void write_vector(const std::string& path, const Vec& v);
Vec read_vector(const std::string& path);

std::string format_double(double v);

}  // namespace fracpow
