#pragma once

#include "lml/types.hpp"

#include <iosfwd>
#include <string>

namespace lml {

/// Writes v as a fixed-width (25-char) field with 17 significant digits,
/// enough for a bit-exact double round-trip.
void write_real(std::ostream& out, double v);

/// Locale-independent strict parse of a whole token.
double parse_real(const std::string& token);
long long parse_integer(const std::string& token);

/// Rows of space-separated fixed-width reals, one matrix row per line.
void write_matrix(std::ostream& out, const Matrix& M);

/// Reads rows*cols whitespace-separated reals.
Matrix read_matrix(std::istream& in, Index rows, Index cols);

}  // namespace lml
