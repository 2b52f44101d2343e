#include "lml/matrix_io.hpp"

#include "lml/errors.hpp"

#include <charconv>
#include <cstdio>
#include <iostream>

namespace lml {

void write_real(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%25.17g", v);
  out << buf;
}

double parse_real(const std::string& token) {
  double v = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError("not a number: '" + token + "'");
  }
  return v;
}

long long parse_integer(const std::string& token) {
  long long v = 0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError("not an integer: '" + token + "'");
  }
  return v;
}

void write_matrix(std::ostream& out, const Matrix& M) {
  for (Index i = 0; i < M.rows(); ++i) {
    for (Index j = 0; j < M.cols(); ++j) {
      if (j > 0) out << ' ';
      write_real(out, M(i, j));
    }
    out << '\n';
  }
}

Matrix read_matrix(std::istream& in, Index rows, Index cols) {
  Matrix M(rows, cols);
  std::string token;
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      if (!(in >> token)) {
        throw ParseError("matrix truncated at entry (" + std::to_string(i) +
                         ", " + std::to_string(j) + ")");
      }
      M(i, j) = parse_real(token);
    }
  }
  return M;
}

}  // namespace lml
