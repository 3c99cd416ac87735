#pragma once

// JSON encoding of complex numbers, vectors, matrices, polynomials, maps and
// norm brackets. Complex numbers are [re, im]; matrices are row-major nested
// arrays. Decoders also accept bare real numbers where a complex is expected.

#include <complex>
#include <string>

#include <json.hpp>

#include "hilbmult/errors.hpp"
#include "hilbmult/multimap.hpp"
#include "hilbmult/poly.hpp"

namespace hilbmult::cli {

using Json = nlohmann::ordered_json;
using Complex = std::complex<double>;

/// Malformed JSON text; carries a 1-based line and column.
class ParseError : public UsageError {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : UsageError("parse error at line " + std::to_string(line) + ", column " +
                   std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

/// Well-formed JSON with the wrong shape for the payload kind.
class PayloadError : public UsageError {
 public:
  using UsageError::UsageError;
};

Json parse_document(const std::string& text);

Json encode_complex(Complex z);
Complex decode_complex(const Json& j, const std::string& where);

Json encode_vector(const VectorX<Complex>& v);
VectorX<Complex> decode_vector(const Json& j, const std::string& where);

Json encode_matrix(const MatrixX<Complex>& m);
MatrixX<Complex> decode_matrix(const Json& j, const std::string& where);

Json encode_poly(const MultiPolyXcd& p);
MultiPolyXcd decode_poly(const Json& j, const std::string& where);

Json encode_multimap(const MultiMapXcd& t);
MultiMapXcd decode_multimap(const Json& j, const std::string& where);

Json encode_bracket(const NormBracket& b);

}  // namespace hilbmult::cli
