#include "hilbmult/cli/codec.hpp"

#include <vector>

namespace hilbmult::cli {

namespace {

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

std::size_t decode_dim(const Json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 1)
    throw PayloadError(where + ": expected a positive integer");
  return j.get<std::size_t>();
}

}  // namespace

Json parse_document(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    std::string msg = e.what();
    if (const auto pos = msg.find("] "); pos != std::string::npos) msg = msg.substr(pos + 2);
    // nlohmann already prefixes its own position; keep only the reason.
    if (msg.rfind("parse error", 0) == 0)
      if (const auto pos = msg.find(": "); pos != std::string::npos) msg = msg.substr(pos + 2);
    throw ParseError(line, col, msg);
  }
}

Json encode_complex(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex decode_complex(const Json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw PayloadError(where + ": expected a complex number [re, im] or a real number");
}

Json encode_vector(const VectorX<Complex>& v) {
  Json out = Json::array();
  for (const auto& z : v) out.push_back(encode_complex(z));
  return out;
}

VectorX<Complex> decode_vector(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw PayloadError(where + ": expected a non-empty array");
  VectorX<Complex> v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = decode_complex(j[i], where + "[" + std::to_string(i) + "]");
  return v;
}

Json encode_matrix(const MatrixX<Complex>& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(encode_complex(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

MatrixX<Complex> decode_matrix(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw PayloadError(where + ": expected a non-empty array of rows");
  std::vector<VectorX<Complex>> rows;
  for (std::size_t r = 0; r < j.size(); ++r)
    rows.push_back(decode_vector(j[r], where + "[" + std::to_string(r) + "]"));
  const auto cols = rows.front().size();
  MatrixX<Complex> m(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols)
      throw PayloadError(where + "[" + std::to_string(r) + "]: row has " +
                         std::to_string(rows[r].size()) + " entries, expected " +
                         std::to_string(cols));
    m.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
  }
  return m;
}

Json encode_poly(const MultiPolyXcd& p) {
  Json terms = Json::array();
  for (const auto& t : p.terms()) {
    Json term;
    term["c"] = encode_complex(t.coeff);
    term["k"] = t.exps;
    terms.push_back(std::move(term));
  }
  Json out;
  out["nvars"] = p.nvars();
  out["terms"] = std::move(terms);
  return out;
}

MultiPolyXcd decode_poly(const Json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("nvars") || !j.contains("terms") || !j["terms"].is_array())
    throw PayloadError(where + ": expected {\"nvars\": n, \"terms\": [...]}");
  if (!j["nvars"].is_number_integer() || j["nvars"].get<long long>() < 0)
    throw PayloadError(where + ".nvars: expected a nonnegative integer");
  const auto nvars = j["nvars"].get<std::size_t>();
  std::vector<MultiPolyXcd::Term> terms;
  for (std::size_t i = 0; i < j["terms"].size(); ++i) {
    const auto& t = j["terms"][i];
    const std::string at = where + ".terms[" + std::to_string(i) + "]";
    if (!t.is_object() || !t.contains("c") || !t.contains("k") || !t["k"].is_array())
      throw PayloadError(at + ": expected {\"c\": [re, im], \"k\": [...]}");
    Exponents e;
    for (const auto& k : t["k"]) {
      if (!k.is_number_integer() || k.get<long long>() < 0)
        throw PayloadError(at + ".k: exponents must be nonnegative integers");
      e.push_back(k.get<unsigned>());
    }
    if (e.size() != nvars)
      throw PayloadError(at + ".k: has " + std::to_string(e.size()) + " exponents, nvars is " +
                         std::to_string(nvars));
    terms.push_back({decode_complex(t["c"], at + ".c"), e});
  }
  return MultiPolyXcd(nvars, terms);
}

Json encode_multimap(const MultiMapXcd& t) {
  Json dom = Json::array();
  for (const auto& h : t.domain()) dom.push_back(h.dim());
  Json out;
  out["domain"] = std::move(dom);
  out["codomain"] = t.codomain().dim();
  out["coeffs"] = encode_vector(t.coeffs());
  return out;
}

MultiMapXcd decode_multimap(const Json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("domain") || !j.contains("codomain") || !j.contains("coeffs") ||
      !j["domain"].is_array() || j["domain"].empty())
    throw PayloadError(where + ": expected {\"domain\": [dims], \"codomain\": k, \"coeffs\": [...]}");
  std::vector<HilbertSpace> dom;
  std::size_t total = decode_dim(j["codomain"], where + ".codomain");
  for (std::size_t i = 0; i < j["domain"].size(); ++i) {
    const auto d = decode_dim(j["domain"][i], where + ".domain[" + std::to_string(i) + "]");
    dom.emplace_back(d, "H" + std::to_string(i + 1));
    total *= d;
  }
  const auto coeffs = decode_vector(j["coeffs"], where + ".coeffs");
  if (static_cast<std::size_t>(coeffs.size()) != total)
    throw PayloadError(where + ".coeffs: has " + std::to_string(coeffs.size()) +
                       " entries, signature needs " + std::to_string(total));
  return MultiMapXcd(std::move(dom), HilbertSpace(j["codomain"].get<std::size_t>(), "K"), coeffs);
}

Json encode_bracket(const NormBracket& b) {
  Json out;
  out["lower"] = b.lower;
  out["upper"] = b.upper;
  out["exact"] = b.exact;
  return out;
}

}  // namespace hilbmult::cli
