#pragma once

#include <cstddef>
#include <string>
#include <utility>

#include "hilbmult/errors.hpp"

namespace hilbmult {

/// Finite-dimensional complex Hilbert space. Only the dimension matters for
/// compatibility; the label is documentation.
class HilbertSpace {
 public:
  explicit HilbertSpace(std::size_t dim, std::string label = {})
      : dim_(dim), label_(std::move(label)) {
    if (dim_ == 0) throw DomainError("dimension must be ≥ 1");
  }

  std::size_t dim() const { return dim_; }
  const std::string& label() const { return label_; }

  bool compatible(const HilbertSpace& other) const { return dim_ == other.dim_; }

 private:
  std::size_t dim_;
  std::string label_;
};

inline HilbertSpace make_space(std::size_t dim, std::string label = {}) {
  return HilbertSpace(dim, std::move(label));
}

/// The monoidal unit ℂ.
inline HilbertSpace scalar_space() { return HilbertSpace(1, "C"); }

/// H ⊗ K, with indices fused row-major (left factor major).
inline HilbertSpace tensor_space(const HilbertSpace& left, const HilbertSpace& right) {
  return HilbertSpace(left.dim() * right.dim(), left.label() + "⊗" + right.label());
}

}  // namespace hilbmult
