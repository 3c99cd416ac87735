#pragma once

// Index bookkeeping for dense row-major coefficient tensors.

#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace hilbmult::detail {

using Shape = std::vector<std::size_t>;

inline std::size_t product(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

inline Shape strides(const Shape& shape) {
  Shape out(shape.size(), 1);
  for (std::size_t i = shape.size(); i-- > 1;) out[i - 1] = out[i] * shape[i];
  return out;
}

template <typename Scalar>
using FlatTensor = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Replaces axis `axis` of size m.cols() by an axis of size m.rows():
/// out[.., b, ..] = Σ_a m(b, a) · in[.., a, ..]. Updates `shape` in place.
template <typename Scalar, typename Derived>
FlatTensor<Scalar> contract_axis(const FlatTensor<Scalar>& data, Shape& shape, std::size_t axis,
                                 const Eigen::MatrixBase<Derived>& m) {
  const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> mat = m;
  const std::size_t outer = product(std::span(shape).first(axis));
  const std::size_t inner = product(std::span(shape).subspan(axis + 1));
  const std::size_t old_dim = shape[axis];
  const std::size_t new_dim = static_cast<std::size_t>(mat.rows());
  eigen_assert(static_cast<std::size_t>(mat.cols()) == old_dim);

  FlatTensor<Scalar> out(static_cast<Eigen::Index>(outer * new_dim * inner));
  for (std::size_t o = 0; o < outer; ++o) {
    Eigen::Map<const RowMatrix<Scalar>> in_block(data.data() + o * old_dim * inner,
                                                 static_cast<Eigen::Index>(old_dim),
                                                 static_cast<Eigen::Index>(inner));
    Eigen::Map<RowMatrix<Scalar>> out_block(out.data() + o * new_dim * inner,
                                            static_cast<Eigen::Index>(new_dim),
                                            static_cast<Eigen::Index>(inner));
    out_block.noalias() = mat * in_block;
  }
  shape[axis] = new_dim;
  return out;
}

/// Reorders axes so that new axis a is old axis perm[a].
template <typename Scalar>
FlatTensor<Scalar> permute_axes(const FlatTensor<Scalar>& data, const Shape& shape,
                                const std::vector<std::size_t>& perm) {
  const std::size_t rank = shape.size();
  const Shape old_strides = strides(shape);
  Shape new_shape(rank);
  Shape step(rank);
  for (std::size_t a = 0; a < rank; ++a) {
    new_shape[a] = shape[perm[a]];
    step[a] = old_strides[perm[a]];
  }

  FlatTensor<Scalar> out(data.size());
  Shape idx(rank, 0);
  std::size_t src = 0;
  for (Eigen::Index dst = 0; dst < out.size(); ++dst) {
    out[dst] = data[static_cast<Eigen::Index>(src)];
    for (std::size_t a = rank; a-- > 0;) {
      if (++idx[a] < new_shape[a]) {
        src += step[a];
        break;
      }
      src -= step[a] * (new_shape[a] - 1);
      idx[a] = 0;
    }
  }
  return out;
}

}  // namespace hilbmult::detail
