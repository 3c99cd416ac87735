#pragma once

// Currying, mates, adjoints and the C*-structure predicates.

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hilbmult/multimap.hpp"

namespace hilbmult {

/// Λ_i(T), kept as a view on T: evaluating at x freezes slot i.
template <typename Scalar>
class CurriedMap {
 public:
  CurriedMap(MultiMap<Scalar> base, std::size_t slot) : base_(std::move(base)), slot_(slot) {
    if (slot_ >= base_.arity())
      throw DomainError("curry: slot " + std::to_string(slot_) + " out of range for arity " +
                        std::to_string(base_.arity()));
  }

  const MultiMap<Scalar>& base() const { return base_; }
  std::size_t slot() const { return slot_; }

  /// The map on the remaining slots. For an arity-1 base the result is the
  /// map ℂ → K whose single column is T(x).
  MultiMap<Scalar> evaluate(const VectorX<Scalar>& x) const {
    const auto& dom = base_.domain();
    if (static_cast<std::size_t>(x.size()) != dom[slot_].dim())
      throw ShapeError("curried evaluate: slot " + std::to_string(slot_) + " expects dim " +
                       std::to_string(dom[slot_].dim()));
    detail::Shape shape = base_.shape();
    VectorX<Scalar> data = detail::contract_axis(base_.coeffs(), shape, slot_ + 1, x.transpose());

    std::vector<HilbertSpace> rest;
    for (std::size_t j = 0; j < dom.size(); ++j)
      if (j != slot_) rest.push_back(dom[j]);
    if (rest.empty()) rest.push_back(scalar_space());
    return MultiMap<Scalar>(std::move(rest), base_.codomain(), std::move(data));
  }

 private:
  MultiMap<Scalar> base_;
  std::size_t slot_;
};

template <typename Scalar>
CurriedMap<Scalar> curry(const MultiMap<Scalar>& t, std::size_t slot) {
  return CurriedMap<Scalar>(t, slot);
}

template <typename Scalar>
MultiMap<Scalar> uncurry(const CurriedMap<Scalar>& c) {
  return c.base();
}

/// ‖Λ_i(T)‖ = ‖T‖: both are the sup over the same product of unit balls.
template <typename Scalar>
NormBracket curried_norm(const CurriedMap<Scalar>& c, const NormOptions& opts = {}) {
  return norm_bounds(c.base(), opts);
}

template <typename Scalar>
MultiMap<Scalar> adjoint(const MultiMap<Scalar>& t) {
  if (t.arity() != 1)
    throw UsageError("adjoint: arity " + std::to_string(t.arity()) + " map; use mate");
  MatrixX<Scalar> m = t.matrix().adjoint();
  return linear_map(m, t.codomain().label(), t.domain()[0].label());
}

/// T^(i): output axis exchanged with input axis i, every entry conjugated.
/// ⟨T(x), y⟩ = ⟨x_i, T^(i)(x̄_1, …, y, …, x̄_n)⟩ for all complex inputs.
template <typename Scalar>
MultiMap<Scalar> mate(const MultiMap<Scalar>& t, std::size_t slot) {
  if (slot >= t.arity())
    throw DomainError("mate: slot " + std::to_string(slot) + " out of range for arity " +
                      std::to_string(t.arity()));
  std::vector<std::size_t> axes(t.arity() + 1);
  for (std::size_t a = 0; a < axes.size(); ++a) axes[a] = a;
  std::swap(axes[0], axes[slot + 1]);

  std::vector<HilbertSpace> domain = t.domain();
  domain[slot] = t.codomain();
  VectorX<Scalar> data = detail::permute_axes(t.coeffs(), t.shape(), axes).conjugate();
  return MultiMap<Scalar>(std::move(domain), t.domain()[slot], std::move(data));
}

/// The (n+1)-linear form F(x_1, …, x_n, w) = Σ t[k; i] Π x_j,i_j w_k.
template <typename Scalar>
class MultiForm {
 public:
  MultiForm(std::vector<HilbertSpace> spaces, VectorX<Scalar> coeffs)
      : spaces_(std::move(spaces)), coeffs_(std::move(coeffs)) {}

  const std::vector<HilbertSpace>& spaces() const { return spaces_; }
  const VectorX<Scalar>& coeffs() const { return coeffs_; }

  detail::Shape shape() const {
    detail::Shape s;
    for (const auto& h : spaces_) s.push_back(h.dim());
    return s;
  }

  Scalar evaluate(std::span<const VectorX<Scalar>> args) const {
    if (args.size() != spaces_.size())
      throw ShapeError("form expects " + std::to_string(spaces_.size()) + " arguments");
    detail::Shape shape = this->shape();
    VectorX<Scalar> data = coeffs_;
    for (std::size_t a = args.size(); a-- > 0;) {
      if (static_cast<std::size_t>(args[a].size()) != shape[a])
        throw ShapeError("form: slot " + std::to_string(a) + " dimension mismatch");
      data = detail::contract_axis(data, shape, a, args[a].transpose());
    }
    return data[0];
  }

 private:
  std::vector<HilbertSpace> spaces_;
  VectorX<Scalar> coeffs_;
};

/// Form with form(x, ȳ) = ⟨T(x), y⟩: the output axis moved last, no conjugation.
template <typename Scalar>
MultiForm<Scalar> as_form(const MultiMap<Scalar>& t) {
  std::vector<std::size_t> axes;
  for (std::size_t a = 1; a <= t.arity(); ++a) axes.push_back(a);
  axes.push_back(0);
  std::vector<HilbertSpace> spaces = t.domain();
  spaces.push_back(t.codomain());
  return MultiForm<Scalar>(std::move(spaces), detail::permute_axes(t.coeffs(), t.shape(), axes));
}

namespace detail {

template <typename Scalar>
MatrixX<Scalar> square_matrix(const MultiMap<Scalar>& t, const char* what) {
  if (t.arity() != 1 || !t.domain()[0].compatible(t.codomain()))
    throw UsageError(std::string(what) + ": requires a square arity-1 map");
  return t.matrix();
}

}  // namespace detail

template <typename Scalar>
bool is_self_adjoint(const MultiMap<Scalar>& t, double tol = 1e-9) {
  const auto m = detail::square_matrix(t, "is_self_adjoint");
  return hermitian_violation(m).magnitude <= tol;
}

template <typename Scalar>
bool is_normal(const MultiMap<Scalar>& t, double tol = 1e-9) {
  const auto m = detail::square_matrix(t, "is_normal");
  return max_entry(m.adjoint() * m - m * m.adjoint()).magnitude <= tol;
}

template <typename Scalar>
bool is_positive(const MultiMap<Scalar>& t, double tol = 1e-9) {
  const auto m = detail::square_matrix(t, "is_positive");
  if (hermitian_violation(m).magnitude > tol) return false;
  return jacobi_eigh(m).eigenvalues.minCoeff() >= -tol;
}

}  // namespace hilbmult
