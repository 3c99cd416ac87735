#pragma once

// Bounded multilinear maps H_1 × … × H_n → K as dense coefficient tensors,
// and the multicategory operations on them.

#include <algorithm>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "hilbmult/errors.hpp"
#include "hilbmult/jacobi.hpp"
#include "hilbmult/space.hpp"
#include "hilbmult/tensor_index.hpp"

namespace hilbmult {

/// Multilinear map with coefficients t[k; i_1, …, i_n], stored row-major with
/// the output axis first. Arity is always ≥ 1.
template <typename Scalar>
class MultiMap {
  static_assert(Eigen::NumTraits<Scalar>::IsComplex, "MultiMap requires a complex scalar");

 public:
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  using Coeffs = VectorX<Scalar>;
  using MatrixView = Eigen::Map<const detail::RowMatrix<Scalar>>;

  MultiMap(std::vector<HilbertSpace> domain, HilbertSpace codomain, Coeffs coeffs)
      : domain_(std::move(domain)), codomain_(std::move(codomain)), coeffs_(std::move(coeffs)) {
    if (domain_.empty()) throw UsageError("arity-0 multimorphisms are not modeled");
    if (static_cast<std::size_t>(coeffs_.size()) != codomain_.dim() * input_size())
      throw ShapeError("coefficient tensor has " + std::to_string(coeffs_.size()) +
                       " entries, shape requires " +
                       std::to_string(codomain_.dim() * input_size()));
  }

  /// The zero map with the given signature.
  MultiMap(std::vector<HilbertSpace> domain, HilbertSpace codomain)
      : MultiMap(domain, codomain,
                 Coeffs::Zero(static_cast<Eigen::Index>(codomain.dim() * dims_product(domain)))) {}

  std::size_t arity() const { return domain_.size(); }
  const std::vector<HilbertSpace>& domain() const { return domain_; }
  const HilbertSpace& codomain() const { return codomain_; }
  const Coeffs& coeffs() const { return coeffs_; }

  std::size_t input_size() const { return dims_product(domain_); }

  /// (codomain.dim, domain[0].dim, …, domain[n-1].dim)
  detail::Shape shape() const {
    detail::Shape s{codomain_.dim()};
    for (const auto& h : domain_) s.push_back(h.dim());
    return s;
  }

  /// Output axis against all inputs fused: a codim × input_size matrix.
  MatrixView matrix() const {
    return MatrixView(coeffs_.data(), static_cast<Eigen::Index>(codomain_.dim()),
                      static_cast<Eigen::Index>(input_size()));
  }

  Scalar coeff(std::size_t k, std::span<const std::size_t> idx) const {
    std::size_t flat = k;
    for (std::size_t j = 0; j < domain_.size(); ++j) flat = flat * domain_[j].dim() + idx[j];
    return coeffs_[static_cast<Eigen::Index>(flat)];
  }

  bool same_signature(const MultiMap& other) const {
    if (arity() != other.arity() || !codomain_.compatible(other.codomain_)) return false;
    for (std::size_t j = 0; j < arity(); ++j)
      if (!domain_[j].compatible(other.domain_[j])) return false;
    return true;
  }

  friend bool operator==(const MultiMap& a, const MultiMap& b) {
    return a.same_signature(b) && a.coeffs_ == b.coeffs_;
  }

 private:
  static std::size_t dims_product(const std::vector<HilbertSpace>& spaces) {
    std::size_t p = 1;
    for (const auto& h : spaces) p *= h.dim();
    return p;
  }

  std::vector<HilbertSpace> domain_;
  HilbertSpace codomain_;
  Coeffs coeffs_;
};

using MultiMapXcd = MultiMap<std::complex<double>>;

/// Arity-1 map with coefficient matrix m (rows = codomain).
template <typename Derived>
MultiMap<typename Derived::Scalar> linear_map(const Eigen::MatrixBase<Derived>& m,
                                              std::string domain_label = "H",
                                              std::string codomain_label = "K") {
  using Scalar = typename Derived::Scalar;
  const detail::RowMatrix<Scalar> rm = m;
  VectorX<Scalar> flat = Eigen::Map<const VectorX<Scalar>>(rm.data(), rm.size());
  return MultiMap<Scalar>({HilbertSpace(static_cast<std::size_t>(m.cols()), std::move(domain_label))},
                          HilbertSpace(static_cast<std::size_t>(m.rows()), std::move(codomain_label)),
                          std::move(flat));
}

/// Coefficient matrix of an arity-1 map.
template <typename Scalar>
MatrixX<Scalar> as_matrix(const MultiMap<Scalar>& t) {
  if (t.arity() != 1) throw UsageError("as_matrix: arity " + std::to_string(t.arity()) + " map");
  return t.matrix();
}

template <typename Scalar = std::complex<double>>
MultiMap<Scalar> identity_map(const HilbertSpace& h) {
  const auto n = static_cast<Eigen::Index>(h.dim());
  MatrixX<Scalar> eye = MatrixX<Scalar>::Identity(n, n);
  auto flat = Eigen::Map<const VectorX<Scalar>>(eye.data(), eye.size());
  return MultiMap<Scalar>({h}, h, flat);
}

namespace detail {

template <typename Scalar>
VectorX<Scalar> contract_inputs(const MultiMap<Scalar>& t, std::span<const VectorX<Scalar>> xs) {
  if (xs.size() != t.arity())
    throw ShapeError("apply: expected " + std::to_string(t.arity()) + " arguments, got " +
                     std::to_string(xs.size()));
  for (std::size_t j = 0; j < xs.size(); ++j)
    if (static_cast<std::size_t>(xs[j].size()) != t.domain()[j].dim())
      throw ShapeError("apply: slot " + std::to_string(j) + " expects dim " +
                       std::to_string(t.domain()[j].dim()) + ", got " +
                       std::to_string(xs[j].size()));

  VectorX<Scalar> acc = t.coeffs();
  auto prefix = static_cast<Eigen::Index>(acc.size());
  for (std::size_t j = xs.size(); j-- > 0;) {
    const auto d = xs[j].size();
    prefix /= d;
    Eigen::Map<const detail::RowMatrix<Scalar>> view(acc.data(), prefix, d);
    VectorX<Scalar> next = view * xs[j];
    acc = std::move(next);
  }
  return acc;
}

/// Function object rather than a function template, so argument-dependent
/// lookup never pulls in std::apply for std::vector or std::span arguments.
struct ApplyFn {
  template <typename Scalar>
  VectorX<Scalar> operator()(const MultiMap<Scalar>& t,
                             std::span<const VectorX<std::type_identity_t<Scalar>>> xs) const {
    return contract_inputs(t, xs);
  }
  template <typename Scalar>
  VectorX<Scalar> operator()(const MultiMap<Scalar>& t,
                             std::initializer_list<VectorX<Scalar>> xs) const {
    return contract_inputs(t, std::span<const VectorX<Scalar>>(xs.begin(), xs.size()));
  }
};

}  // namespace detail

/// Full contraction of the coefficient tensor against the inputs.
inline constexpr detail::ApplyFn apply{};

/// S ∘ (T_1, …, T_m): input axis j of S is contracted against the output axis
/// of T_j, and the inputs are flattened in block order.
template <typename Scalar>
MultiMap<Scalar> compose(const MultiMap<Scalar>& s,
                         std::span<const MultiMap<std::type_identity_t<Scalar>>> ts) {
  if (ts.size() != s.arity())
    throw ShapeError("compose: outer map has arity " + std::to_string(s.arity()) + ", got " +
                     std::to_string(ts.size()) + " inner maps");
  for (std::size_t j = 0; j < ts.size(); ++j)
    if (!ts[j].codomain().compatible(s.domain()[j]))
      throw ShapeError("compose: inner map " + std::to_string(j) + " has codomain dim " +
                       std::to_string(ts[j].codomain().dim()) + ", slot expects " +
                       std::to_string(s.domain()[j].dim()));

  detail::Shape shape = s.shape();
  VectorX<Scalar> data = s.coeffs();
  for (std::size_t j = ts.size(); j-- > 0;)
    data = detail::contract_axis(data, shape, j + 1, ts[j].matrix().transpose());

  std::vector<HilbertSpace> domain;
  for (const auto& t : ts) domain.insert(domain.end(), t.domain().begin(), t.domain().end());
  return MultiMap<Scalar>(std::move(domain), s.codomain(), std::move(data));
}

template <typename Scalar>
MultiMap<Scalar> compose(const MultiMap<Scalar>& s, std::initializer_list<MultiMap<Scalar>> ts) {
  return compose(s, std::span<const MultiMap<Scalar>>(ts.begin(), ts.size()));
}

/// T ⊗ T′ with domain concatenated and codomain indices fused left-major.
template <typename Scalar>
MultiMap<Scalar> tensor_map(const MultiMap<Scalar>& t, const MultiMap<Scalar>& u) {
  const auto m1 = t.matrix();
  const auto m2 = u.matrix();
  detail::RowMatrix<Scalar> out(m1.rows() * m2.rows(), m1.cols() * m2.cols());
  for (Eigen::Index k = 0; k < m1.rows(); ++k)
    for (Eigen::Index p = 0; p < m1.cols(); ++p)
      out.block(k * m2.rows(), p * m2.cols(), m2.rows(), m2.cols()) = m1(k, p) * m2;

  std::vector<HilbertSpace> domain = t.domain();
  domain.insert(domain.end(), u.domain().begin(), u.domain().end());
  VectorX<Scalar> flat = Eigen::Map<const VectorX<Scalar>>(out.data(), out.size());
  return MultiMap<Scalar>(std::move(domain), tensor_space(t.codomain(), u.codomain()),
                          std::move(flat));
}

inline void check_permutation(std::span<const std::size_t> pi, std::size_t n) {
  if (pi.size() != n)
    throw DomainError("permutation has length " + std::to_string(pi.size()) + ", arity is " +
                      std::to_string(n));
  std::vector<bool> seen(n, false);
  for (auto p : pi) {
    if (p >= n || seen[p]) throw DomainError("permutation is not a bijection");
    seen[p] = true;
  }
}

/// T^π with T^π(x_0, …, x_{n-1}) = T(x_{π(0)}, …, x_{π(n-1)}); π is 0-based.
template <typename Scalar>
MultiMap<Scalar> permute(const MultiMap<Scalar>& t, std::span<const std::size_t> pi) {
  const std::size_t n = t.arity();
  check_permutation(pi, n);
  // Slot s of T reads slot π(s) of T^π, so new input axis π(s) is old axis s.
  std::vector<std::size_t> axes(n + 1, 0);
  std::vector<HilbertSpace> domain(t.domain());
  for (std::size_t s = 0; s < n; ++s) {
    axes[pi[s] + 1] = s + 1;
    domain[pi[s]] = t.domain()[s];
  }
  return MultiMap<Scalar>(std::move(domain), t.codomain(),
                          detail::permute_axes(t.coeffs(), t.shape(), axes));
}

template <typename Scalar>
MultiMap<Scalar> permute(const MultiMap<Scalar>& t, std::initializer_list<std::size_t> pi) {
  return permute(t, std::span<const std::size_t>(pi.begin(), pi.size()));
}

/// α·T + β·U entrywise.
template <typename Scalar>
MultiMap<Scalar> linear_combination(Scalar alpha, const MultiMap<Scalar>& t, Scalar beta,
                                    const MultiMap<Scalar>& u) {
  if (!t.same_signature(u)) throw ShapeError("linear_combination: signatures differ");
  return MultiMap<Scalar>(t.domain(), t.codomain(), alpha * t.coeffs() + beta * u.coeffs());
}

template <typename Scalar>
MultiMap<Scalar> operator+(const MultiMap<Scalar>& t, const MultiMap<Scalar>& u) {
  return linear_combination(Scalar(1), t, Scalar(1), u);
}

template <typename Scalar>
MultiMap<Scalar> operator-(const MultiMap<Scalar>& t, const MultiMap<Scalar>& u) {
  return linear_combination(Scalar(1), t, Scalar(-1), u);
}

template <typename Scalar>
MultiMap<Scalar> operator*(Scalar alpha, const MultiMap<Scalar>& t) {
  return MultiMap<Scalar>(t.domain(), t.codomain(), alpha * t.coeffs());
}

/// Largest entrywise difference; shapes must agree.
template <typename Scalar>
double max_abs_diff(const MultiMap<Scalar>& t, const MultiMap<Scalar>& u) {
  if (!t.same_signature(u)) throw ShapeError("max_abs_diff: signatures differ");
  if (t.coeffs().size() == 0) return 0.0;
  return static_cast<double>((t.coeffs() - u.coeffs()).cwiseAbs().maxCoeff());
}

// ---------------------------------------------------------------------------
// Operator norms

/// σ_max of an arity-1 map.
template <typename Scalar>
double norm_exact_linear(const MultiMap<Scalar>& t) {
  if (t.arity() != 1)
    throw UsageError("norm_exact_linear: arity " + std::to_string(t.arity()) +
                     " map; use norm_bounds");
  return spectral_norm(t.matrix());
}

/// Certified enclosure of the multilinear operator norm.
struct NormBracket {
  double lower = 0.0;
  double upper = 0.0;
  bool exact = false;

  bool contains(double v, double slack = 0.0) const {
    return lower - slack <= v && v <= upper + slack;
  }
  bool intersects(const NormBracket& o, double slack = 0.0) const {
    return lower <= o.upper + slack && o.lower <= upper + slack;
  }
};

struct NormOptions {
  std::size_t restarts = 8;
  std::size_t iters = 200;
  double tol = 1e-10;
  std::uint64_t seed = 0;
};

namespace detail {

template <typename Scalar>
VectorX<Scalar> random_unit(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  VectorX<Scalar> v(static_cast<Eigen::Index>(d));
  for (auto& z : v) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    z = Scalar(re, im);
  }
  return v / v.norm();
}

/// g_a = Σ t[k; …a…] conj(y_k) Π_{s≠j} x_s: the form with slot j left open.
template <typename Scalar>
VectorX<Scalar> open_slot(const MultiMap<Scalar>& t, const std::vector<VectorX<Scalar>>& xs,
                          const VectorX<Scalar>& y, std::size_t j) {
  Shape shape = t.shape();
  VectorX<Scalar> data = contract_axis(t.coeffs(), shape, 0, y.adjoint());
  for (std::size_t s = xs.size(); s-- > 0;)
    if (s != j) data = contract_axis(data, shape, s + 1, xs[s].transpose());
  return data;
}

/// Spectral norm of the matricization with `axis` as rows.
template <typename Scalar>
double matricization_norm(const MultiMap<Scalar>& t, std::size_t axis) {
  const Shape shape = t.shape();
  std::vector<std::size_t> order{axis};
  for (std::size_t a = 0; a < shape.size(); ++a)
    if (a != axis) order.push_back(a);
  const VectorX<Scalar> moved = permute_axes(t.coeffs(), shape, order);
  const auto rows = static_cast<Eigen::Index>(shape[axis]);
  Eigen::Map<const RowMatrix<Scalar>> m(moved.data(), rows, moved.size() / rows);
  return spectral_norm(m);
}

}  // namespace detail

/// Upper bound: min over all n+1 matricizations of their spectral norm.
template <typename Scalar>
double norm_upper_bound(const MultiMap<Scalar>& t) {
  double best = detail::matricization_norm(t, 0);
  for (std::size_t a = 1; a <= t.arity(); ++a)
    best = std::min(best, detail::matricization_norm(t, a));
  return best;
}

/// Lower bound by alternating maximization of |⟨T(x_1..x_n), y⟩| over unit
/// vectors, one slot at a time (each slot update is the normalized conjugate
/// of the open-slot contraction). Restarts are drawn sequentially from the seed.
template <typename Scalar>
double norm_lower_bound(const MultiMap<Scalar>& t, const NormOptions& opts = {}) {
  std::mt19937_64 rng(opts.seed);
  double best = 0.0;
  for (std::size_t r = 0; r < opts.restarts; ++r) {
    std::vector<VectorX<Scalar>> xs;
    for (const auto& h : t.domain()) xs.push_back(detail::random_unit<Scalar>(h.dim(), rng));

    VectorX<Scalar> image = apply(t, std::span<const VectorX<Scalar>>(xs));
    double value = image.norm();
    for (std::size_t it = 0; it < opts.iters; ++it) {
      const VectorX<Scalar> y = value > 0.0 ? VectorX<Scalar>(image / value)
                                            : detail::random_unit<Scalar>(t.codomain().dim(), rng);
      for (std::size_t j = 0; j < xs.size(); ++j) {
        const VectorX<Scalar> g = detail::open_slot(t, xs, y, j);
        const double gn = g.norm();
        if (gn > 0.0) xs[j] = g.conjugate() / gn;
      }
      image = apply(t, std::span<const VectorX<Scalar>>(xs));
      const double next = image.norm();
      const double gain = next - value;
      value = std::max(value, next);
      if (gain < opts.tol) break;
    }
    best = std::max(best, value);
  }
  return best;
}

/// Two-sided bracket lower ≤ ‖T‖ ≤ upper; exact (both σ_max) for arity 1.
template <typename Scalar>
NormBracket norm_bounds(const MultiMap<Scalar>& t, const NormOptions& opts = {}) {
  if (t.arity() == 1) {
    const double s = norm_exact_linear(t);
    return {s, s, true};
  }
  NormBracket b;
  b.upper = norm_upper_bound(t);
  b.lower = norm_lower_bound(t, opts);
  if (b.lower > b.upper) {
    if (b.lower - b.upper > 1e-12 * std::max(1.0, b.upper))
      throw NumericError("norm_bounds: lower bound exceeds upper bound");
    b.lower = b.upper;
  }
  return b;
}

// ---------------------------------------------------------------------------

/// Bilinear (H1⊗H2) × (H1⊗H2) → H1 with (u⊗φ)•(v⊗ψ) = (Σ_a φ_a ψ_a)(Σ_b v_b)·u.
/// The H2 pairing is unconjugated; the second H1 factor is summed so the
/// map stays linear in both arguments.
template <typename Scalar = std::complex<double>>
MultiMap<Scalar> partial_contraction(const HilbertSpace& h1, const HilbertSpace& h2) {
  const HilbertSpace fused = tensor_space(h1, h2);
  const std::size_t n1 = h1.dim(), n2 = h2.dim(), nf = fused.dim();
  VectorX<Scalar> c = VectorX<Scalar>::Zero(static_cast<Eigen::Index>(n1 * nf * nf));
  for (std::size_t k = 0; k < n1; ++k)
    for (std::size_t a = 0; a < n2; ++a)
      for (std::size_t j = 0; j < n1; ++j) {
        const std::size_t left = k * n2 + a;
        const std::size_t right = j * n2 + a;
        c[static_cast<Eigen::Index>((k * nf + left) * nf + right)] = Scalar(1);
      }
  return MultiMap<Scalar>({fused, fused}, h1, std::move(c));
}

}  // namespace hilbmult
