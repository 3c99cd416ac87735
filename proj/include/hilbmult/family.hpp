#pragma once

// Families {T_n} of n-ary maps on one space, parameterizing the polynomial
// calculus. A family always evaluates; it materializes a MultiMap only for
// arities where T_n is genuinely multilinear.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hilbmult/multimap.hpp"
#include "hilbmult/spectral.hpp"

namespace hilbmult {

template <typename Scalar>
struct TFamily {
  using Vector = VectorX<Scalar>;

  std::string name;
  HilbertSpace space;
  /// T_n(x_1, …, x_n) for any n ≥ 1.
  std::function<Vector(std::span<const Vector>)> evaluate;
  /// The coefficient tensor of T_n, or nullopt when T_n is not multilinear.
  std::function<std::optional<MultiMap<Scalar>>(std::size_t)> maker;
  /// τ_n(point, z_1..z_n): T_n acts pointwise in the frame coordinates.
  std::function<Scalar(std::size_t, std::span<const Scalar>)> kernel;
  /// Unitary whose columns are the frame in which `kernel` describes T_n.
  MatrixX<Scalar> frame;
  std::function<NormBracket(std::size_t, const NormOptions&)> norm;

  Vector operator()(std::span<const Vector> xs) const { return evaluate(xs); }
};

using TFamilyXcd = TFamily<std::complex<double>>;

/// Entrywise n-fold product in the standard basis: t[k; i…] = δ(k = i_1 = … = i_n).
template <typename Scalar = std::complex<double>>
MultiMap<Scalar> hadamard_map(const HilbertSpace& h, std::size_t n) {
  if (n == 0) throw UsageError("hadamard_map: arity must be ≥ 1");
  const std::size_t d = h.dim();
  std::size_t total = d, diag_stride = 1;
  for (std::size_t j = 0; j < n; ++j) {
    total *= d;
    diag_stride = diag_stride * d + 1;
  }
  VectorX<Scalar> c = VectorX<Scalar>::Zero(static_cast<Eigen::Index>(total));
  for (std::size_t k = 0; k < d; ++k) c[static_cast<Eigen::Index>(k * diag_stride)] = Scalar(1);
  return MultiMap<Scalar>(std::vector<HilbertSpace>(n, h), h, std::move(c));
}

namespace detail {

template <typename Scalar>
void check_arity(std::span<const VectorX<Scalar>> xs, const HilbertSpace& h, const std::string& who) {
  if (xs.empty()) throw UsageError(who + ": arity must be ≥ 1");
  for (std::size_t j = 0; j < xs.size(); ++j)
    if (static_cast<std::size_t>(xs[j].size()) != h.dim())
      throw ShapeError(who + ": argument " + std::to_string(j) + " has dim " +
                       std::to_string(xs[j].size()) + ", expected " + std::to_string(h.dim()));
}

}  // namespace detail

/// Standard-basis pointwise product family (the mult family for diagonal A).
template <typename Scalar = std::complex<double>>
TFamily<Scalar> family_hadamard(const HilbertSpace& h) {
  TFamily<Scalar> f{"hadamard", h, {}, {}, {}, {}, {}};
  f.evaluate = [h](std::span<const VectorX<Scalar>> xs) {
    detail::check_arity(xs, h, "hadamard");
    VectorX<Scalar> out = xs[0];
    for (std::size_t j = 1; j < xs.size(); ++j) out = out.cwiseProduct(xs[j]);
    return out;
  };
  f.maker = [h](std::size_t n) -> std::optional<MultiMap<Scalar>> { return hadamard_map<Scalar>(h, n); };
  f.kernel = [](std::size_t, std::span<const Scalar> zs) {
    Scalar p(1);
    for (const auto& z : zs) p *= z;
    return p;
  };
  const auto d = static_cast<Eigen::Index>(h.dim());
  f.frame = MatrixX<Scalar>::Identity(d, d);
  f.norm = [h](std::size_t n, const NormOptions& opts) {
    return norm_bounds(hadamard_map<Scalar>(h, n), opts);
  };
  return f;
}

/// U ∘ T_n ∘ (U*, …, U*) for unitary U.
template <typename Scalar>
TFamily<Scalar> family_conjugate(const TFamily<Scalar>& fam, const MultiMap<Scalar>& u) {
  if (u.arity() != 1 || u.domain()[0].dim() != fam.space.dim() ||
      u.codomain().dim() != fam.space.dim())
    throw UsageError("family_conjugate: U must be an arity-1 map on the family's space");
  const MatrixX<Scalar> um = u.matrix();
  const auto n = um.rows();
  const auto bad = max_entry(um.adjoint() * um - MatrixX<Scalar>::Identity(n, n));
  if (bad.magnitude > 1e-9)
    throw DomainError("family_conjugate: U is not unitary, U*U - I " + describe(bad));

  const MatrixX<Scalar> ustar = um.adjoint();
  const auto u_map = linear_map(um, fam.space.label(), fam.space.label());
  const auto ustar_map = linear_map(ustar, fam.space.label(), fam.space.label());

  TFamily<Scalar> out = fam;
  out.evaluate = [inner = fam.evaluate, um, ustar](std::span<const VectorX<Scalar>> xs) {
    std::vector<VectorX<Scalar>> ys;
    ys.reserve(xs.size());
    for (const auto& x : xs) ys.push_back(ustar * x);
    return VectorX<Scalar>(um * inner(ys));
  };
  out.maker = [inner = fam.maker, u_map, ustar_map](std::size_t arity) -> std::optional<MultiMap<Scalar>> {
    auto t = inner(arity);
    if (!t) return std::nullopt;
    const std::vector<MultiMap<Scalar>> pre(arity, ustar_map);
    return compose(u_map, {compose(*t, std::span<const MultiMap<Scalar>>(pre))});
  };
  out.frame = um * fam.frame;
  // Norm is unitarily invariant, so the inner family's bracket carries over.
  return out;
}

/// Pointwise product taken in the eigenbasis of the context operator, which
/// makes polynomial compatibility exact for every Hermitian A.
template <typename Scalar>
TFamily<Scalar> family_mult(const SpectralDecomposition<Scalar>& d) {
  auto f = family_conjugate(family_hadamard<Scalar>(d.space),
                            linear_map(d.basis, d.space.label(), d.space.label()));
  f.name = "mult";
  return f;
}

/// T_n(x_1, …, x_n) = x_1 + … + x_n. Multilinear only for n = 1.
template <typename Scalar = std::complex<double>>
TFamily<Scalar> family_add(const HilbertSpace& h) {
  TFamily<Scalar> f{"add", h, {}, {}, {}, {}, {}};
  f.evaluate = [h](std::span<const VectorX<Scalar>> xs) {
    detail::check_arity(xs, h, "add");
    VectorX<Scalar> out = xs[0];
    for (std::size_t j = 1; j < xs.size(); ++j) out += xs[j];
    return out;
  };
  f.maker = [h](std::size_t n) -> std::optional<MultiMap<Scalar>> {
    if (n == 1) return identity_map<Scalar>(h);
    return std::nullopt;
  };
  f.kernel = [](std::size_t, std::span<const Scalar> zs) {
    Scalar s(0);
    for (const auto& z : zs) s += z;
    return s;
  };
  const auto d = static_cast<Eigen::Index>(h.dim());
  f.frame = MatrixX<Scalar>::Identity(d, d);
  f.norm = [](std::size_t n, const NormOptions&) {
    const auto v = static_cast<double>(n);
    return NormBracket{v, v, true};
  };
  return f;
}

/// Largest deviation of frame*·T_n(frame·z_1, …) from the pointwise kernel,
/// over random frame-coordinate inputs.
template <typename Scalar>
double locality_residual(const TFamily<Scalar>& fam, std::size_t n, std::size_t trials,
                         std::uint64_t seed) {
  if (!fam.kernel) throw UsageError("locality_residual: family has no kernel");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  const auto d = static_cast<Eigen::Index>(fam.space.dim());
  double worst = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<VectorX<Scalar>> coords(n, VectorX<Scalar>(d)), xs;
    for (auto& c : coords)
      for (auto& z : c) z = Scalar(gauss(rng), gauss(rng));
    for (const auto& c : coords) xs.push_back(fam.frame * c);
    const VectorX<Scalar> out = fam.frame.adjoint() * fam.evaluate(xs);
    for (Eigen::Index p = 0; p < d; ++p) {
      std::vector<Scalar> zs;
      for (const auto& c : coords) zs.push_back(c[p]);
      const Scalar tau = fam.kernel(static_cast<std::size_t>(p), zs);
      worst = std::max(worst, static_cast<double>(std::abs(out[p] - tau)));
    }
  }
  return worst;
}

}  // namespace hilbmult
