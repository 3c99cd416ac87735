#pragma once

// Midpoint discretization of L²([a, b]) and multiplication operators on it.

#include <cmath>
#include <functional>
#include <type_traits>
#include <string>
#include <vector>

#include "hilbmult/calculus.hpp"

namespace hilbmult {

class Grid {
 public:
  Grid(double a, double b, std::size_t npoints) : a_(a), b_(b), n_(npoints) {
    if (!(a < b)) throw DomainError("make_grid: requires a < b");
    if (npoints == 0) throw DomainError("make_grid: npoints must be ≥ 1");
  }

  double a() const { return a_; }
  double b() const { return b_; }
  std::size_t npoints() const { return n_; }
  double weight() const { return (b_ - a_) / static_cast<double>(n_); }
  double node(std::size_t i) const { return a_ + (static_cast<double>(i) + 0.5) * weight(); }

  std::vector<double> nodes() const {
    std::vector<double> x(n_);
    for (std::size_t i = 0; i < n_; ++i) x[i] = node(i);
    return x;
  }

  HilbertSpace space() const { return HilbertSpace(n_, "L2grid"); }

  friend bool operator==(const Grid& l, const Grid& r) {
    return l.a_ == r.a_ && l.b_ == r.b_ && l.n_ == r.n_;
  }

 private:
  double a_, b_;
  std::size_t n_;
};

inline Grid make_grid(double a, double b, std::size_t npoints) { return Grid(a, b, npoints); }

template <typename Scalar = std::complex<double>>
struct GridFunction {
  Grid grid;
  VectorX<Scalar> values;

  /// Discrete L² norm: sqrt(weight · Σ|g_i|²).
  double norm() const { return std::sqrt(grid.weight()) * static_cast<double>(values.norm()); }
};

using GridFunctionXcd = GridFunction<std::complex<double>>;

/// Multiplier function sampled at a node; must be real for self-adjointness.
template <typename Scalar>
using Multiplier = std::function<Scalar(double)>;

namespace detail {

template <typename Scalar>
VectorX<Scalar> sample_real(const Grid& g, const std::type_identity_t<Multiplier<Scalar>>& me) {
  VectorX<Scalar> v(static_cast<Eigen::Index>(g.npoints()));
  for (std::size_t i = 0; i < g.npoints(); ++i) {
    const Scalar m = me(g.node(i));
    if (std::imag(m) != 0)
      throw DomainError("mult_operator: multiplier is complex at node " + std::to_string(i) +
                        " (x = " + std::to_string(g.node(i)) + ")");
    v[static_cast<Eigen::Index>(i)] = m;
  }
  return v;
}

}  // namespace detail

template <typename Scalar = std::complex<double>>
GridFunction<Scalar> sample(const Grid& g, const std::type_identity_t<std::function<Scalar(double)>>& f) {
  VectorX<Scalar> v(static_cast<Eigen::Index>(g.npoints()));
  for (std::size_t i = 0; i < g.npoints(); ++i) v[static_cast<Eigen::Index>(i)] = f(g.node(i));
  return {g, v};
}

/// (A f)(x_i) = me(x_i) f(x_i).
template <typename Scalar = std::complex<double>>
MultiMap<Scalar> mult_operator(const Grid& g, const std::type_identity_t<Multiplier<Scalar>>& me) {
  const VectorX<Scalar> d = detail::sample_real<Scalar>(g, me);
  return linear_map(MatrixX<Scalar>(d.asDiagonal()), "L2grid", "L2grid");
}

/// Pointwise P(me(x), …, me(x)) · g_1(x) ⋯ g_n(x).
template <typename Scalar = std::complex<double>>
GridFunction<Scalar> grid_calculus(const Grid& g, const std::type_identity_t<Multiplier<Scalar>>& me,
                                   const MultiPoly<Scalar>& p,
                                   const std::vector<GridFunction<Scalar>>& gs) {
  if (gs.size() != p.nvars())
    throw ShapeError("grid_calculus: polynomial has " + std::to_string(p.nvars()) +
                     " variables, got " + std::to_string(gs.size()) + " functions");
  for (std::size_t j = 0; j < gs.size(); ++j)
    if (!(gs[j].grid == g) || static_cast<std::size_t>(gs[j].values.size()) != g.npoints())
      throw ShapeError("grid_calculus: function " + std::to_string(j) + " lives on another grid");

  const VectorX<Scalar> m = detail::sample_real<Scalar>(g, me);
  VectorX<Scalar> out(static_cast<Eigen::Index>(g.npoints()));
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    Scalar v = poly_eval_diagonal(p, m[i]);
    for (const auto& gj : gs) v *= gj.values[i];
    out[i] = v;
  }
  return {g, out};
}

/// Generic route: calculus_map with the multiplication operator and its
/// eigenbasis product family.
template <typename Scalar = std::complex<double>>
GridFunction<Scalar> grid_calculus_generic(const Grid& g, const std::type_identity_t<Multiplier<Scalar>>& me,
                                           const MultiPoly<Scalar>& p,
                                           const std::vector<GridFunction<Scalar>>& gs) {
  const auto a = mult_operator(g, me);
  const auto ctx = make_mult_context(a);
  std::vector<VectorX<Scalar>> xs;
  for (const auto& gj : gs) xs.push_back(gj.values);
  return {g, apply(calculus_map(ctx, p), xs)};
}

}  // namespace hilbmult
