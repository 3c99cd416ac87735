#pragma once

// The polynomial calculus P ↦ Σ c_k T_n(A^{k_1}·, …, A^{k_n}·) and its
// validators: polynomial compatibility, functoriality, unitary covariance.

#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "hilbmult/family.hpp"
#include "hilbmult/random.hpp"
#include "hilbmult/spectral.hpp"

namespace hilbmult {

template <typename Scalar>
struct CalculusContext {
  MultiMap<Scalar> A;
  SpectralDecomposition<Scalar> decomp;
  TFamily<Scalar> family;
};

using CalculusContextXcd = CalculusContext<std::complex<double>>;

template <typename Scalar>
CalculusContext<Scalar> make_context(const MultiMap<Scalar>& a, TFamily<Scalar> family) {
  auto d = eigh(a);
  const double err = (d.reconstruct() - MatrixX<Scalar>(a.matrix())).cwiseAbs().maxCoeff();
  if (err > 1e-9) throw NumericError("make_context: decomposition residual " + std::to_string(err));
  if (family.space.dim() != a.codomain().dim())
    throw ShapeError("make_context: family lives on dim " + std::to_string(family.space.dim()) +
                     ", operator on dim " + std::to_string(a.codomain().dim()));
  return CalculusContext<Scalar>{a, std::move(d), std::move(family)};
}

/// Context with the eigenbasis pointwise-product family of A.
template <typename Scalar>
CalculusContext<Scalar> make_mult_context(const MultiMap<Scalar>& a) {
  auto d = eigh(a);
  auto fam = family_mult(d);
  return make_context(a, std::move(fam));
}

template <typename Scalar>
CalculusContext<Scalar> make_add_context(const MultiMap<Scalar>& a) {
  return make_context(a, family_add<Scalar>(a.codomain()));
}

/// Evaluation route: works for every family, multilinear or not.
template <typename Scalar>
VectorX<Scalar> calculus_apply(const CalculusContext<Scalar>& ctx, const MultiPoly<Scalar>& p,
                               std::span<const VectorX<std::type_identity_t<Scalar>>> xs) {
  const std::size_t n = p.nvars();
  if (n == 0) throw UsageError("calculus: polynomial must have at least one variable");
  if (xs.size() != n)
    throw ShapeError("calculus_apply: expected " + std::to_string(n) + " vectors, got " +
                     std::to_string(xs.size()));
  const auto dim = ctx.family.space.dim();
  for (std::size_t j = 0; j < n; ++j)
    if (static_cast<std::size_t>(xs[j].size()) != dim)
      throw ShapeError("calculus_apply: vector " + std::to_string(j) + " has dim " +
                       std::to_string(xs[j].size()) + ", expected " + std::to_string(dim));

  const MatrixX<Scalar> a = ctx.A.matrix();
  std::vector<std::vector<VectorX<Scalar>>> powers(n);
  for (std::size_t j = 0; j < n; ++j) powers[j].push_back(xs[j]);

  VectorX<Scalar> out = VectorX<Scalar>::Zero(static_cast<Eigen::Index>(dim));
  std::vector<VectorX<Scalar>> args(n);
  for (const auto& t : p.terms()) {
    for (std::size_t j = 0; j < n; ++j) {
      while (powers[j].size() <= t.exps[j]) powers[j].push_back(a * powers[j].back());
      args[j] = powers[j][t.exps[j]];
    }
    out += t.coeff * ctx.family.evaluate(args);
  }
  return out;
}

template <typename Scalar>
VectorX<Scalar> calculus_apply(const CalculusContext<Scalar>& ctx, const MultiPoly<Scalar>& p,
                               std::initializer_list<VectorX<Scalar>> xs) {
  return calculus_apply(ctx, p, std::span<const VectorX<Scalar>>(xs.begin(), xs.size()));
}

/// Materialized map, or nullopt when the family has no multilinear T_n.
template <typename Scalar>
std::optional<MultiMap<Scalar>> try_calculus_map(const CalculusContext<Scalar>& ctx,
                                                 const MultiPoly<Scalar>& p) {
  const std::size_t n = p.nvars();
  if (n == 0) throw UsageError("calculus: polynomial must have at least one variable");
  auto tn = ctx.family.maker(n);
  if (!tn) return std::nullopt;

  const auto& h = ctx.family.space;
  std::vector<MultiMap<Scalar>> powers{identity_map<Scalar>(h)};
  MultiMap<Scalar> out(std::vector<HilbertSpace>(n, h), h);
  std::vector<MultiMap<Scalar>> args;
  for (const auto& t : p.terms()) {
    args.clear();
    for (std::size_t j = 0; j < n; ++j) {
      while (powers.size() <= t.exps[j]) powers.push_back(compose(ctx.A, {powers.back()}));
      args.push_back(powers[t.exps[j]]);
    }
    out = out + t.coeff * compose(*tn, args);
  }
  return out;
}

template <typename Scalar>
MultiMap<Scalar> calculus_map(const CalculusContext<Scalar>& ctx, const MultiPoly<Scalar>& p) {
  auto m = try_calculus_map(ctx, p);
  if (!m)
    throw UsageError("calculus_map: family '" + ctx.family.name + "' is not multilinear at arity " +
                     std::to_string(p.nvars()) + "; use calculus_apply");
  return *m;
}

/// Outcome of a randomized law check.
struct CheckReport {
  std::string name;
  bool pass = true;
  double max_residual = 0.0;
  double tol = 0.0;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::optional<std::string> counterexample;

  void record(double residual, const std::function<std::string()>& describe_case) {
    if (residual > max_residual) max_residual = residual;
    if (residual > tol && !counterexample) counterexample = describe_case();
    pass = max_residual <= tol;
  }
};

namespace detail {

template <typename Scalar>
std::string format_vector(const VectorX<Scalar>& v) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << std::real(v[i]);
    if (std::imag(v[i]) != 0) os << (std::imag(v[i]) < 0 ? "-" : "+") << std::abs(std::imag(v[i])) << "i";
  }
  os << ")";
  return os.str();
}

template <typename Scalar>
std::string format_poly(const MultiPoly<Scalar>& p) {
  std::ostringstream os;
  os.precision(17);
  if (p.is_zero()) return "0";
  bool first = true;
  for (const auto& t : p.terms()) {
    if (!first) os << " + ";
    first = false;
    os << "(" << std::real(t.coeff);
    if (std::imag(t.coeff) != 0) os << (std::imag(t.coeff) < 0 ? "-" : "+") << std::abs(std::imag(t.coeff)) << "i";
    os << ")";
    for (std::size_t j = 0; j < t.exps.size(); ++j)
      if (t.exps[j]) os << "z" << j + 1 << (t.exps[j] > 1 ? "^" + std::to_string(t.exps[j]) : "");
  }
  return os.str();
}

template <typename Scalar>
double max_abs(const VectorX<Scalar>& v) {
  return v.size() ? static_cast<double>(v.cwiseAbs().maxCoeff()) : 0.0;
}

}  // namespace detail

/// Max entrywise gap between T_n(p_1(A)f_1, …) and (p_1⋯p_n)(A) T_n(f_1, …).
template <typename Scalar>
double compatibility_residual(const CalculusContext<Scalar>& ctx,
                              std::span<const MultiPoly<std::type_identity_t<Scalar>>> ps,
                              std::span<const VectorX<std::type_identity_t<Scalar>>> fs) {
  if (ps.size() != fs.size() || ps.empty())
    throw ShapeError("compatibility: need one polynomial per vector");
  const MatrixX<Scalar> a = ctx.A.matrix();
  std::vector<VectorX<Scalar>> lhs_args;
  MultiPoly<Scalar> prod = MultiPoly<Scalar>::constant(1, Scalar(1));
  for (std::size_t j = 0; j < ps.size(); ++j) {
    lhs_args.push_back(poly_of_matrix(a, ps[j]) * fs[j]);
    prod = prod * ps[j];
  }
  const VectorX<Scalar> lhs = ctx.family.evaluate(lhs_args);
  const VectorX<Scalar> rhs = poly_of_matrix(a, prod) * ctx.family.evaluate(fs);
  return detail::max_abs<Scalar>(lhs - rhs);
}

/// Explicit-instance form of the compatibility check.
template <typename Scalar>
CheckReport compatibility_check(const CalculusContext<Scalar>& ctx,
                                const std::vector<MultiPoly<Scalar>>& ps,
                                const std::vector<VectorX<Scalar>>& fs, double tol) {
  CheckReport r{"compatibility", true, 0.0, tol, 0, 1, std::nullopt};
  const double res = compatibility_residual(ctx, ps, fs);
  r.record(res, [&] {
    std::string s = "p = [";
    for (std::size_t j = 0; j < ps.size(); ++j) s += (j ? "; " : "") + detail::format_poly(ps[j]);
    s += "], f = [";
    for (std::size_t j = 0; j < fs.size(); ++j) s += (j ? "; " : "") + detail::format_vector(fs[j]);
    return s + "], residual " + std::to_string(res);
  });
  return r;
}

/// Random univariate p_j (degree ≤ 4, coefficients in [-1, 1]) and unit f_j.
template <typename Scalar>
CheckReport compatibility_check(const CalculusContext<Scalar>& ctx, std::size_t n,
                                std::size_t trials, double tol, std::uint64_t seed) {
  CheckReport r{"compatibility", true, 0.0, tol, seed, trials, std::nullopt};
  Sampler<Scalar> rng(seed);
  const auto dim = ctx.family.space.dim();
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<MultiPoly<Scalar>> ps;
    std::vector<VectorX<Scalar>> fs;
    for (std::size_t j = 0; j < n; ++j) {
      const auto deg = static_cast<unsigned>(rng.index(0, 4));
      std::vector<Scalar> c(deg + 1);
      for (auto& x : c) x = Scalar(rng.uniform(), rng.uniform());
      ps.push_back(MultiPoly<Scalar>::univariate(c));
      fs.push_back(rng.unit_vector(dim));
    }
    const double res = compatibility_residual(ctx, ps, fs);
    r.record(res, [&] {
      std::string s = "trial " + std::to_string(t) + ": p = [";
      for (std::size_t j = 0; j < ps.size(); ++j) s += (j ? "; " : "") + detail::format_poly(ps[j]);
      return s + "], residual " + std::to_string(res);
    });
  }
  return r;
}

/// F(P ∘ (Q_j)) against F(P) ∘ (F(Q_j)) on random unit tuples. Uses the
/// materialized maps when the family provides them.
template <typename Scalar>
CheckReport functoriality_check(const CalculusContext<Scalar>& ctx, const MultiPoly<Scalar>& p,
                                const std::vector<MultiPoly<Scalar>>& qs, std::size_t trials,
                                double tol, std::uint64_t seed) {
  if (qs.size() != p.nvars())
    throw ShapeError("functoriality_check: " + std::to_string(p.nvars()) + " substitutions needed");
  CheckReport r{"functoriality", true, 0.0, tol, seed, trials, std::nullopt};
  const auto composite = poly_compose(p, std::span<const MultiPoly<Scalar>>(qs));

  std::optional<MultiMap<Scalar>> lhs_map = try_calculus_map(ctx, composite), rhs_map;
  if (lhs_map) {
    auto outer = try_calculus_map(ctx, p);
    std::vector<MultiMap<Scalar>> inner;
    for (const auto& q : qs) {
      auto m = try_calculus_map(ctx, q);
      if (!m) break;
      inner.push_back(std::move(*m));
    }
    if (outer && inner.size() == qs.size())
      rhs_map = compose(*outer, inner);
    else
      lhs_map.reset();
  }

  Sampler<Scalar> rng(seed);
  const auto dim = ctx.family.space.dim();
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<VectorX<Scalar>> xs;
    for (std::size_t j = 0; j < composite.nvars(); ++j) xs.push_back(rng.unit_vector(dim));

    VectorX<Scalar> lhs, rhs;
    if (lhs_map) {
      lhs = apply(*lhs_map, xs);
      rhs = apply(*rhs_map, xs);
    } else {
      lhs = calculus_apply(ctx, composite, xs);
      std::vector<VectorX<Scalar>> inner;
      std::size_t offset = 0;
      for (const auto& q : qs) {
        inner.push_back(calculus_apply(
            ctx, q, std::span<const VectorX<Scalar>>(xs).subspan(offset, q.nvars())));
        offset += q.nvars();
      }
      rhs = calculus_apply(ctx, p, inner);
    }
    const double res = detail::max_abs<Scalar>(lhs - rhs);
    r.record(res, [&] {
      return "trial " + std::to_string(t) + ": F(P∘Q) = " + detail::format_vector(lhs) +
             ", F(P)∘F(Q) = " + detail::format_vector(rhs);
    });
  }
  return r;
}

/// U·F_{A,T}(P)(U*x_1, …) against F_{UAU*, UTU*}(P)(x_1, …).
template <typename Scalar>
CheckReport covariance_check(const CalculusContext<Scalar>& ctx, const MultiMap<Scalar>& u,
                             const MultiPoly<Scalar>& p, std::size_t trials, double tol,
                             std::uint64_t seed) {
  auto fam2 = family_conjugate(ctx.family, u);  // validates U
  const MatrixX<Scalar> um = u.matrix();
  const MatrixX<Scalar> a2 = um * ctx.A.matrix() * um.adjoint();
  const MatrixX<Scalar> a2h = (a2 + a2.adjoint()) / Scalar(2);
  const auto ctx2 = make_context(
      linear_map(a2h, ctx.A.domain()[0].label(), ctx.A.codomain().label()), std::move(fam2));

  CheckReport r{"covariance", true, 0.0, tol, seed, trials, std::nullopt};
  const auto m1 = try_calculus_map(ctx, p);
  const auto m2 = try_calculus_map(ctx2, p);

  Sampler<Scalar> rng(seed);
  const auto dim = ctx.family.space.dim();
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<VectorX<Scalar>> xs, pulled;
    for (std::size_t j = 0; j < p.nvars(); ++j) {
      xs.push_back(rng.unit_vector(dim));
      pulled.push_back(um.adjoint() * xs.back());
    }
    const VectorX<Scalar> lhs =
        um * (m1 ? apply(*m1, pulled) : calculus_apply(ctx, p, pulled));
    const VectorX<Scalar> rhs =
        m2 ? apply(*m2, xs) : calculus_apply(ctx2, p, xs);
    const double res = detail::max_abs<Scalar>(lhs - rhs);
    r.record(res, [&] {
      return "trial " + std::to_string(t) + ": residual " + std::to_string(res);
    });
  }
  return r;
}

}  // namespace hilbmult
