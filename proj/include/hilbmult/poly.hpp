#pragma once

// Sparse multivariate complex polynomials: the multimorphisms of the
// polynomial multicategory, composed by substitution.

#include <algorithm>
#include <complex>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "hilbmult/errors.hpp"

namespace hilbmult {

using Exponents = std::vector<unsigned>;

/// Graded lexicographic order: total degree first, then lexicographic.
struct GradedLex {
  bool operator()(const Exponents& a, const Exponents& b) const {
    const auto da = std::accumulate(a.begin(), a.end(), 0u);
    const auto db = std::accumulate(b.begin(), b.end(), 0u);
    if (da != db) return da < db;
    return a < b;
  }
};

template <typename Scalar>
class MultiPoly {
  static_assert(Eigen::NumTraits<Scalar>::IsComplex, "MultiPoly requires a complex scalar");

 public:
  struct Term {
    Scalar coeff;
    Exponents exps;
  };

  explicit MultiPoly(std::size_t nvars = 0) : nvars_(nvars) {}

  /// Terms are merged, sorted graded-lex, and exact zeros dropped.
  MultiPoly(std::size_t nvars, const std::vector<Term>& terms) : nvars_(nvars) {
    std::map<Exponents, Scalar, GradedLex> acc;
    for (const auto& t : terms) {
      if (t.exps.size() != nvars_)
        throw ShapeError("monomial has " + std::to_string(t.exps.size()) +
                         " exponents, polynomial has " + std::to_string(nvars_) + " variables");
      acc[t.exps] += t.coeff;
    }
    assign(acc);
  }

  static MultiPoly constant(std::size_t nvars, Scalar c) {
    return MultiPoly(nvars, {{c, Exponents(nvars, 0)}});
  }

  /// z_i among nvars variables.
  static MultiPoly variable(std::size_t nvars, std::size_t i) {
    Exponents e(nvars, 0);
    e.at(i) = 1;
    return MultiPoly(nvars, {{Scalar(1), e}});
  }

  /// The identity multimorphism P(z) = z.
  static MultiPoly identity() { return variable(1, 0); }

  /// Univariate Σ c_k z^k from a dense coefficient list.
  static MultiPoly univariate(std::span<const Scalar> coeffs) {
    std::vector<Term> terms;
    for (std::size_t k = 0; k < coeffs.size(); ++k)
      terms.push_back({coeffs[k], Exponents{static_cast<unsigned>(k)}});
    return MultiPoly(1, terms);
  }

  std::size_t nvars() const { return nvars_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  unsigned degree() const {
    unsigned d = 0;
    for (const auto& t : terms_) d = std::max(d, std::accumulate(t.exps.begin(), t.exps.end(), 0u));
    return d;
  }

  /// Dense coefficients c_0 … c_d of a polynomial in ≤ 1 variable.
  std::vector<Scalar> dense_univariate() const {
    if (nvars_ > 1) throw UsageError("dense_univariate: polynomial has " +
                                     std::to_string(nvars_) + " variables");
    std::vector<Scalar> c(degree() + 1, Scalar(0));
    for (const auto& t : terms_) c[nvars_ == 0 ? 0 : t.exps[0]] += t.coeff;
    return c;
  }

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    if (a.nvars_ != b.nvars_ || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (a.terms_[i].coeff != b.terms_[i].coeff || a.terms_[i].exps != b.terms_[i].exps)
        return false;
    return true;
  }

  friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
    a.require_same_vars(b);
    std::vector<Term> all = a.terms_;
    all.insert(all.end(), b.terms_.begin(), b.terms_.end());
    return MultiPoly(a.nvars_, all);
  }

  friend MultiPoly operator*(Scalar c, const MultiPoly& p) {
    std::vector<Term> scaled = p.terms_;
    for (auto& t : scaled) t.coeff *= c;
    return MultiPoly(p.nvars_, scaled);
  }

  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    a.require_same_vars(b);
    std::map<Exponents, Scalar, GradedLex> acc;
    for (const auto& s : a.terms_)
      for (const auto& t : b.terms_) {
        Exponents e(a.nvars_);
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = s.exps[i] + t.exps[i];
        acc[e] += s.coeff * t.coeff;
      }
    MultiPoly out(a.nvars_);
    out.assign(acc);
    return out;
  }

 private:
  void require_same_vars(const MultiPoly& o) const {
    if (nvars_ != o.nvars_) throw ShapeError("polynomials have different variable counts");
  }

  void assign(const std::map<Exponents, Scalar, GradedLex>& acc) {
    terms_.clear();
    for (const auto& [e, c] : acc)
      if (c != Scalar(0)) terms_.push_back({c, e});
  }

  std::size_t nvars_;
  std::vector<Term> terms_;
};

using MultiPolyXcd = MultiPoly<std::complex<double>>;

/// Σ c_k Π z_j^{k_j}, powers by repeated multiplication.
template <typename Scalar>
Scalar poly_eval(const MultiPoly<Scalar>& p, std::span<const std::type_identity_t<Scalar>> zs) {
  if (zs.size() != p.nvars())
    throw ShapeError("poly_eval: expected " + std::to_string(p.nvars()) + " values, got " +
                     std::to_string(zs.size()));
  Scalar sum(0);
  for (const auto& t : p.terms()) {
    Scalar m = t.coeff;
    for (std::size_t j = 0; j < zs.size(); ++j)
      for (unsigned e = 0; e < t.exps[j]; ++e) m *= zs[j];
    sum += m;
  }
  return sum;
}

template <typename Scalar>
Scalar poly_eval(const MultiPoly<Scalar>& p, std::initializer_list<Scalar> zs) {
  return poly_eval(p, std::span<const Scalar>(zs.begin(), zs.size()));
}

/// P(z, z, …, z): the restriction of P to the diagonal.
template <typename Scalar>
Scalar poly_eval_diagonal(const MultiPoly<Scalar>& p, Scalar z) {
  const std::vector<Scalar> zs(p.nvars(), z);
  return poly_eval(p, std::span<const Scalar>(zs));
}

/// Re-embeds p into `total` variables starting at `offset`.
template <typename Scalar>
MultiPoly<Scalar> poly_shift(const MultiPoly<Scalar>& p, std::size_t total, std::size_t offset) {
  std::vector<typename MultiPoly<Scalar>::Term> terms;
  for (const auto& t : p.terms()) {
    Exponents e(total, 0);
    std::copy(t.exps.begin(), t.exps.end(), e.begin() + static_cast<std::ptrdiff_t>(offset));
    terms.push_back({t.coeff, e});
  }
  return MultiPoly<Scalar>(total, terms);
}

/// P ∘ (Q_1, …, Q_m) by substitution; variables of the Q_j are concatenated.
template <typename Scalar>
MultiPoly<Scalar> poly_compose(const MultiPoly<Scalar>& p,
                               std::span<const MultiPoly<std::type_identity_t<Scalar>>> qs) {
  if (qs.size() != p.nvars())
    throw ShapeError("poly_compose: outer polynomial has " + std::to_string(p.nvars()) +
                     " variables, got " + std::to_string(qs.size()) + " substitutions");
  std::size_t total = 0;
  for (const auto& q : qs) total += q.nvars();

  std::vector<std::vector<MultiPoly<Scalar>>> powers(qs.size());
  std::size_t offset = 0;
  for (std::size_t j = 0; j < qs.size(); ++j) {
    powers[j].push_back(MultiPoly<Scalar>::constant(total, Scalar(1)));
    powers[j].push_back(poly_shift(qs[j], total, offset));
    offset += qs[j].nvars();
  }

  MultiPoly<Scalar> out(total);
  for (const auto& t : p.terms()) {
    MultiPoly<Scalar> m = MultiPoly<Scalar>::constant(total, t.coeff);
    for (std::size_t j = 0; j < qs.size(); ++j) {
      while (powers[j].size() <= t.exps[j]) powers[j].push_back(powers[j].back() * powers[j][1]);
      if (t.exps[j] > 0) m = m * powers[j][t.exps[j]];
    }
    out = out + m;
  }
  return out;
}

template <typename Scalar>
MultiPoly<Scalar> poly_compose(const MultiPoly<Scalar>& p,
                               std::initializer_list<MultiPoly<Scalar>> qs) {
  return poly_compose(p, std::span<const MultiPoly<Scalar>>(qs.begin(), qs.size()));
}

/// P(z_{π(0)}, …, z_{π(n-1)}); π is 0-based.
template <typename Scalar>
MultiPoly<Scalar> poly_permute(const MultiPoly<Scalar>& p, std::span<const std::size_t> pi) {
  if (pi.size() != p.nvars()) throw DomainError("poly_permute: permutation length mismatch");
  std::vector<bool> seen(pi.size(), false);
  for (auto v : pi) {
    if (v >= pi.size() || seen[v]) throw DomainError("poly_permute: not a permutation");
    seen[v] = true;
  }
  std::vector<typename MultiPoly<Scalar>::Term> terms;
  for (const auto& t : p.terms()) {
    Exponents e(p.nvars(), 0);
    for (std::size_t s = 0; s < pi.size(); ++s) e.at(pi[s]) += t.exps[s];
    terms.push_back({t.coeff, e});
  }
  return MultiPoly<Scalar>(p.nvars(), terms);
}

}  // namespace hilbmult
