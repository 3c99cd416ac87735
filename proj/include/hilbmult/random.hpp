#pragma once

// Seeded generators for vectors, maps, Hermitian/normal/unitary matrices and
// polynomials. Every check threads one 64-bit seed through a Sampler.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/QR>

#include "hilbmult/multimap.hpp"
#include "hilbmult/poly.hpp"

namespace hilbmult {

template <typename Scalar = std::complex<double>>
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& engine() { return rng_; }

  double uniform(double lo = -1.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }

  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }

  Scalar scalar(bool real = false) {
    const double g = gauss_(rng_);
    return real ? Scalar(g) : Scalar(g, gauss_(rng_));
  }

  VectorX<Scalar> vector(std::size_t d, bool real = false) {
    VectorX<Scalar> v(static_cast<Eigen::Index>(d));
    for (auto& x : v) x = scalar(real);
    return v;
  }

  VectorX<Scalar> unit_vector(std::size_t d, bool real = false) {
    VectorX<Scalar> v = vector(d, real);
    return v / v.norm();
  }

  MatrixX<Scalar> matrix(std::size_t rows, std::size_t cols, bool real = false) {
    MatrixX<Scalar> m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (auto& x : m.reshaped()) x = scalar(real);
    return m;
  }

  MultiMap<Scalar> map(const std::vector<std::size_t>& domain_dims, std::size_t codim,
                       bool real = false) {
    std::vector<HilbertSpace> dom;
    std::size_t total = codim;
    for (auto d : domain_dims) {
      dom.emplace_back(d, "H");
      total *= d;
    }
    return MultiMap<Scalar>(std::move(dom), HilbertSpace(codim, "K"), vector(total, real));
  }

  MatrixX<Scalar> hermitian(std::size_t n) {
    const MatrixX<Scalar> g = matrix(n, n);
    return (g + g.adjoint()) / Scalar(2);
  }

  /// Haar-like unitary: Q factor of a Gaussian matrix with the R diagonal
  /// phases folded back in.
  MatrixX<Scalar> unitary(std::size_t n) {
    const MatrixX<Scalar> g = matrix(n, n);
    Eigen::HouseholderQR<MatrixX<Scalar>> qr(g);
    MatrixX<Scalar> q = qr.householderQ();
    const MatrixX<Scalar> r = qr.matrixQR().template triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
      const auto rjj = r(j, j);
      if (std::abs(rjj) > 0) q.col(j) *= rjj / std::abs(rjj);
    }
    return q;
  }

  /// Hermitian matrix with eigenvalues drawn from [lo, hi].
  MatrixX<Scalar> hermitian_in(std::size_t n, double lo, double hi) {
    const MatrixX<Scalar> u = unitary(n);
    VectorX<Scalar> d(static_cast<Eigen::Index>(n));
    for (auto& x : d) x = Scalar(uniform(lo, hi));
    return u * d.asDiagonal() * u.adjoint();
  }

  /// Normal matrix U diag(λ) U* with complex λ.
  MatrixX<Scalar> normal(std::size_t n) {
    const MatrixX<Scalar> u = unitary(n);
    const VectorX<Scalar> d = vector(n);
    return u * d.asDiagonal() * u.adjoint();
  }

  /// Random polynomial with up to `max_terms` monomials of total degree ≤ max_degree.
  MultiPoly<Scalar> poly(std::size_t nvars, unsigned max_degree, std::size_t max_terms = 4,
                         bool real = false) {
    std::vector<typename MultiPoly<Scalar>::Term> terms;
    const std::size_t count = index(1, max_terms);
    for (std::size_t t = 0; t < count; ++t) {
      Exponents e(nvars, 0);
      unsigned budget = static_cast<unsigned>(index(0, max_degree));
      for (std::size_t v = 0; v < nvars && budget > 0; ++v) {
        const auto k = static_cast<unsigned>(index(0, budget));
        e[v] = k;
        budget -= k;
      }
      terms.push_back({scalar(real), e});
    }
    return MultiPoly<Scalar>(nvars, terms);
  }

  /// Dense univariate polynomial of exactly the given degree.
  MultiPoly<Scalar> univariate(unsigned degree, bool real = false) {
    std::vector<Scalar> c(degree + 1);
    for (auto& x : c) x = scalar(real);
    return MultiPoly<Scalar>::univariate(c);
  }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> gauss_;
};

}  // namespace hilbmult
