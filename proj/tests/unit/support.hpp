#pragma once

// Independent oracles shared by the unit tests. None of these route through
// the engine's contraction or eigen code.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <doctest.h>

#include "hilbmult/hilbmult.hpp"

namespace oracle {

using C = std::complex<double>;
using Vec = hilbmult::VectorX<C>;
using Mat = hilbmult::MatrixX<C>;
using Map = hilbmult::MultiMapXcd;
using Poly = hilbmult::MultiPolyXcd;

inline Vec vec(std::initializer_list<C> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (auto x : xs) v[i++] = x;
  return v;
}

inline Mat diag(std::initializer_list<C> xs) { return vec(xs).asDiagonal(); }

inline Map lin(const Mat& m) { return hilbmult::linear_map(m, "H", "H"); }

/// Brute-force contraction by walking every multi-index.
inline Vec contract(const Map& t, const std::vector<Vec>& xs) {
  const auto n = t.arity();
  Vec out = Vec::Zero(static_cast<Eigen::Index>(t.codomain().dim()));
  std::vector<std::size_t> idx(n, 0);
  for (std::size_t k = 0; k < t.codomain().dim(); ++k) {
    std::fill(idx.begin(), idx.end(), 0);
    while (true) {
      C w = t.coeff(k, idx);
      for (std::size_t j = 0; j < n; ++j) w *= xs[j][static_cast<Eigen::Index>(idx[j])];
      out[static_cast<Eigen::Index>(k)] += w;
      std::size_t j = n;
      while (j > 0) {
        --j;
        if (++idx[j] < t.domain()[j].dim()) break;
        idx[j] = 0;
        if (j == 0) goto next_k;
      }
      if (n == 0) break;
    }
  next_k:;
  }
  return out;
}

inline double sigma_max(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

inline Eigen::VectorXd eigenvalues(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  return es.eigenvalues();
}

/// sup ‖T(x, y)‖ over real unit circles in dim-2 slots, sampled at `step` radians.
inline double bilinear_grid_norm(const Map& t, double step = 1e-3) {
  double best = 0.0;
  for (double a = 0; a < std::numbers::pi; a += step)
    for (double b = 0; b < std::numbers::pi; b += step) {
      const Vec x = vec({std::cos(a), std::sin(a)});
      const Vec y = vec({std::cos(b), std::sin(b)});
      best = std::max(best, contract(t, {x, y}).norm());
    }
  return best;
}

inline double gap(const Vec& a, const Vec& b) {
  REQUIRE(a.size() == b.size());
  return a.size() ? (a - b).cwiseAbs().maxCoeff() : 0.0;
}

inline double gap(const Mat& a, const Mat& b) {
  REQUIRE(a.rows() == b.rows());
  REQUIRE(a.cols() == b.cols());
  return a.size() ? (a - b).cwiseAbs().maxCoeff() : 0.0;
}

inline Poly poly(std::size_t nvars, std::vector<Poly::Term> terms) { return Poly(nvars, terms); }

}  // namespace oracle
