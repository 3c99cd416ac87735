#pragma once

// Matrix-level kernels shared by the norm and spectral code: the cyclic
// Jacobi eigensolver for Hermitian matrices and the spectral norm built on it.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "hilbmult/errors.hpp"

namespace hilbmult {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Largest entry of |A − A*| and where it sits.
struct EntryViolation {
  Eigen::Index row = 0;
  Eigen::Index col = 0;
  double magnitude = 0.0;
};

template <typename Derived>
EntryViolation max_entry(const Eigen::MatrixBase<Derived>& m) {
  EntryViolation worst;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double mag = static_cast<double>(std::abs(m(i, j)));
      if (mag > worst.magnitude) worst = {i, j, mag};
    }
  return worst;
}

template <typename Derived>
EntryViolation hermitian_violation(const Eigen::MatrixBase<Derived>& a) {
  return max_entry(a - a.adjoint());
}

template <typename Derived>
EntryViolation commutator_violation(const Eigen::MatrixBase<Derived>& a,
                                    const Eigen::MatrixBase<Derived>& b) {
  return max_entry(a * b - b * a);
}

inline std::string describe(const EntryViolation& v) {
  return "entry (" + std::to_string(v.row) + "," + std::to_string(v.col) +
         ") off by " + std::to_string(v.magnitude);
}

template <typename Scalar>
struct JacobiResult {
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  VectorX<Real> eigenvalues;     // unsorted, paired with columns below
  MatrixX<Scalar> eigenvectors;  // unitary
  int sweeps = 0;
};

/// Cyclic Jacobi rotations on the Hermitian part of `a`. Stops once the
/// largest off-diagonal magnitude drops below threshold · max(1, ‖a‖_F).
template <typename Derived>
JacobiResult<typename Derived::Scalar> jacobi_eigh(const Eigen::MatrixBase<Derived>& a,
                                                   double threshold = 1e-12,
                                                   int max_sweeps = 100) {
  using Scalar = typename Derived::Scalar;
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  static_assert(Eigen::NumTraits<Scalar>::IsComplex, "complex scalar required");
  if (a.rows() != a.cols()) throw ShapeError("jacobi_eigh: matrix must be square");

  const Eigen::Index n = a.rows();
  MatrixX<Scalar> m = (a + a.adjoint()) / Real(2);
  MatrixX<Scalar> v = MatrixX<Scalar>::Identity(n, n);
  const Real stop = Real(threshold) * std::max(Real(1), m.norm());

  JacobiResult<Scalar> result;
  for (int sweep = 0;; ++sweep) {
    Real off = 0;
    for (Eigen::Index q = 1; q < n; ++q)
      for (Eigen::Index p = 0; p < q; ++p) off = std::max(off, std::abs(m(p, q)));
    if (off < stop) {
      result.sweeps = sweep;
      break;
    }
    if (sweep == max_sweeps)
      throw NumericError("jacobi_eigh: no convergence after " + std::to_string(max_sweeps) +
                         " sweeps");

    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar apq = m(p, q);
        const Real r = std::abs(apq);
        if (r == Real(0)) continue;
        const Scalar w = std::conj(apq) / r;  // e^{-iφ}
        const Real app = std::real(m(p, p));
        const Real aqq = std::real(m(q, q));
        const Real theta = (aqq - app) / (2 * r);
        Real t;
        if (std::abs(theta) > Real(1e150)) {
          t = Real(1) / (2 * theta);
        } else {
          t = (theta >= 0 ? Real(1) : Real(-1)) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        }
        const Real c = Real(1) / std::sqrt(t * t + 1);
        const Real s = t * c;

        // J = diag(1, w) · [[c, s], [-s, c]] on the (p, q) plane.
        const Scalar jpp = c, jpq = s, jqp = -s * w, jqq = c * w;
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar mkp = m(k, p), mkq = m(k, q);
          m(k, p) = mkp * jpp + mkq * jqp;
          m(k, q) = mkp * jpq + mkq * jqq;
          const Scalar vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * jpp + vkq * jqp;
          v(k, q) = vkp * jpq + vkq * jqq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar mpk = m(p, k), mqk = m(q, k);
          m(p, k) = std::conj(jpp) * mpk + std::conj(jqp) * mqk;
          m(q, k) = std::conj(jpq) * mpk + std::conj(jqq) * mqk;
        }
        m(p, q) = m(q, p) = Scalar(0);
        m(p, p) = app - t * r;
        m(q, q) = aqq + t * r;
      }
    }
  }

  result.eigenvalues = m.diagonal().real();
  result.eigenvectors = std::move(v);
  return result;
}

/// Largest singular value, via the Jacobi spectrum of the smaller Gram matrix.
template <typename Derived>
double spectral_norm(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  if (m.size() == 0) return 0.0;
  // Scale first so the Gram matrix cannot overflow or underflow.
  double scale = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) scale = std::max(scale, static_cast<double>(std::abs(m(i, j))));
  if (scale == 0.0) return 0.0;
  const MatrixX<Scalar> a = m / scale;
  const MatrixX<Scalar> gram =
      a.cols() <= a.rows() ? MatrixX<Scalar>(a.adjoint() * a) : MatrixX<Scalar>(a * a.adjoint());
  const auto eig = jacobi_eigh(gram);
  return scale * std::sqrt(std::max(0.0, static_cast<double>(eig.eigenvalues.maxCoeff())));
}

}  // namespace hilbmult
