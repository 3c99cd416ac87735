#pragma once

// Hermitian and normal eigendecomposition, joint diagonalization of commuting
// families, functional calculus and the Gelfand spectral radius.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <type_traits>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "hilbmult/duality.hpp"
#include "hilbmult/jacobi.hpp"
#include "hilbmult/multimap.hpp"
#include "hilbmult/poly.hpp"

namespace hilbmult {

/// Eigenvalues sorted by (real, imaginary) with the unitary eigenbasis in
/// matching column order. Each column's first largest-magnitude entry is real
/// and positive.
template <typename Scalar>
struct SpectralDecomposition {
  HilbertSpace space;
  VectorX<Scalar> eigenvalues;
  MatrixX<Scalar> basis;

  MatrixX<Scalar> reconstruct() const {
    return basis * eigenvalues.asDiagonal() * basis.adjoint();
  }
};

using SpectralDecompositionXcd = SpectralDecomposition<std::complex<double>>;

inline constexpr std::uint64_t kDefaultSpectralSeed = 0x5eed5eedULL;

namespace detail {

template <typename Scalar>
void canonicalize_phases(MatrixX<Scalar>& basis) {
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    auto col = basis.col(j);
    const double peak = static_cast<double>(col.cwiseAbs().maxCoeff());
    if (peak == 0.0) continue;
    Eigen::Index pivot = 0;
    while (static_cast<double>(std::abs(col[pivot])) < peak * (1.0 - 1e-10)) ++pivot;
    const Scalar phase = std::conj(col[pivot]) / std::abs(col[pivot]);
    col *= phase;
    col[pivot] = Scalar(std::abs(col[pivot]));
  }
}

/// Index order sorting by real part, then (within real parts equal to `tol`)
/// by imaginary part.
template <typename Scalar>
std::vector<Eigen::Index> spectral_order(const VectorX<Scalar>& values) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(values.size()));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  double scale = 1.0;
  for (const auto& v : values) scale = std::max(scale, static_cast<double>(std::abs(v)));
  const double tol = 1e-9 * scale;

  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) {
    return std::real(values[a]) < std::real(values[b]);
  });
  for (std::size_t start = 0; start < idx.size();) {
    std::size_t end = start + 1;
    while (end < idx.size() &&
           std::real(values[idx[end]]) - std::real(values[idx[end - 1]]) <= tol)
      ++end;
    std::stable_sort(idx.begin() + static_cast<std::ptrdiff_t>(start),
                     idx.begin() + static_cast<std::ptrdiff_t>(end), [&](auto a, auto b) {
                       return std::imag(values[a]) < std::imag(values[b]);
                     });
    start = end;
  }
  return idx;
}

template <typename Scalar>
SpectralDecomposition<Scalar> sorted_decomposition(const HilbertSpace& space,
                                                   const VectorX<Scalar>& values,
                                                   const MatrixX<Scalar>& vectors) {
  const auto order = spectral_order(values);
  SpectralDecomposition<Scalar> d{space, VectorX<Scalar>(values.size()),
                                  MatrixX<Scalar>(vectors.rows(), vectors.cols())};
  for (std::size_t j = 0; j < order.size(); ++j) {
    d.eigenvalues[static_cast<Eigen::Index>(j)] = values[order[j]];
    d.basis.col(static_cast<Eigen::Index>(j)) = vectors.col(order[j]);
  }
  canonicalize_phases(d.basis);
  return d;
}


}  // namespace detail

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
template <typename Derived>
SpectralDecomposition<typename Derived::Scalar> eigh_matrix(const Eigen::MatrixBase<Derived>& a,
                                                            const HilbertSpace& space) {
  using Scalar = typename Derived::Scalar;
  const auto bad = hermitian_violation(a);
  if (bad.magnitude > 1e-9) throw DomainError("eigh: matrix is not Hermitian, " + describe(bad));
  const auto jac = jacobi_eigh(a);
  return detail::sorted_decomposition<Scalar>(space, jac.eigenvalues.template cast<Scalar>(),
                                              jac.eigenvectors);
}

template <typename Scalar>
SpectralDecomposition<Scalar> eigh(const MultiMap<Scalar>& a) {
  return eigh_matrix(detail::square_matrix(a, "eigh"), a.codomain());
}

/// Shared eigenbasis of a commuting Hermitian family; column j carries the
/// joint eigenvalue tuple (eigenvalues[0][j], eigenvalues[1][j], …).
template <typename Scalar>
struct JointSpectrum {
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  MatrixX<Scalar> basis;
  std::vector<VectorX<Real>> eigenvalues;

  std::vector<std::vector<Real>> tuples() const {
    std::vector<std::vector<Real>> out(static_cast<std::size_t>(basis.cols()));
    for (std::size_t j = 0; j < out.size(); ++j)
      for (const auto& ev : eigenvalues) out[j].push_back(ev[static_cast<Eigen::Index>(j)]);
    return out;
  }
};

namespace detail {

inline constexpr double kCommuteTol = 1e-8;
inline constexpr double kClusterTol = 1e-8;

template <typename Scalar>
bool all_diagonal(const std::vector<MatrixX<Scalar>>& ops, const MatrixX<Scalar>& q) {
  for (const auto& a : ops) {
    MatrixX<Scalar> b = q.adjoint() * a * q;
    b.diagonal().setZero();
    if (b.size() > 0 && static_cast<double>(b.cwiseAbs().maxCoeff()) > kCommuteTol) return false;
  }
  return true;
}

/// Rotates the orthonormal columns of q, within their span, onto joint
/// eigenvectors of every operator. Degenerate clusters of the random
/// combination are refined recursively with fresh coefficients.
template <typename Scalar>
MatrixX<Scalar> refine_joint(const std::vector<MatrixX<Scalar>>& ops, const MatrixX<Scalar>& q,
                             std::mt19937_64& rng, int depth) {
  if (q.cols() <= 1 || all_diagonal(ops, q)) return q;
  if (depth > 32) throw NumericError("joint_eigh: degenerate cluster did not split");

  std::normal_distribution<double> gauss;
  MatrixX<Scalar> c = MatrixX<Scalar>::Zero(q.cols(), q.cols());
  for (const auto& a : ops) {
    const double w = gauss(rng);
    c += Scalar(w) * (q.adjoint() * a * q);
  }
  const auto jac = jacobi_eigh(c);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(c.cols()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](auto x, auto y) { return jac.eigenvalues[x] < jac.eigenvalues[y]; });

  MatrixX<Scalar> rotated(q.rows(), q.cols());
  for (std::size_t j = 0; j < order.size(); ++j)
    rotated.col(static_cast<Eigen::Index>(j)) = q * jac.eigenvectors.col(order[j]);

  const double scale = std::max(1.0, static_cast<double>(jac.eigenvalues.cwiseAbs().maxCoeff()));
  for (std::size_t start = 0; start < order.size();) {
    std::size_t end = start + 1;
    while (end < order.size() && jac.eigenvalues[order[end]] - jac.eigenvalues[order[end - 1]] <=
                                     kClusterTol * scale)
      ++end;
    if (end - start > 1) {
      const auto s = static_cast<Eigen::Index>(start);
      const auto len = static_cast<Eigen::Index>(end - start);
      MatrixX<Scalar> block = rotated.middleCols(s, len);
      rotated.middleCols(s, len) = refine_joint(ops, block, rng, depth + 1);
    }
    start = end;
  }
  return rotated;
}

}  // namespace detail

template <typename Scalar>
JointSpectrum<Scalar> joint_eigh_matrices(const std::vector<MatrixX<Scalar>>& ops,
                                          std::uint64_t seed) {
  if (ops.empty()) throw UsageError("joint_eigh: empty family");
  const Eigen::Index n = ops.front().rows();
  for (std::size_t k = 0; k < ops.size(); ++k) {
    if (ops[k].rows() != n || ops[k].cols() != n)
      throw ShapeError("joint_eigh: operator " + std::to_string(k) + " has mismatched shape");
    const auto bad = hermitian_violation(ops[k]);
    if (bad.magnitude > 1e-9)
      throw DomainError("joint_eigh: operator " + std::to_string(k) + " is not Hermitian, " +
                        describe(bad));
  }
  for (std::size_t j = 0; j < ops.size(); ++j)
    for (std::size_t k = j + 1; k < ops.size(); ++k) {
      const auto bad = commutator_violation(ops[j], ops[k]);
      if (bad.magnitude > detail::kCommuteTol)
        throw DomainError("joint_eigh: operators " + std::to_string(j) + " and " +
                          std::to_string(k) + " do not commute, " + describe(bad));
    }

  std::mt19937_64 rng(seed);
  MatrixX<Scalar> basis =
      detail::refine_joint(ops, MatrixX<Scalar>(MatrixX<Scalar>::Identity(n, n)), rng, 0);

  using Real = typename Eigen::NumTraits<Scalar>::Real;
  std::vector<VectorX<Real>> values;
  for (const auto& a : ops) {
    MatrixX<Scalar> d = basis.adjoint() * a * basis;
    values.push_back(d.diagonal().real());
    d.diagonal().setZero();
    const double scale = std::max(1.0, static_cast<double>(a.norm()));
    if (d.size() > 0 && static_cast<double>(d.cwiseAbs().maxCoeff()) > detail::kCommuteTol * scale)
      throw NumericError("joint_eigh: residual off-diagonal after refinement");
  }

  // Lexicographic order on the tuples, coordinates compared to 1e-9.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) {
    for (const auto& v : values) {
      if (std::abs(v[x] - v[y]) > 1e-9) return v[x] < v[y];
    }
    return false;
  });
  JointSpectrum<Scalar> out{MatrixX<Scalar>(n, n), {}};
  for (std::size_t j = 0; j < order.size(); ++j)
    out.basis.col(static_cast<Eigen::Index>(j)) = basis.col(order[j]);
  for (const auto& v : values) {
    VectorX<Real> sorted(n);
    for (std::size_t j = 0; j < order.size(); ++j) sorted[static_cast<Eigen::Index>(j)] = v[order[j]];
    out.eigenvalues.push_back(std::move(sorted));
  }
  detail::canonicalize_phases(out.basis);
  return out;
}

template <typename Scalar>
JointSpectrum<Scalar> joint_eigh(std::span<const MultiMap<Scalar>> ops, std::uint64_t seed) {
  std::vector<MatrixX<Scalar>> mats;
  for (const auto& a : ops) mats.push_back(detail::square_matrix(a, "joint_eigh"));
  return joint_eigh_matrices(mats, seed);
}

/// N = R + iS with commuting Hermitian parts, diagonalized jointly.
template <typename Scalar>
SpectralDecomposition<Scalar> eig_normal(const MultiMap<Scalar>& n,
                                         std::uint64_t seed = kDefaultSpectralSeed) {
  const MatrixX<Scalar> m = detail::square_matrix(n, "eig_normal");
  const auto bad = max_entry(m.adjoint() * m - m * m.adjoint());
  if (bad.magnitude > 1e-9) throw DomainError("eig_normal: operator is not normal, " + describe(bad));

  const Scalar two_i(0, 2);
  const MatrixX<Scalar> re = (m + m.adjoint()) / Scalar(2);
  const MatrixX<Scalar> im = (m - m.adjoint()) / two_i;
  const auto joint = joint_eigh_matrices<Scalar>({re, im}, seed);
  VectorX<Scalar> values(m.rows());
  for (Eigen::Index j = 0; j < values.size(); ++j)
    values[j] = Scalar(joint.eigenvalues[0][j], joint.eigenvalues[1][j]);
  return detail::sorted_decomposition(n.codomain(), values, joint.basis);
}

/// Sorted eigenvalues of a Hermitian or normal operator.
template <typename Scalar>
VectorX<Scalar> spectrum(const MultiMap<Scalar>& a) {
  const MatrixX<Scalar> m = detail::square_matrix(a, "spectrum");
  if (hermitian_violation(m).magnitude <= 1e-9) return eigh(a).eigenvalues;
  const auto bad = max_entry(m.adjoint() * m - m * m.adjoint());
  if (bad.magnitude > 1e-9)
    throw DomainError("spectrum: operator is neither Hermitian nor normal, commutator " +
                      describe(bad));
  return eig_normal(a).eigenvalues;
}

/// basis · diag(f(λ_j)) · basis*. Non-finite f values are domain errors.
template <typename Scalar>
MultiMap<Scalar> apply_function(const SpectralDecomposition<Scalar>& d,
                                const std::type_identity_t<std::function<Scalar(Scalar)>>& f) {
  VectorX<Scalar> fv(d.eigenvalues.size());
  for (Eigen::Index j = 0; j < fv.size(); ++j) {
    fv[j] = f(d.eigenvalues[j]);
    if (!std::isfinite(std::real(fv[j])) || !std::isfinite(std::imag(fv[j])))
      throw DomainError("apply_function: f undefined at eigenvalue " +
                        std::to_string(std::real(d.eigenvalues[j])));
  }
  return linear_map(MatrixX<Scalar>(d.basis * fv.asDiagonal() * d.basis.adjoint()),
                    d.space.label(), d.space.label());
}

/// p(A) by Horner's rule in the operator algebra.
template <typename Scalar>
MatrixX<Scalar> poly_of_matrix(const MatrixX<Scalar>& a, const MultiPoly<Scalar>& p) {
  const auto c = p.dense_univariate();
  const auto n = a.rows();
  const MatrixX<Scalar> eye = MatrixX<Scalar>::Identity(n, n);
  MatrixX<Scalar> r = c.back() * eye;
  for (std::size_t k = c.size() - 1; k-- > 0;) r = r * a + c[k] * eye;
  return r;
}

template <typename Scalar>
MultiMap<Scalar> poly_of_operator(const MultiMap<Scalar>& a, const MultiPoly<Scalar>& p) {
  return linear_map(poly_of_matrix(detail::square_matrix(a, "poly_of_operator"), p),
                    a.domain()[0].label(), a.codomain().label());
}

template <typename Scalar>
struct SpectralMappingReport {
  bool pass = false;
  double max_residual = 0.0;
  std::vector<Scalar> expected;  // {p(λ)}
  std::vector<Scalar> actual;    // σ(p(A))
};

namespace detail {

/// Greedy nearest matching of two multisets; returns the worst matched gap,
/// or +∞ if the sizes differ.
template <typename Scalar>
double multiset_distance(const std::vector<Scalar>& a, const std::vector<Scalar>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (const auto& x : a) {
    std::size_t best = b.size();
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j)
      if (!used[j] && std::abs(x - b[j]) < gap) {
        gap = std::abs(x - b[j]);
        best = j;
      }
    used[best] = true;
    worst = std::max(worst, gap);
  }
  return worst;
}

template <typename Scalar>
std::vector<Scalar> sorted_values(const VectorX<Scalar>& v) {
  std::vector<Scalar> out;
  for (auto j : spectral_order(v)) out.push_back(v[j]);
  return out;
}

}  // namespace detail

/// Compares {p(λ) : λ ∈ σ(A)} with σ(p(A)) as multisets.
template <typename Scalar>
SpectralMappingReport<Scalar> spectral_mapping_check(const MultiMap<Scalar>& a,
                                                     const MultiPoly<Scalar>& p, double tol) {
  const auto d = eigh(a);
  VectorX<Scalar> mapped(d.eigenvalues.size());
  for (Eigen::Index j = 0; j < mapped.size(); ++j)
    mapped[j] = poly_eval(p, std::span<const Scalar>(&d.eigenvalues[j], 1));

  SpectralMappingReport<Scalar> r;
  r.expected = detail::sorted_values(mapped);
  r.actual = detail::sorted_values(spectrum(poly_of_operator(a, p)));
  r.max_residual = detail::multiset_distance(r.expected, r.actual);
  r.pass = r.max_residual <= tol;
  return r;
}

struct GelfandSequence {
  std::vector<double> sequence;  // ‖A^n‖^{1/n}, n = 1..max_n
  double value = 0.0;            // last entry
};

/// Gelfand sequence with log-scaled powers so large norms do not overflow.
template <typename Scalar>
GelfandSequence spectral_radius(const MultiMap<Scalar>& a, std::size_t max_n) {
  const MatrixX<Scalar> m = detail::square_matrix(a, "spectral_radius");
  GelfandSequence g;
  MatrixX<Scalar> power = MatrixX<Scalar>::Identity(m.rows(), m.cols());
  double log_scale = 0.0;
  bool vanished = false;
  for (std::size_t n = 1; n <= max_n; ++n) {
    if (vanished) {
      g.sequence.push_back(0.0);
      continue;
    }
    power = power * m;
    const double norm = spectral_norm(power);
    if (norm == 0.0) {
      vanished = true;
      g.sequence.push_back(0.0);
      continue;
    }
    log_scale += std::log(norm);
    power = MatrixX<Scalar>(power / norm);
    g.sequence.push_back(std::exp(log_scale / static_cast<double>(n)));
  }
  if (!g.sequence.empty()) g.value = g.sequence.back();
  return g;
}

template <typename Scalar>
struct ChebyshevApproximation {
  MultiPoly<Scalar> poly;       // monomial form, one variable
  double grid_sup_error = 0.0;  // sup |P − f| on 10⁴ equispaced points of [a, b]
};

/// Chebyshev interpolant of f at degree+1 Chebyshev points mapped to [a, b].
template <typename Scalar = std::complex<double>>
ChebyshevApproximation<Scalar> chebyshev_approx(const std::function<double(double)>& f, double a,
                                                double b, std::size_t degree) {
  if (!(a < b)) throw DomainError("chebyshev_approx: requires a < b");
  const std::size_t n = degree + 1;
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);

  std::vector<double> fx(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double u = std::cos(std::numbers::pi * (static_cast<double>(k) + 0.5) / static_cast<double>(n));
    fx[k] = f(mid + half * u);
  }
  std::vector<double> cheb(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      s += fx[k] * std::cos(std::numbers::pi * static_cast<double>(j) * (static_cast<double>(k) + 0.5) /
                            static_cast<double>(n));
    cheb[j] = 2.0 * s / static_cast<double>(n);
  }
  cheb[0] *= 0.5;

  // Monomial coefficients in u via T_{j+1} = 2u T_j − T_{j−1}.
  std::vector<double> in_u(n, 0.0);
  std::vector<double> prev(n, 0.0), cur(n, 0.0);
  prev[0] = 1.0;
  in_u[0] += cheb[0];
  if (n > 1) {
    cur[1] = 1.0;
    in_u[1] += cheb[1];
  }
  for (std::size_t j = 2; j < n; ++j) {
    std::vector<double> next(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) next[i + 1] += 2.0 * cur[i];
    for (std::size_t i = 0; i < n; ++i) next[i] -= prev[i];
    for (std::size_t i = 0; i < n; ++i) in_u[i] += cheb[j] * next[i];
    prev = std::move(cur);
    cur = std::move(next);
  }

  // Substitute u = (t − mid)/half by Horner in polynomial arithmetic.
  const double alpha = 1.0 / half, beta = -mid / half;
  std::vector<double> in_t{in_u[n - 1]};
  for (std::size_t k = n - 1; k-- > 0;) {
    std::vector<double> next(in_t.size() + 1, 0.0);
    for (std::size_t i = 0; i < in_t.size(); ++i) {
      next[i] += beta * in_t[i];
      next[i + 1] += alpha * in_t[i];
    }
    next[0] += in_u[k];
    in_t = std::move(next);
  }

  std::vector<Scalar> coeffs(in_t.begin(), in_t.end());
  ChebyshevApproximation<Scalar> out{MultiPoly<Scalar>::univariate(coeffs), 0.0};
  constexpr std::size_t kGrid = 10000;
  for (std::size_t i = 0; i < kGrid; ++i) {
    const double t = a + (b - a) * static_cast<double>(i) / static_cast<double>(kGrid - 1);
    const Scalar z(t);
    const double err = std::abs(poly_eval(out.poly, std::span<const Scalar>(&z, 1)) - Scalar(f(t)));
    out.grid_sup_error = std::max(out.grid_sup_error, err);
  }
  return out;
}

}  // namespace hilbmult
