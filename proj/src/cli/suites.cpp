#include "hilbmult/cli/suites.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "hilbmult/hilbmult.hpp"

namespace hilbmult::cli {

namespace {

using C = std::complex<double>;
using Vec = VectorX<C>;
using Mat = MatrixX<C>;
using Map = MultiMapXcd;
using Poly = MultiPolyXcd;
using Rng = Sampler<C>;

std::uint64_t derive_seed(std::uint64_t seed, const std::string& name) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : name) h = (h ^ c) * 1099511628211ULL;
  return seed ^ h;
}

class SuiteRun {
 public:
  SuiteRun(std::string suite, const SuiteOptions& opts) : suite_(std::move(suite)), opts_(opts) {}

  /// Starts an invariant; returns its report and a sampler seeded for it.
  std::pair<CheckReport*, Rng> begin(const std::string& name, double tol, std::size_t trials) {
    const std::string full = suite_ + "." + name;
    if (auto it = opts_.tolerances.find(full); it != opts_.tolerances.end()) tol = it->second;
    else if (auto jt = opts_.tolerances.find(name); jt != opts_.tolerances.end()) tol = jt->second;
    const auto seed = derive_seed(opts_.seed, full);
    reports_.push_back(CheckReport{full, true, 0.0, tol, opts_.seed, trials, std::nullopt});
    return {&reports_.back(), Rng(seed)};
  }

  std::vector<CheckReport> take() { return std::move(reports_); }

 private:
  std::string suite_;
  const SuiteOptions& opts_;
  std::vector<CheckReport> reports_;
};

std::function<std::string()> at_trial(std::size_t t) {
  return [t] { return "trial " + std::to_string(t); };
}

std::vector<std::size_t> random_dims(Rng& rng, std::size_t n, std::size_t max_dim) {
  std::vector<std::size_t> d(n);
  for (auto& x : d) x = rng.index(1, max_dim);
  return d;
}

std::vector<Vec> unit_inputs(Rng& rng, const Map& t, bool real = false) {
  std::vector<Vec> xs;
  for (const auto& h : t.domain()) xs.push_back(rng.unit_vector(h.dim(), real));
  return xs;
}

double vec_gap(const Vec& a, const Vec& b) {
  return a.size() ? static_cast<double>((a - b).cwiseAbs().maxCoeff()) : 0.0;
}

NormOptions norm_opts(std::uint64_t seed) {
  NormOptions o;
  o.seed = seed;
  return o;
}

/// Random Hermitian operator with spectrum inside [-r, r].
Map hermitian_op(Rng& rng, std::size_t d, double r = 1.5) {
  return linear_map(rng.hermitian_in(d, -r, r), "H", "H");
}

// ---------------------------------------------------------------- axioms

void axioms(SuiteRun& run) {
  {
    auto [r, rng] = run.begin("multilinearity", 1e-10, 100);
    for (std::size_t t = 0; t < r->trials; ++t) {
      const auto T = rng.map(random_dims(rng, rng.index(1, 3), 4), rng.index(1, 4));
      auto xs = unit_inputs(rng, T);
      const C alpha = rng.scalar(), beta = rng.scalar();
      for (std::size_t j = 0; j < T.arity(); ++j) {
        const Vec other = rng.unit_vector(T.domain()[j].dim());
        auto mixed = xs, second = xs;
        mixed[j] = alpha * xs[j] + beta * other;
        second[j] = other;
        const Vec lhs = apply(T, mixed);
        const Vec rhs = alpha * apply(T, xs) + beta * apply(T, second);
        r->record(vec_gap(lhs, rhs), at_trial(t));
      }
    }
  }
  {
    auto [r, rng] = run.begin("associativity", 1e-10, 50);
    for (std::size_t t = 0; t < r->trials; ++t) {
      const auto s_dims = random_dims(rng, rng.index(1, 2), 3);
      const auto S = rng.map(s_dims, rng.index(1, 3));
      std::vector<Map> ts, us_flat, inner;
      for (auto d : s_dims) {
        const auto tj = rng.map(random_dims(rng, rng.index(1, 2), 3), d);
        std::vector<Map> block;
        for (const auto& h : tj.domain()) block.push_back(rng.map(random_dims(rng, rng.index(1, 2), 2), h.dim()));
        us_flat.insert(us_flat.end(), block.begin(), block.end());
        inner.push_back(compose(tj, block));
        ts.push_back(tj);
      }
      const auto lhs = compose(compose(S, ts), us_flat);
      const auto rhs = compose(S, inner);
      r->record(max_abs_diff(lhs, rhs), at_trial(t));
    }
  }
  {
    auto [r, rng] = run.begin("unit_laws", 0.0, 50);
    for (std::size_t t = 0; t < r->trials; ++t) {
      const auto T = rng.map(random_dims(rng, rng.index(1, 3), 4), rng.index(1, 4));
      std::vector<Map> ids;
      for (const auto& h : T.domain()) ids.push_back(identity_map(h));
      const double right = max_abs_diff(compose(T, ids), T);
      const double left = max_abs_diff(compose(identity_map(T.codomain()), {T}), T);
      r->record(std::max(left, right), at_trial(t));
    }
  }
  {
    auto [r, rng] = run.begin("contractivity", 1e-9, 50);
    for (std::size_t t = 0; t < r->trials; ++t) {
      const auto s_dims = random_dims(rng, rng.index(1, 2), 3);
      const auto S = rng.map(s_dims, rng.index(1, 3));
      std::vector<Map> ts;
      double bound = norm_bounds(S, norm_opts(t)).upper;
      for (auto d : s_dims) {
        ts.push_back(rng.map(random_dims(rng, rng.index(1, 2), 3), d));
        bound *= norm_bounds(ts.back(), norm_opts(t)).upper;
      }
      const double lower = norm_bounds(compose(S, ts), norm_opts(t)).lower;
      r->record(std::max(0.0, lower - bound), at_trial(t));

      const auto a = rng.map({rng.index(1, 4)}, rng.index(1, 4));
      const auto b = rng.map({rng.index(1, 4)}, a.domain()[0].dim());
      const double chain = norm_exact_linear(compose(a, {b})) - norm_exact_linear(a) * norm_exact_linear(b);
      r->record(std::max(0.0, chain), at_trial(t));
    }
  }
  {
    auto [r, rng] = run.begin("tensor_isometry", 1e-9, 50);
    for (std::size_t t = 0; t < r->trials; ++t) {
      const auto a = rng.map({rng.index(1, 4)}, rng.index(1, 4));
      const auto b = rng.map({rng.index(1, 4)}, rng.index(1, 4));
      const double prod = norm_exact_linear(a) * norm_exact_linear(b);
      const double tn = spectral_norm(tensor_map(a, b).matrix());
      r->record(std::abs(tn - prod) / std::max(1.0, prod), at_trial(t));
    }
  }
  {
    auto [r, rng] = run.begin("tensor_brackets", 1e-9, 20);
    for (std::size_t t = 0; t < r->trials; ++t) {
      const auto a = rng.map(random_dims(rng, 2, 2), rng.index(1, 2));
      const auto b = rng.map(random_dims(rng, 2, 2), rng.index(1, 2));
      const auto na = norm_bounds(a, norm_opts(t)), nb = norm_bounds(b, norm_opts(t));
      const auto nab = norm_bounds(tensor_map(a, b), norm_opts(t));
      r->record(std::max({0.0, nab.lower - na.upper * nb.upper, na.lower * nb.lower - nab.upper}),
                at_trial(t));
    }
  }
  {
    auto [r, rng] = run.begin("joint_continuity", 1e-9, 20);
    for (std::size_t t = 0; t < r->trials; ++t) {
      const auto s_dims = random_dims(rng, rng.index(1, 2), 3);
      const auto S = rng.map(s_dims, rng.index(1, 3));
      const auto S2 = S + C(1e-3) * rng.map(s_dims, S.codomain().dim());
      std::vector<Map> ts, ts2;
      for (auto d : s_dims) {
        ts.push_back(rng.map(random_dims(rng, 1, 3), d));
        ts2.push_back(ts.back() + C(1e-3) * rng.map({ts.back().domain()[0].dim()}, d));
      }
      const auto o = norm_opts(t);
      const double lhs = norm_bounds(compose(S, ts) - compose(S2, ts2), o).upper;
      std::vector<double> up, diff;
      for (std::size_t j = 0; j < ts.size(); ++j) {
        up.push_back(norm_bounds(ts[j], o).upper);
        diff.push_back(norm_bounds(ts[j] - ts2[j], o).upper);
      }
      double rhs = norm_bounds(S - S2, o).upper;
      for (double u : up) rhs *= u;
      double tail = 0.0;
      for (std::size_t j = 0; j < ts.size(); ++j) {
        double term = diff[j];
        for (std::size_t k = 0; k < ts.size(); ++k)
          if (k != j) term *= up[k];
        tail += term;
      }
      rhs += norm_bounds(S2, o).upper * tail;
      r->record(std::max(0.0, lhs - rhs), at_trial(t));
    }
  }
  {
    auto [r, rng] = run.begin("permutation_norm", 1e-9, 20);
    for (std::size_t t = 0; t < r->trials; ++t) {
      const auto T = rng.map(random_dims(rng, rng.index(2, 3), 3), rng.index(1, 3));
      std::vector<std::size_t> pi(T.arity());
      std::iota(pi.begin(), pi.end(), 0);
      std::shuffle(pi.begin(), pi.end(), rng.engine());
      const auto a = norm_bounds(T, norm_opts(t)), b = norm_bounds(permute(T, pi), norm_opts(t));
      r->record(std::max({0.0, a.lower - b.upper, b.lower - a.upper}), at_trial(t));
    }
  }
}

// ---------------------------------------------------------------- duality

C inner(const Vec& u, const Vec& v) { return (u.array() * v.array().conjugate()).sum(); }

void duality(SuiteRun& run) {
  {
    auto [r, rng] = run.begin("curry_roundtrip", 0.0, 30);
    for (std::size_t t = 0; t < r->trials; ++t) {
      const auto T = rng.map(random_dims(rng, rng.index(1, 3), 3), rng.index(1, 3));
      for (std::size_t i = 0; i < T.arity(); ++i)
        r->record(uncurry(curry(T, i)) == T ? 0.0 : 1.0, at_trial(t));
    }
  }
  {
    auto [r, rng] = run.begin("curry_evaluate", 1e-12, 30);
    for (std::size_t t = 0; t < r->trials; ++t) {
      const auto T = rng.map(random_dims(rng, rng.index(2, 3), 3), rng.index(1, 3));
      const auto xs = unit_inputs(rng, T);
      for (std::size_t i = 0; i < T.arity(); ++i) {
        std::vector<Vec> rest;
        for (std::size_t j = 0; j < xs.size(); ++j)
          if (j != i) rest.push_back(xs[j]);
        const Vec lhs = apply(curry(T, i).evaluate(xs[i]), rest);
        r->record(vec_gap(lhs, apply(T, xs)), at_trial(t));
      }
    }
  }
  {
    auto [r, rng] = run.begin("curried_norm", 0.0, 10);
    for (std::size_t t = 0; t < r->trials; ++t) {
      const auto T = rng.map(random_dims(rng, rng.index(1, 3), 3), rng.index(1, 3));
      const auto o = norm_opts(t);
      const auto a = norm_bounds(T, o), b = curried_norm(curry(T, rng.index(0, T.arity() - 1)), o);
      r->record(std::max(std::abs(a.lower - b.lower), std::abs(a.upper - b.upper)), at_trial(t));
    }
  }
  {
    auto [r, rng] = run.begin("mate_involution", 0.0, 30);
    for (std::size_t t = 0; t < r->trials; ++t) {
      const auto T = rng.map(random_dims(rng, rng.index(1, 3), 3), rng.index(1, 3));
      for (std::size_t i = 0; i < T.arity(); ++i)
        r->record(mate(mate(T, i), i) == T ? 0.0 : 1.0, at_trial(t));
    }
  }
  {
    auto [r, rng] = run.begin("mate_norm", 1e-9, 30);
    for (std::size_t t = 0; t < r->trials; ++t) {
      const auto T = rng.map(random_dims(rng, rng.index(1, 3), 3), rng.index(1, 3));
      const auto o = norm_opts(t);
      const auto a = norm_bounds(T, o);
      for (std::size_t i = 0; i < T.arity(); ++i) {
        const auto b = norm_bounds(mate(T, i), o);
        double res = std::max({0.0, a.lower - b.upper, b.lower - a.upper});
        if (T.arity() == 1) res = std::abs(a.upper - b.upper);
        r->record(res, at_trial(t));
      }
    }
  }
  for (bool real : {false, true}) {
    auto [r, rng] = run.begin(real ? "adjunction_real" : "adjunction_complex", 1e-10, 50);
    for (std::size_t t = 0; t < r->trials; ++t) {
      const auto T = rng.map(random_dims(rng, rng.index(1, 3), 3), rng.index(1, 3), real);
      const auto xs = unit_inputs(rng, T, real);
      const Vec y = rng.unit_vector(T.codomain().dim(), real);
      const C lhs = inner(apply(T, xs), y);
      for (std::size_t i = 0; i < T.arity(); ++i) {
        std::vector<Vec> args;
        for (std::size_t j = 0; j < xs.size(); ++j)
          args.push_back(j == i ? y : (real ? xs[j] : Vec(xs[j].conjugate())));
        r->record(std::abs(lhs - inner(xs[i], apply(mate(T, i), args))), at_trial(t));
      }
    }
  }
  {
    auto [r, rng] = run.begin("mate_compositionality", 1e-10, 30);
    for (std::size_t t = 0; t < r->trials; ++t) {
      const auto s_dims = random_dims(rng, rng.index(1, 2), 3);
      const auto S = rng.map(s_dims, rng.index(1, 3), true);
      std::vector<Map> ts;
      std::vector<std::vector<Vec>> blocks;
      for (auto d : s_dims) {
        ts.push_back(rng.map(random_dims(rng, rng.index(1, 2), 3), d, true));
        blocks.push_back(unit_inputs(rng, ts.back(), true));
      }
      const Vec y = rng.unit_vector(S.codomain().dim(), true);
      const auto whole = compose(S, ts);
      std::size_t global = 0;
      for (std::size_t j = 0; j < ts.size(); ++j)
        for (std::size_t ij = 0; ij < ts[j].arity(); ++ij, ++global) {
          std::vector<Vec> flat;
          for (std::size_t k = 0; k < blocks.size(); ++k)
            for (std::size_t m = 0; m < blocks[k].size(); ++m)
              flat.push_back(k == j && m == ij ? y : blocks[k][m]);
          const Vec lhs = apply(mate(whole, global), flat);

          std::vector<Vec> outer;
          for (std::size_t k = 0; k < ts.size(); ++k) outer.push_back(k == j ? y : apply(ts[k], blocks[k]));
          std::vector<Vec> args = blocks[j];
          args[ij] = apply(mate(S, j), outer);
          r->record(vec_gap(lhs, apply(mate(ts[j], ij), args)), at_trial(t));
        }
    }
  }
  {
    auto [r, rng] = run.begin("mate_tensor", 1e-10, 30);
    for (std::size_t t = 0; t < r->trials; ++t) {
      const auto T = rng.map(random_dims(rng, rng.index(1, 2), 3), rng.index(1, 3), true);
      const auto T2 = rng.map(random_dims(rng, rng.index(1, 2), 3), rng.index(1, 3), true);
      const auto xs = unit_inputs(rng, T, true), xs2 = unit_inputs(rng, T2, true);
      const auto k = static_cast<Eigen::Index>(T.codomain().dim());
      const auto k2 = static_cast<Eigen::Index>(T2.codomain().dim());
      const Vec Y = rng.unit_vector(static_cast<std::size_t>(k * k2), true);
      const Vec img2 = apply(T2, xs2);
      const Vec z = Eigen::Map<const detail::RowMatrix<C>>(Y.data(), k, k2) * img2;
      const auto joint = tensor_map(T, T2);
      for (std::size_t i = 0; i < T.arity(); ++i) {
        std::vector<Vec> left = xs, right = xs;
        left[i] = Y;
        left.insert(left.end(), xs2.begin(), xs2.end());
        right[i] = z;
        r->record(vec_gap(apply(mate(joint, i), left), apply(mate(T, i), right)), at_trial(t));
      }
    }
  }
  {
    auto [r, rng] = run.begin("form_identity", 1e-12, 30);
    for (std::size_t t = 0; t < r->trials; ++t) {
      const auto T = rng.map(random_dims(rng, rng.index(1, 3), 3), rng.index(1, 3));
      auto args = unit_inputs(rng, T);
      const Vec y = rng.unit_vector(T.codomain().dim());
      const C expect = inner(apply(T, args), y);
      args.push_back(y.conjugate());
      r->record(std::abs(as_form(T).evaluate(args) - expect), at_trial(t));
    }
  }
  {
    auto [r, rng] = run.begin("cstar_identity", 1e-8, 30);
    for (std::size_t t = 0; t < r->trials; ++t) {
      const auto T = rng.map({rng.index(1, 5)}, rng.index(1, 5));
      const double n = norm_exact_linear(T);
      const double lhs = norm_exact_linear(compose(adjoint(T), {T}));
      r->record(std::abs(lhs - n * n) / std::max(1.0, n * n), at_trial(t));
      r->record(std::abs(norm_exact_linear(adjoint(T)) - n) / std::max(1.0, n), at_trial(t));
    }
  }
}

// ---------------------------------------------------------------- spectral

std::function<C(C)> as_function(const Poly& p) {
  return [p](C z) { return poly_eval(p, {z}); };
}

double mat_gap(const Mat& a, const Mat& b) {
  return a.size() ? static_cast<double>((a - b).cwiseAbs().maxCoeff()) : 0.0;
}

bool phase_canonical(const Mat& basis) {
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    const auto col = basis.col(j);
    const double peak = col.cwiseAbs().maxCoeff();
    Eigen::Index p = 0;
    while (std::abs(col[p]) < peak * (1.0 - 1e-10)) ++p;
    if (col[p].imag() != 0.0 || col[p].real() <= 0.0) return false;
  }
  return true;
}

void spectral(SuiteRun& run) {
  {
    auto [r, rng] = run.begin("eigh_reconstruction", 1e-9, 100);
    for (std::size_t t = 0; t < r->trials; ++t) {
      const std::size_t n = rng.index(2, 6);
      const Mat a = rng.hermitian(n);
      const auto d = eigh(linear_map(a));
      r->record(mat_gap(d.reconstruct(), a), at_trial(t));
      r->record(mat_gap(d.basis.adjoint() * d.basis, Mat::Identity(n, n)) * 10.0, at_trial(t));
      r->record(phase_canonical(d.basis) ? 0.0 : 1.0, at_trial(t));
      for (Eigen::Index j = 1; j < d.eigenvalues.size(); ++j)
        r->record(d.eigenvalues[j].real() < d.eigenvalues[j - 1].real() ? 1.0 : 0.0, at_trial(t));
    }
  }
  {
    auto [r, rng] = run.begin("calculus_homomorphism", 1e-9, 30);
    for (std::size_t t = 0; t < r->trials; ++t) {
      const auto A = hermitian_op(rng, rng.index(2, 5));
      const auto d = eigh(A);
      const Poly f = rng.univariate(static_cast<unsigned>(rng.index(0, 3)));
      const Poly g = rng.univariate(static_cast<unsigned>(rng.index(0, 3)));
      const auto fg = apply_function(d, as_function(f * g));
      const auto split = compose(apply_function(d, as_function(f)), {apply_function(d, as_function(g))});
      r->record(max_abs_diff(fg, split), at_trial(t));
    }
  }
  {
    auto [r, rng] = run.begin("poly_vs_function", 1e-8, 30);
    for (std::size_t t = 0; t < r->trials; ++t) {
      const auto A = hermitian_op(rng, rng.index(2, 5));
      const Poly p = rng.univariate(static_cast<unsigned>(rng.index(0, 5)));
      r->record(max_abs_diff(poly_of_operator(A, p), apply_function(eigh(A), as_function(p))), at_trial(t));
    }
  }
  {
    auto [r, rng] = run.begin("spectral_mapping", 1e-8, 50);
    for (std::size_t t = 0; t < r->trials; ++t) {
      const auto A = hermitian_op(rng, rng.index(1, 5));
      const Poly p = rng.univariate(static_cast<unsigned>(rng.index(0, 6)));
      r->record(spectral_mapping_check(A, p, r->tol).max_residual, at_trial(t));
    }
  }
  {
    auto [r, rng] = run.begin("gelfand", 1e-4, 40);
    for (std::size_t t = 0; t < r->trials; ++t) {
      const std::size_t n = rng.index(1, 5);
      const Mat a = t % 2 == 0 ? rng.hermitian(n) : rng.normal(n);
      const auto A = linear_map(a);
      double rho = 0.0;
      for (const auto& z : spectrum(A)) rho = std::max(rho, std::abs(z));
      r->record(std::abs(spectral_radius(A, 32).value - rho), at_trial(t));
    }
  }
  {
    auto [r, rng] = run.begin("joint_diagonal", 1e-8, 30);
    for (std::size_t t = 0; t < r->trials; ++t) {
      const std::size_t n = rng.index(2, 5), m = rng.index(2, 3);
      const Mat u = rng.unitary(n);
      std::vector<Mat> ops;
      std::vector<std::vector<double>> tuples(n);
      for (std::size_t k = 0; k < m; ++k) {
        Vec d(static_cast<Eigen::Index>(n));
        // Few distinct levels so clusters appear.
        for (auto& x : d) x = C(static_cast<double>(rng.index(0, 2)));
        ops.push_back(u * d.asDiagonal() * u.adjoint());
        for (std::size_t i = 0; i < n; ++i) tuples[i].push_back(d[static_cast<Eigen::Index>(i)].real());
      }
      const auto js = joint_eigh_matrices(ops, derive_seed(t, "joint"));
      for (const auto& a : ops) {
        Mat off = js.basis.adjoint() * a * js.basis;
        off.diagonal().setZero();
        r->record(off.cwiseAbs().maxCoeff(), at_trial(t));
      }
      // Tuples as a multiset, and invariance under one more unitary conjugation.
      const Mat w = rng.unitary(n);
      std::vector<Mat> rotated;
      for (const auto& a : ops) rotated.push_back(w * a * w.adjoint());
      const auto js2 = joint_eigh_matrices(rotated, derive_seed(t, "joint2"));
      std::sort(tuples.begin(), tuples.end());
      for (const auto* got : {&js, &js2}) {
        auto tup = got->tuples();
        std::sort(tup.begin(), tup.end(), [](const auto& x, const auto& y) {
          for (std::size_t i = 0; i < x.size(); ++i)
            if (std::abs(x[i] - y[i]) > 1e-6) return x[i] < y[i];
          return false;
        });
        double gap = 0.0;
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t k = 0; k < m; ++k) gap = std::max(gap, std::abs(tup[i][k] - tuples[i][k]));
        r->record(gap, at_trial(t));
      }
    }
  }
}

// ---------------------------------------------------------------- calculus

CalculusContextXcd context_for(const std::string& family, const Map& A) {
  if (family == "add") return make_add_context(A);
  return make_mult_context(A);
}

void absorb(CheckReport& into, const CheckReport& from) {
  if (from.max_residual > into.max_residual) into.max_residual = from.max_residual;
  if (!into.counterexample && from.counterexample) into.counterexample = from.counterexample;
  into.pass = into.max_residual <= into.tol;
}

void calculus(SuiteRun& run, const std::string& family) {
  {
    auto [r, rng] = run.begin("compatibility", 1e-9, 100);
    for (std::size_t c = 0; c < 10; ++c) {
      const auto ctx = context_for(family, hermitian_op(rng, rng.index(2, 4)));
      absorb(*r, compatibility_check(ctx, c % 3 + 1, 10, r->tol, rng.engine()()));
    }
  }
  {
    auto [r, rng] = run.begin("functoriality", 1e-8, 50);
    for (std::size_t t = 0; t < r->trials; ++t) {
      const auto ctx = context_for(family, hermitian_op(rng, rng.index(2, 3)));
      const std::size_t m = rng.index(1, 2);
      const Poly p = rng.poly(m, 2, 3);
      std::vector<Poly> qs;
      for (std::size_t j = 0; j < m; ++j) qs.push_back(rng.poly(rng.index(1, 2), 2, 3));
      absorb(*r, functoriality_check(ctx, p, qs, 3, r->tol, rng.engine()()));
    }
  }
  {
    auto [r, rng] = run.begin("univariate_agreement", 1e-9, 30);
    for (std::size_t t = 0; t < r->trials; ++t) {
      const auto A = hermitian_op(rng, rng.index(1, 4));
      const auto ctx = context_for(family, A);
      const Poly p = rng.univariate(static_cast<unsigned>(rng.index(0, 5)));
      r->record(max_abs_diff(calculus_map(ctx, p), poly_of_operator(A, p)), at_trial(t));
    }
  }
  {
    auto [r, rng] = run.begin("norm_estimate", 1e-6, 20);
    for (std::size_t t = 0; t < r->trials; ++t) {
      const auto A = hermitian_op(rng, rng.index(2, 3));
      const auto ctx = make_mult_context(A);
      const Poly p = rng.poly(rng.index(1, 3), 3, 3);
      const auto o = norm_opts(t);
      const double an = norm_exact_linear(A), tn = ctx.family.norm(p.nvars(), o).upper;
      double bound = 0.0;
      for (const auto& term : p.terms()) {
        const auto deg = std::accumulate(term.exps.begin(), term.exps.end(), 0u);
        bound += std::abs(term.coeff) * tn * std::pow(an, deg);
      }
      r->record(std::max(0.0, norm_bounds(calculus_map(ctx, p), o).upper - bound), at_trial(t));
    }
  }
  {
    auto [r, rng] = run.begin("permutation_equivariance", 1e-10, 20);
    for (std::size_t t = 0; t < r->trials; ++t) {
      const auto ctx = make_mult_context(hermitian_op(rng, rng.index(2, 3)));
      const Poly p = rng.poly(rng.index(2, 3), 3, 3);
      std::vector<std::size_t> pi(p.nvars());
      std::iota(pi.begin(), pi.end(), 0);
      std::shuffle(pi.begin(), pi.end(), rng.engine());
      r->record(max_abs_diff(calculus_map(ctx, poly_permute(p, pi)), permute(calculus_map(ctx, p), pi)),
                at_trial(t));
    }
  }
  {
    auto [r, rng] = run.begin("poly_laws", 1e-10, 30);
    for (std::size_t t = 0; t < r->trials; ++t) {
      const std::size_t m = rng.index(1, 2);
      const Poly p = rng.poly(m, 3, 3);
      std::vector<Poly> qs, rs_flat, inner;
      for (std::size_t j = 0; j < m; ++j) {
        const Poly q = rng.poly(rng.index(1, 2), 2, 3);
        std::vector<Poly> block;
        for (std::size_t k = 0; k < q.nvars(); ++k) block.push_back(rng.poly(1, 2, 2));
        rs_flat.insert(rs_flat.end(), block.begin(), block.end());
        inner.push_back(poly_compose(q, block));
        qs.push_back(q);
      }
      const Poly lhs = poly_compose(poly_compose(p, qs), rs_flat);
      const Poly rhs = poly_compose(p, inner);
      std::vector<C> z;
      for (std::size_t k = 0; k < lhs.nvars(); ++k) z.push_back(C(rng.uniform(), rng.uniform()));
      const C a = poly_eval(lhs, z), b = poly_eval(rhs, z);
      r->record(std::abs(a - b) / std::max(1.0, std::abs(a)), at_trial(t));
      const std::vector<Poly> ids(m, Poly::identity());
      const C unit = poly_eval(poly_compose(p, ids), std::vector<C>(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(m)));
      r->record(std::abs(unit - poly_eval(p, std::vector<C>(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(m)))),
                at_trial(t));
    }
  }
  {
    auto [r, rng] = run.begin("spectral_locality", 1e-10, 20);
    for (std::size_t t = 0; t < r->trials; ++t) {
      const auto ctx = context_for(family, hermitian_op(rng, rng.index(1, 4)));
      r->record(locality_residual(ctx.family, rng.index(1, 3), 3, rng.engine()()), at_trial(t));
    }
  }
}

// ---------------------------------------------------------------- covariance

void covariance(SuiteRun& run) {
  auto [r, rng] = run.begin("covariance", 1e-8, 400);
  for (std::size_t u = 0; u < 20; ++u) {
    const std::size_t n = rng.index(2, 4);
    const auto U = linear_map(rng.unitary(n), "H", "H");
    const auto A = hermitian_op(rng, n);
    for (const char* fam : {"mult", "add"}) {
      const auto ctx = context_for(fam, A);
      for (int k = 0; k < 10; ++k) {
        const Poly p = rng.poly(rng.index(1, 2), 3, 3);
        absorb(*r, covariance_check(ctx, U, p, 1, r->tol, rng.engine()()));
      }
    }
  }
}

// ---------------------------------------------------------------- grid

void grid(SuiteRun& run) {
  {
    auto [r, rng] = run.begin("route_agreement", 1e-9, 50);
    for (std::size_t t = 0; t < r->trials; ++t) {
      const double a = rng.uniform(-1.0, 0.0), b = a + rng.uniform(0.5, 2.0);
      const std::size_t npts = rng.index(1, 64);
      const auto g = make_grid(a, b, npts);
      const Poly me_poly = rng.poly(1, 2, 3, true);
      const auto me = [me_poly](double x) { return poly_eval(me_poly, {C(x)}); };
      const Poly p = rng.poly(npts <= 12 ? rng.index(1, 3) : rng.index(1, 2), 3, 3);
      std::vector<GridFunctionXcd> gs;
      for (std::size_t j = 0; j < p.nvars(); ++j) gs.push_back({g, rng.vector(npts)});
      const auto direct = grid_calculus(g, me, p, gs);
      const auto generic = grid_calculus_generic(g, me, p, gs);
      r->record(vec_gap(direct.values, generic.values), at_trial(t));
    }
  }
  {
    auto [r, rng] = run.begin("grid_spectral_mapping", 1e-9, 20);
    for (std::size_t t = 0; t < r->trials; ++t) {
      const auto g = make_grid(0.0, 1.0, rng.index(1, 32));
      const Poly me_poly = rng.poly(1, 2, 3, true);
      const auto A = mult_operator(g, [me_poly](double x) { return poly_eval(me_poly, {C(x)}); });
      const Poly p = rng.univariate(static_cast<unsigned>(rng.index(0, 4)), true);
      r->record(spectral_mapping_check(A, p, r->tol).max_residual, at_trial(t));
    }
  }
  {
    auto [r, rng] = run.begin("grid_norm_bound", 1e-12, 30);
    for (std::size_t t = 0; t < r->trials; ++t) {
      const auto g = make_grid(-1.0, 1.0, rng.index(1, 64));
      const Poly me_poly = rng.poly(1, 2, 3, true);
      const auto me = [me_poly](double x) { return poly_eval(me_poly, {C(x)}); };
      const Poly p = rng.poly(2, 3, 3);
      const GridFunctionXcd f{g, rng.vector(g.npoints())}, h{g, rng.vector(g.npoints())};
      const auto out = grid_calculus(g, me, p, {f, h});
      double sup = 0.0;
      for (std::size_t i = 0; i < g.npoints(); ++i)
        sup = std::max(sup, std::abs(poly_eval_diagonal(p, me(g.node(i)))));
      const double bound = sup * f.values.cwiseAbs().maxCoeff() * h.norm();
      r->record(std::max(0.0, out.norm() - bound * (1.0 + 1e-12)), at_trial(t));
    }
  }
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"axioms",   "duality",    "spectral",
                                              "calculus", "covariance", "grid"};
  return names;
}

std::vector<CheckReport> run_suite(const std::string& suite, const SuiteOptions& opts) {
  if (opts.family != "mult" && opts.family != "add")
    throw UsageError("unknown family '" + opts.family + "' (expected mult or add)");
  SuiteRun run(suite, opts);
  if (suite == "axioms") axioms(run);
  else if (suite == "duality") duality(run);
  else if (suite == "spectral") spectral(run);
  else if (suite == "calculus") calculus(run, opts.family);
  else if (suite == "covariance") covariance(run);
  else if (suite == "grid") grid(run);
  else throw UsageError("unknown suite '" + suite + "'");
  return run.take();
}

}  // namespace hilbmult::cli
