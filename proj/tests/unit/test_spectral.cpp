#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "support.hpp"

using namespace hilbmult;
using namespace oracle;

namespace {

Mat mat2(C a, C b, C c, C d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

Mat rotation(double th) { return mat2(std::cos(th), -std::sin(th), std::sin(th), std::cos(th)); }

Poly univariate(std::vector<C> c) { return Poly::univariate(c); }

bool phase_ok(const Mat& basis) {
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    const double peak = basis.col(j).cwiseAbs().maxCoeff();
    Eigen::Index p = 0;
    while (std::abs(basis(p, j)) < peak * (1 - 1e-10)) ++p;
    if (basis(p, j).imag() != 0.0 || basis(p, j).real() <= 0.0) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("eigh on small matrices") {
  const auto d = eigh(lin(diag({3, 1})));
  CHECK(gap(d.eigenvalues, vec({1, 3})) < 1e-15);
  CHECK(gap(d.basis, mat2(0, 1, 1, 0)) < 1e-15);

  const auto s = eigh(lin(mat2(2, 1, 1, 2)));
  CHECK(gap(s.eigenvalues, vec({1, 3})) < 1e-14);
  const double r = std::sqrt(0.5);
  CHECK(gap(Vec(s.basis.col(0)), vec({r, -r})) < 1e-14);
  CHECK(gap(Vec(s.basis.col(1)), vec({r, r})) < 1e-14);
  CHECK_THROWS_AS(eigh(lin(mat2(0, 1, 0, 0))), DomainError);
}

TEST_CASE("eigh against Eigen on random Hermitian matrices") {
  Sampler<C> rng(31);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = rng.index(2, 6);
    const Mat a = rng.hermitian(n);
    const auto d = eigh(lin(a));
    const auto ref = eigenvalues(a);
    for (Eigen::Index j = 0; j < ref.size(); ++j) {
      CHECK(std::abs(d.eigenvalues[j].imag()) == 0.0);
      CHECK(std::abs(d.eigenvalues[j].real() - ref[j]) < 1e-10);
    }
    CHECK(gap(Mat(d.basis * d.eigenvalues.asDiagonal() * d.basis.adjoint()), a) < 1e-9);
    CHECK(gap(Mat(d.basis.adjoint() * d.basis), Mat::Identity(n, n)) < 1e-10);
    CHECK(phase_ok(d.basis));
  }
}

TEST_CASE("spectrum") {
  CHECK(gap(spectrum(lin(mat2(2, 1, 1, 2))), vec({1, 3})) < 1e-14);
  CHECK(gap(spectrum(lin(mat2(0, -1, 1, 0))), vec({C(0, -1), C(0, 1)})) < 1e-12);
  CHECK(gap(spectrum(identity_map(make_space(3))), vec({1, 1, 1})) == 0.0);
  CHECK_THROWS_AS(spectrum(lin(mat2(1, 2, 3, 4))), DomainError);
}

TEST_CASE("eig_normal") {
  Sampler<C> rng(37);
  const Mat h = rng.hermitian(4);
  const auto a = eig_normal(lin(h)), b = eigh(lin(h));
  CHECK(gap(a.eigenvalues, b.eigenvalues) < 1e-9);

  const auto r = eig_normal(lin(mat2(0, -1, 1, 0)));
  CHECK(gap(r.eigenvalues, vec({C(0, -1), C(0, 1)})) < 1e-12);
  CHECK(gap(Mat(r.basis.adjoint() * r.basis), Mat::Identity(2, 2)) < 1e-12);
  CHECK(gap(r.reconstruct(), mat2(0, -1, 1, 0)) < 1e-12);

  const auto u = eig_normal(lin(diag({std::polar(1.0, 0.3), std::polar(1.0, 1.1)})));
  // sorted by real part: cos 1.1 < cos 0.3
  CHECK(std::abs(std::arg(u.eigenvalues[0]) - 1.1) < 1e-9);
  CHECK(std::abs(std::arg(u.eigenvalues[1]) - 0.3) < 1e-9);

  for (int t = 0; t < 20; ++t) {
    const Mat n = rng.normal(rng.index(1, 5));
    CHECK(gap(eig_normal(lin(n), 1234).reconstruct(), n) < 1e-9);
  }
  CHECK_THROWS_AS(eig_normal(lin(mat2(0, 1, 0, 0))), DomainError);
}

TEST_CASE("joint_eigh") {
  const auto j = joint_eigh_matrices<C>({diag({1, 2}), diag({3, 4})}, 1);
  const auto tup = j.tuples();
  REQUIRE(tup.size() == 2);
  CHECK(tup[0] == std::vector<double>{1, 3});
  CHECK(tup[1] == std::vector<double>{2, 4});

  const auto k = joint_eigh_matrices<C>({mat2(2, 1, 1, 2), Mat::Identity(2, 2)}, 2);
  CHECK(std::abs(k.tuples()[0][0] - 1) < 1e-12);
  CHECK(std::abs(k.tuples()[1][0] - 3) < 1e-12);
  CHECK(std::abs(k.tuples()[0][1] - 1) < 1e-12);
  CHECK(std::abs(k.tuples()[1][1] - 1) < 1e-12);

  const Mat q = rotation(0.7);
  const auto rot = joint_eigh_matrices<C>(
      {Mat(q * diag({1, 2}) * q.adjoint()), Mat(q * diag({3, 4}) * q.adjoint())}, 3);
  CHECK(std::abs(rot.tuples()[0][0] - 1) < 1e-9);
  CHECK(std::abs(rot.tuples()[0][1] - 3) < 1e-9);
  CHECK(std::abs(rot.tuples()[1][0] - 2) < 1e-9);
  CHECK(std::abs(rot.tuples()[1][1] - 4) < 1e-9);

  CHECK_THROWS_AS(joint_eigh_matrices<C>({mat2(1, 0, 0, 2), mat2(0, 1, 1, 0)}, 4), DomainError);
}

TEST_CASE("joint_eigh with degenerate clusters") {
  Sampler<C> rng(41);
  for (int t = 0; t < 20; ++t) {
    const Mat u = rng.unitary(5);
    const Mat a = u * diag({1, 1, 1, 2, 2}) * u.adjoint();
    const Mat b = u * diag({0, 5, 5, 0, 7}) * u.adjoint();
    const Mat c = u * diag({3, 3, 4, 3, 3}) * u.adjoint();
    const auto j = joint_eigh_matrices<C>({a, b, c}, static_cast<std::uint64_t>(t));
    for (const Mat* m : {&a, &b, &c}) {
      Mat off = j.basis.adjoint() * *m * j.basis;
      off.diagonal().setZero();
      CHECK(off.cwiseAbs().maxCoeff() < 1e-8);
    }
  }
}

TEST_CASE("apply_function") {
  const auto e = apply_function(eigh(lin(diag({0, std::log(2.0)}))), [](C z) { return std::exp(z); });
  CHECK(gap(Mat(e.matrix()), diag({1, 2})) < 1e-14);

  const Mat s = mat2(2, 1, 1, 2);
  const auto d = eigh(lin(s));
  CHECK(gap(Mat(apply_function(d, [](C z) { return z; }).matrix()), s) < 1e-9);
  const Mat root = apply_function(d, [](C z) { return std::sqrt(z); }).matrix();
  CHECK(gap(Mat(root * root), s) < 1e-8);
  const auto rev = eigenvalues(root);
  CHECK(std::abs(rev[0] - 1) < 1e-12);
  CHECK(std::abs(rev[1] - std::sqrt(3.0)) < 1e-12);

  CHECK_THROWS_AS(apply_function(eigh(lin(diag({0, 1}))), [](C z) { return C(1) / z; }), DomainError);
}

TEST_CASE("poly_of_operator") {
  Sampler<C> rng(43);
  const Mat a = rng.hermitian(3);
  CHECK(gap(Mat(poly_of_operator(lin(a), Poly::identity()).matrix()), a) == 0.0);
  CHECK(gap(Mat(poly_of_operator(lin(mat2(2, 1, 1, 2)), univariate({1, 0, 1})).matrix()), mat2(6, 4, 4, 6)) ==
        0.0);
  CHECK(gap(Mat(poly_of_operator(lin(mat2(2, 1, 1, 2)), univariate({5})).matrix()), Mat(5.0 * Mat::Identity(2, 2))) ==
        0.0);

  // independent route: repeated products
  const Poly p = univariate({C(1, 1), 2, C(0, -3), 0.5});
  Mat expect = Mat::Zero(3, 3), power = Mat::Identity(3, 3);
  for (const C c : p.dense_univariate()) {
    expect += c * power;
    power = power * a;
  }
  CHECK(gap(Mat(poly_of_operator(lin(a), p).matrix()), expect) < 1e-12);
}

TEST_CASE("spectral mapping") {
  const auto r = spectral_mapping_check(lin(mat2(2, 1, 1, 2)), univariate({1, 0, 1}), 1e-9);
  CHECK(r.pass);
  REQUIRE(r.expected.size() == 2);
  CHECK(std::abs(r.expected[0] - 2.0) < 1e-12);
  CHECK(std::abs(r.expected[1] - 10.0) < 1e-12);
  CHECK(spectral_mapping_check(lin(mat2(2, 1, 1, 2)), Poly::identity(), 1e-12).pass);
  const auto deg = spectral_mapping_check(lin(diag({-1, 1})), univariate({0, 0, 1}), 1e-12);
  CHECK(deg.pass);
  CHECK(deg.max_residual < 1e-15);
}

TEST_CASE("Gelfand sequence") {
  const auto nil = spectral_radius(lin(mat2(0, 1, 0, 0)), 8);
  for (std::size_t n = 1; n < nil.sequence.size(); ++n) CHECK(nil.sequence[n] == 0.0);

  const auto id = spectral_radius(identity_map(make_space(3)), 8);
  for (double v : id.sequence) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));

  const auto s = spectral_radius(lin(mat2(2, 1, 1, 2)), 5);
  CHECK(std::abs(s.sequence[0] - 3) < 1e-9);
  CHECK(std::abs(s.value - 3) < 1e-9);

  // Non-normal: converges from above.
  const auto j = spectral_radius(lin(mat2(0.5, 1, 0, 0.5)), 400);
  CHECK(j.sequence[0] > j.value);
  CHECK(std::abs(j.value - 0.5) < 0.02);

  // Huge norm must not overflow.
  const auto big = spectral_radius(lin(diag({1e200, 1})), 32);
  CHECK(big.value == doctest::Approx(1e200).epsilon(1e-9));
}

TEST_CASE("Chebyshev interpolation") {
  const auto cube = chebyshev_approx([](double x) { return x * x * x - 2 * x + 1; }, -1.0, 2.0, 5);
  CHECK(cube.grid_sup_error <= 1e-9);
  CHECK(std::abs(poly_eval(cube.poly, {C(1.5)}) - C(1.5 * 1.5 * 1.5 - 3 + 1)) < 1e-9);

  const auto abs20 = chebyshev_approx([](double x) { return std::abs(x); }, -1.0, 1.0, 20);
  CHECK(abs20.grid_sup_error <= 0.05);
  CHECK(abs20.poly.degree() <= 20);

  Sampler<C> rng(47);
  for (int t = 0; t < 10; ++t) {
    const auto a = lin(rng.hermitian_in(4, -1, 1));
    const Mat pa = poly_of_operator(a, abs20.poly).matrix();
    const Mat fa = apply_function(eigh(a), [](C z) { return C(std::abs(z.real())); }).matrix();
    CHECK(sigma_max(pa - fa) <= abs20.grid_sup_error + 1e-6);
  }
  CHECK_THROWS_AS(chebyshev_approx([](double x) { return x; }, 1.0, 1.0, 3), DomainError);
}
