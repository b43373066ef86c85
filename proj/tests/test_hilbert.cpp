#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "oracles.hpp"
#include "test_common.hpp"

using namespace layercalc;
using namespace testutil;

TEST_CASE("space validates its gram matrix") {
  CHECK_THROWS_AS(Space(Matrix::Zero(2, 2)), NotPositiveDefinite);
  Matrix indefinite(2, 2);
  indefinite << 1.0, 0.0, 0.0, -1.0;
  CHECK_THROWS_AS(Space{indefinite}, NotPositiveDefinite);
  Matrix skewed(2, 2);
  skewed << 1.0, Complex(0.5, 0.2), Complex(0.5, -0.1), 1.0;
  CHECK_THROWS_AS(Space{skewed}, NotPositiveDefinite);
  CHECK_THROWS_AS(Space(Matrix::Identity(2, 3)), ShapeError);
}

TEST_CASE("norms of simple spaces") {
  const Space e2 = euclidean(2);
  CHECK(e2.norm(cvec({3.0, 4.0})) == doctest::Approx(5.0).epsilon(1e-13));
  CHECK(e2.norm(Vector::Zero(2)) == 0.0);
  const Space d = diagonal({2.0, 1.0});
  CHECK(d.norm(cvec({1.0, 0.0})) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
  CHECK_THROWS_AS(e2.norm(Vector::Zero(3)), ShapeError);
}

TEST_CASE("norm is real for complex grams") {
  Rng rng(11);
  const Space s(random_hermitian_pd(rng, 6, 0.4));
  for (int i = 0; i < 20; ++i) {
    const Vector v = random_vector(rng, 6);
    const Complex q = s.inner(v, v);
    CHECK(std::abs(q.imag()) <= 1e-13 * std::abs(q.real()) + 1e-300);
  }
}

TEST_CASE("quotient grams of the documented cases") {
  {
    Matrix r(1, 3);
    r << 1.0, 0.0, 0.0;
    const QuotientSpace q(euclidean(3), r);
    CHECK(std::abs(q.range().gram()(0, 0) - 1.0) < 1e-14);
  }
  {
    Matrix r(1, 2);
    r << 1.0, 1.0;
    const QuotientSpace q(euclidean(2), r);
    CHECK(std::abs(q.range().gram()(0, 0) - 0.5) < 1e-14);
    const Vector f = q.extend(cvec({1.0}));
    CHECK(rel_err(f, cvec({0.5, 0.5})) < 1e-13);
  }
  {
    Matrix r(1, 2);
    r << 1.0, 0.0;
    const QuotientSpace q(diagonal({4.0, 1.0}), r);
    CHECK(std::abs(q.range().gram()(0, 0) - 4.0) < 1e-13);
  }
}

TEST_CASE("degenerate surjections are rejected") {
  Matrix r(2, 3);
  r << 1.0, 1.0, 0.0, 1.0, 1.0, 0.0;
  CHECK_THROWS_AS(QuotientSpace(euclidean(3), r), DegenerateQuotientError);
  CHECK_THROWS_AS(QuotientSpace(euclidean(2), Matrix::Identity(3, 2).transpose().eval()),
                  ShapeError);
}

TEST_CASE("quotient norm matches the constrained least-squares oracle") {
  Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 3 + static_cast<Index>(trial % 6);
    const Index m = 1 + static_cast<Index>(trial % static_cast<int>(n - 1));
    const Space parent(random_hermitian_pd(rng, n, 0.4));
    Matrix r;
    for (;;) {
      r = random_matrix(rng, m, n);
      Eigen::JacobiSVD<Matrix> svd(r);
      if (svd.singularValues()(m - 1) > 1e-6 * svd.singularValues()(0)) break;
    }
    const QuotientSpace q(parent, r);
    const Vector f = random_vector(rng, m);

    const Vector oracle = oracles::constrained_min_norm(parent.gram(), r, f);
    const double oracle_norm = oracles::gram_norm(parent.gram(), oracle);
    CHECK(std::abs(q.norm(f) - oracle_norm) <= 1e-9 * q.norm(f));

    // Extension round-trip and norm attainment.
    const Vector ext = q.extend(f);
    CHECK((r * ext - f).norm() <= 1e-11 * std::max(f.norm(), 1e-300));
    CHECK(std::abs(parent.norm(ext) - q.norm(f)) <= 1e-10 * q.norm(f));
  }
}

TEST_CASE("minimum-norm extension of zero is zero") {
  Matrix r(1, 2);
  r << 1.0, 1.0;
  const QuotientSpace q(euclidean(2), r);
  CHECK(q.extend(Vector::Zero(1)).norm() == 0.0);
}

TEST_CASE("dual space grams") {
  const Space d = diagonal({4.0});
  CHECK(std::abs(dual_space(d).gram()(0, 0) - 0.25) < 1e-15);
  Rng rng(5);
  const Space s(random_hermitian_pd(rng, 5, 0.4));
  const Space dd = dual_space(dual_space(s));
  CHECK((dd.gram() - s.gram()).cwiseAbs().maxCoeff() <
        1e-12 * s.gram().cwiseAbs().maxCoeff());
  const Space e = euclidean(3);
  CHECK((dual_space(e).gram() - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <
        1e-14);
}

TEST_CASE("dual norm agrees with the sup over the unit ball") {
  Rng rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 2 + static_cast<Index>(trial % 7);  // up to dim 8
    const Space s(random_hermitian_pd(rng, n, 0.4));
    const Space dual = dual_space(s);
    const Functional g(random_vector(rng, n));
    const double dual_norm = dual.norm(g.action);

    const double uniform =
        oracles::dual_norm_uniform(s.gram(), g.action, 10000, rng);
    CHECK(uniform <= dual_norm * (1.0 + 1e-9));
    const double reached =
        oracles::dual_norm_sampled(s.gram(), g.action, 10000, rng);
    CHECK(reached >= 0.99 * dual_norm);
    CHECK(reached <= dual_norm * (1.0 + 1e-9));
  }
}

TEST_CASE("pairing conventions") {
  const Functional g(cvec({Complex(1.0, 2.0), Complex(0.0, -1.0)}));
  const Vector f = cvec({Complex(0.0, 1.0), 2.0});
  const Complex forward = pair(f, g);
  CHECK(std::abs(forward - (std::conj(Complex(0.0, 1.0)) * Complex(1.0, 2.0) +
                            2.0 * Complex(0.0, -1.0))) < 1e-15);
  CHECK(std::abs(pair(g, f) - std::conj(forward)) < 1e-15);
}
