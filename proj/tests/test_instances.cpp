#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "oracles.hpp"
#include "test_common.hpp"

using namespace layercalc;
using namespace testutil;

TEST_CASE("abstract instances satisfy all conditions by construction") {
  const Problem p = make_abstract(0, AbstractDims{2, 2, 1, 1});
  const ConditionsReport r = verify_conditions(p);
  CHECK(r.coercive);
  CHECK(r.local);
  CHECK(r.trace_extension[0]);
  CHECK(r.trace_extension[1]);
  CHECK(r.trace_factorization[0]);
  CHECK(r.trace_factorization[1]);
  CHECK(r.pass());
  CHECK(p.lambda() >= 0.1);
}

TEST_CASE("abstract generation is deterministic in the seed") {
  const Problem a = make_abstract(12345, AbstractDims{5, 4, 2, 2});
  const Problem b = make_abstract(12345, AbstractDims{5, 4, 2, 2});
  CHECK((a.form().matrix - b.form().matrix).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.h1().gram() - b.h1().gram()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.h2().gram() - b.h2().gram()).cwiseAbs().maxCoeff() == 0.0);
  const Problem c = make_abstract(12346, AbstractDims{5, 4, 2, 2});
  CHECK((a.form().matrix - c.form().matrix).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("abstract dimensions are validated") {
  CHECK_THROWS_AS(make_abstract(0, AbstractDims{2, 2, 0, 0}), StructureError);
  CHECK_THROWS_AS(make_abstract(0, AbstractDims{0, 2, 1, 1}), StructureError);
  CHECK_THROWS_AS(make_abstract(0, AbstractDims{2, 2, 1, 2}), StructureError);
}

TEST_CASE("interval instance assembles the expected stiffness") {
  const Problem p = make_fem(laplace_config());
  const Index dim = 7;
  REQUIRE(p.h2().dim() == dim);
  Matrix expected = Matrix::Zero(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    expected(i, i) = 16.0;
    if (i > 0) expected(i, i - 1) = -8.0;
    if (i + 1 < dim) expected(i, i + 1) = -8.0;
  }
  CHECK((p.form().matrix - expected).cwiseAbs().maxCoeff() < 1e-12 * 16.0);
  CHECK((p.h2().gram() - expected).cwiseAbs().maxCoeff() < 1e-12 * 16.0);
  CHECK(p.lambda() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(verify_conditions(p).pass());

  REQUIRE(p.basis().has_value());
  CHECK(p.basis()->i_omega == std::vector<int>{2, 3, 4});
  CHECK(p.basis()->i_comp == std::vector<int>{0, 6});
  CHECK(p.basis()->gamma2 == std::vector<int>{1, 5});
}

TEST_CASE("interval single layer matches the brute-force reference") {
  for (int n : {8, 16, 64}) {
    CAPTURE(n);
    const Problem p = make_fem(laplace_config(n));
    const oracles::LaplaceReference ref = oracles::laplace_reference(n);

    const Vector field = single_layer(p, Functional(cvec({1.0, 0.0})));
    const Vector trace = p.trace(2) * field;
    CHECK(rel_err(trace, ref.trace_single) < 1e-11);
    // Frozen closed-form values from the Green function x(1-y).
    CHECK(rel_err(trace, cvec({3.0 / 16.0, 1.0 / 16.0})) < 1e-12);

    const Functional m_omega = neumann_trace(
        p, InteriorElement(Side::omega, p.restriction(2, Side::omega) * field));
    const Functional m_comp = neumann_trace(
        p, InteriorElement(Side::complement,
                           p.restriction(2, Side::complement) * field));
    CHECK(rel_err(m_omega.action, ref.neumann_omega) < 1e-11);
    CHECK(rel_err(m_comp.action, ref.neumann_comp) < 1e-11);
    CHECK(rel_err(m_omega.action, cvec({0.25, -0.25})) < 1e-12);
    CHECK(rel_err(m_comp.action, cvec({0.75, 0.25})) < 1e-12);
  }
}

TEST_CASE("complex coefficients keep the instance coercive") {
  FemConfig c = laplace_config();
  c.coefficients = {Matrix::Constant(1, 1, Complex(1.0, 0.5))};
  const Problem p = make_fem(c);
  CHECK(p.lambda() >= 1.0);
  CHECK(p.lambda() == doctest::Approx(std::sqrt(1.25)).epsilon(1e-10));
  CHECK(verify_conditions(p).pass());
}

TEST_CASE("per-element coefficients are honored") {
  FemConfig c = laplace_config(4);
  c.omega_lo = 0.25;
  c.omega_hi = 0.75;
  c.coefficients.assign(4, Matrix::Identity(1, 1));
  c.coefficients[1] = Matrix::Constant(1, 1, Complex(2.0, 0.0));
  const Problem p = make_fem(c);
  // dof order: nodes 1..3; element 1 spans nodes 1-2 with coefficient 2.
  CHECK(std::abs(p.form().matrix(0, 1) - Complex(-8.0)) < 1e-12);
  CHECK(std::abs(p.form().matrix(0, 0) - Complex(12.0)) < 1e-12);
  CHECK(verify_conditions(p).pass());
}

TEST_CASE("hermite instance with the whitney trace") {
  FemConfig c = laplace_config();
  c.order = 2;
  c.trace_convention = TraceConvention::whitney;
  const Problem p = make_fem(c);
  CHECK(p.dirichlet_space(2).dim() == 4);
  CHECK(p.h2().dim() == 14);
  CHECK(verify_conditions(p).pass());
}

TEST_CASE("hermite top-order trace fails the trace-extension condition") {
  FemConfig c = laplace_config();
  c.order = 2;
  c.trace_convention = TraceConvention::top_order;
  const Problem p = make_fem(c);
  CHECK(p.dirichlet_space(2).dim() == 2);
  const ConditionsReport r = verify_conditions(p);
  CHECK(r.coercive);
  CHECK(r.local);
  // The boundary value degrees of freedom straddle both sides but are not
  // part of the trace, so the mixing construction has no solution.
  CHECK_FALSE(r.trace_extension[1]);
  CHECK_FALSE(r.pass());
  // The trace still factors through either restriction (it reads only
  // straddling degrees of freedom).
  CHECK(p.has_factored_trace(Side::omega));
}

TEST_CASE("square instance in two dimensions") {
  FemConfig c;
  c.dimension = 2;
  c.n_elements = 8;
  const Problem p = make_fem(c);
  CHECK(p.h2().dim() == 49);
  CHECK(p.dirichlet_space(2).dim() == 16);
  CHECK(p.lambda() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(verify_conditions(p).pass());

  REQUIRE(p.basis().has_value());
  // Counterclockwise ring of the subsquare, starting at its lower-left
  // corner: first node is (2,2), i.e. dof (2-1)*7 + (2-1) = 8.
  CHECK(p.basis()->gamma2.front() == 8);
  CHECK(p.basis()->i_omega.size() == 9);
}

TEST_CASE("fem configuration validation") {
  FemConfig c = laplace_config();
  c.omega_lo = 0.3;  // not a multiple of 1/8
  CHECK_THROWS_AS(make_fem(c), ConfigError);
  c = laplace_config();
  c.omega_lo = 0.0;
  CHECK_THROWS_AS(make_fem(c), ConfigError);
  c = laplace_config();
  c.order = 2;
  c.dimension = 2;
  CHECK_THROWS_AS(make_fem(c), ConfigError);
  c = laplace_config();
  c.coefficients.assign(3, Matrix::Identity(1, 1));
  CHECK_THROWS_AS(make_fem(c), ConfigError);
  c = laplace_config();
  c.coefficients = {Matrix::Identity(2, 2)};
  CHECK_THROWS_AS(make_fem(c), ConfigError);
}

TEST_CASE("locality check catches a tampered form") {
  const Problem good = make_fem(laplace_config());
  ProblemParts parts{good.h1(),
                     good.h2(),
                     good.form().matrix,
                     good.restriction(1, Side::omega),
                     good.restriction(1, Side::complement),
                     good.restriction(2, Side::omega),
                     good.restriction(2, Side::complement),
                     good.local_form(Side::omega),
                     good.local_form(Side::complement),
                     good.trace(1),
                     good.trace(2),
                     std::nullopt};
  parts.b(0, 0) += 0.5;
  const Problem bad(parts);
  const ConditionsReport r = verify_conditions(bad);
  CHECK_FALSE(r.local);
  CHECK(r.locality_residual > 1e-3);
  CHECK_FALSE(r.pass());
}

TEST_CASE("conditions pass on a spread of abstract instances") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Problem p =
        make_abstract(seed, AbstractDims{int(3 + seed), int(2 + seed), 2, 2});
    CHECK(verify_conditions(p).pass());
  }
}
