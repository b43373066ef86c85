#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "oracles.hpp"
#include "test_common.hpp"

#include "layercalc/bvp.hpp"
#include "layercalc/runner.hpp"

using namespace layercalc;
using namespace testutil;

TEST_CASE("direct dirichlet solve on the interval instance") {
  const Problem p = make_fem(laplace_config());
  const DirichletSolution zero =
      solve_dirichlet_direct(p, Side::omega, cvec({0.0, 0.0}));
  CHECK(zero.u.coeffs.norm() == 0.0);

  const DirichletSolution sol =
      solve_dirichlet_direct(p, Side::omega, cvec({1.0, 0.0}));
  // Nodal interpolant of the affine function with u(1/4)=1, u(3/4)=0.
  const Vector expected = cvec({1.0, 0.75, 0.5, 0.25, 0.0});
  CHECK(rel_err(sol.u.coeffs, expected) < 1e-11);
  CHECK(sol.trace_residual <= 1e-11);
  CHECK(sol.interior_residual <= 1e-10);
  CHECK(sol.stability > 0.0);
}

TEST_CASE("direct dirichlet solve satisfies the defining relation") {
  Rng rng(200);
  const Problem p = make_abstract(200, AbstractDims{5, 4, 3, 3});
  const Vector f = random_vector(rng, p.dirichlet_space(2).dim());
  const DirichletSolution sol = solve_dirichlet_direct(p, Side::omega, f);
  for (int i = 0; i < 20; ++i) {
    // B_omega(phi|_omega, u) = 0 for trace-free phi.
    const Vector coeffs = random_vector(rng, p.trace_free_basis().cols());
    const Vector phi = p.trace_free_basis() * coeffs;
    const Complex value = (p.restriction(1, Side::omega) * phi)
                              .dot(p.local_form(Side::omega) * sol.u.coeffs);
    CHECK(std::abs(value) <= 1e-11 * p.h1().norm(phi) *
                                 p.interior_space(2, Side::omega).norm(sol.u.coeffs) +
                             1e-300);
  }
}

TEST_CASE("neumann solve reports the constant kernel on the interval") {
  const Problem p = make_fem(laplace_config());
  const NeumannSolution sol = solve_neumann_direct(
      p, Side::omega, Functional(Vector::Zero(p.neumann_space(2).dim())));
  CHECK(sol.kernel_dim == 1);
  CHECK(sol.u.coeffs.norm() <= 1e-12);
  // The kernel is spanned by the constant on omega.
  const Vector k = sol.kernel.col(0);
  const Vector normalized = k / k(0);
  CHECK(rel_err(normalized, Vector::Ones(k.size())) < 1e-10);

  // The complement side touches the outer boundary, so its kernel is trivial.
  const NeumannSolution comp = solve_neumann_direct(
      p, Side::complement, Functional(Vector::Zero(p.neumann_space(2).dim())));
  CHECK(comp.kernel_dim == 0);
}

TEST_CASE("neumann solve flags incompatible data") {
  const Problem p = make_fem(laplace_config());
  // Total flux (1,0) does not balance on omega.
  CHECK_THROWS_AS(solve_neumann_direct(p, Side::omega, Functional(cvec({1.0, 0.0}))),
                  InconsistentSystem);
}

TEST_CASE("neumann solve accepts conormal data of actual solutions") {
  const Problem p = make_fem(laplace_config());
  Rng rng(201);
  const Functional h(random_vector(rng, p.neumann_space(2).dim()));
  const Vector field = single_layer(p, h);
  const InteriorElement restricted(Side::omega,
                                   p.restriction(2, Side::omega) * field);
  const Functional g = neumann_trace(p, restricted);
  const NeumannSolution sol = solve_neumann_direct(p, Side::omega, g);
  // The solution differs from S h|_omega by an element of the kernel.
  const Vector diff = sol.u.coeffs - restricted.coeffs;
  const Vector residual =
      p.restriction(1, Side::omega).adjoint() * (p.local_form(Side::omega) * diff);
  CHECK(p.h1().solve_gram(residual).dot(residual).real() <= 1e-18);
}

TEST_CASE("neumann solve on a well-posed abstract instance") {
  Rng rng(202);
  const Problem p = make_abstract(202, AbstractDims{4, 4, 2, 2});
  const Functional g(random_vector(rng, p.neumann_space(2).dim()));
  const NeumannSolution sol = solve_neumann_direct(p, Side::omega, g);
  CHECK(sol.kernel_dim == 0);
  CHECK(sol.defect <= 1e-11 * p.neumann_space(2).norm(g.action));
}

TEST_CASE("boundary operator columns match one-off applications") {
  const Problem p = make_fem(laplace_config());
  const BoundaryOperator tr_s =
      boundary_operator(p, BoundaryKind::single_layer_trace);
  CHECK(rel_err(tr_s.matrix.col(0), cvec({3.0 / 16.0, 1.0 / 16.0})) < 1e-12);
  CHECK(rel_err(tr_s.matrix.col(1), cvec({1.0 / 16.0, 3.0 / 16.0})) < 1e-12);

  Rng rng(203);
  const Problem q = make_abstract(203, AbstractDims{4, 3, 2, 2});
  const BoundaryOperator md =
      boundary_operator(q, BoundaryKind::double_layer_neumann);
  const Vector f = random_vector(rng, q.dirichlet_space(2).dim());
  const Vector applied =
      neumann_trace(q, double_layer(q, Side::omega, f)).action;
  CHECK(rel_err(Vector(md.matrix * f), applied) < 1e-12);
}

TEST_CASE("neumann trace of the double layer is singular on the interval") {
  const Problem p = make_fem(laplace_config());
  const BoundaryOperator md =
      boundary_operator(p, BoundaryKind::double_layer_neumann);
  CHECK(md.sigma_min() <= 1e-12 * md.sigma_max());
  // Kernel direction: traces of constants.
  const Vector constants = cvec({1.0, 1.0});
  CHECK(p.neumann_space(2).norm(Vector(md.matrix * constants)) <=
        1e-12 * md.sigma_max());
  CHECK_THROWS_AS(
      solve_neumann_via_layers(p, Side::omega, Functional(cvec({0.5, -0.5}))),
      NotInvertible);
}

TEST_CASE("dirichlet via layers agrees with the direct solve") {
  const Problem p = make_fem(laplace_config());
  const Vector f = cvec({1.0, 0.0});
  const LayerSolution layered = solve_dirichlet_via_layers(p, Side::omega, f);
  const DirichletSolution direct = solve_dirichlet_direct(p, Side::omega, f);
  CHECK(p.interior_space(2, Side::omega)
            .norm(Vector(layered.u.coeffs - direct.u.coeffs)) <=
        1e-10 * p.interior_space(2, Side::omega).norm(direct.u.coeffs));
  CHECK(layered.data_residual <= 1e-9);

  const LayerSolution zero =
      solve_dirichlet_via_layers(p, Side::omega, cvec({0.0, 0.0}));
  CHECK(zero.u.coeffs.norm() == 0.0);
}

TEST_CASE("cross-method agreement on random instances") {
  Rng rng(204);
  int tested = 0;
  for (std::uint64_t seed = 300; tested < 5; ++seed) {
    const Problem p = make_abstract(seed, AbstractDims{4, 4, 2, 2});
    const BoundaryOperator tr_s =
        boundary_operator(p, BoundaryKind::single_layer_trace);
    const BoundaryOperator md =
        boundary_operator(p, BoundaryKind::double_layer_neumann);
    if (tr_s.sigma_min() < 1e-4 * tr_s.sigma_max() ||
        md.sigma_min() < 1e-4 * md.sigma_max())
      continue;
    ++tested;
    for (int i = 0; i < 10; ++i) {
      const Vector f = random_vector(rng, p.dirichlet_space(2).dim());
      const DirichletSolution direct = solve_dirichlet_direct(p, Side::omega, f);
      const LayerSolution layered = solve_dirichlet_via_layers(p, Side::omega, f);
      CHECK(p.interior_space(2, Side::omega)
                .norm(Vector(layered.u.coeffs - direct.u.coeffs)) <=
            1e-9 * std::max(p.interior_space(2, Side::omega).norm(direct.u.coeffs),
                            1e-300));

      const Functional g(random_vector(rng, p.neumann_space(2).dim()));
      const NeumannSolution direct_n = solve_neumann_direct(p, Side::omega, g);
      const LayerSolution layered_n = solve_neumann_via_layers(p, Side::omega, g);
      CHECK(p.interior_space(2, Side::omega)
                .norm(Vector(layered_n.u.coeffs - direct_n.u.coeffs)) <=
            1e-9 *
                std::max(p.interior_space(2, Side::omega).norm(direct_n.u.coeffs),
                         1e-300));
    }
  }
}

TEST_CASE("duality cross-check of the boundary operators") {
  const Problem p = make_abstract(205, AbstractDims{4, 4, 3, 3});
  const Problem adj = adjoint_problem(p);
  const Matrix md = boundary_operator(p, BoundaryKind::double_layer_neumann).matrix;
  const Matrix md_adj =
      boundary_operator(adj, BoundaryKind::double_layer_neumann).matrix;
  CHECK((md - md_adj.adjoint()).cwiseAbs().maxCoeff() <=
        1e-10 * md.cwiseAbs().maxCoeff());
}

TEST_CASE("equivalence reports on a well-conditioned abstract instance") {
  const Problem p = make_abstract(206, AbstractDims{5, 4, 2, 2});
  const auto reports = verify_equivalence(p, 10, 206);
  REQUIRE(reports.size() == 4);
  for (const auto& r : reports) {
    CAPTURE(r.direction);
    CAPTURE(r.note);
    CHECK(r.consistent);
  }
  // Generic instances have trivial kernels everywhere.
  CHECK(reports[2].hypothesis_constant == 0.0);
  CHECK(reports[2].conclusion_constant == 0.0);
}

TEST_CASE("equivalence reports on the interval instance") {
  const Problem p = make_fem(laplace_config());
  const auto reports = verify_equivalence(p, 6, 207);
  REQUIRE(reports.size() == 4);
  for (const auto& r : reports) {
    CAPTURE(r.direction);
    CHECK(r.consistent);
  }
  // The Neumann direction is vacuous (singular operator)...
  CHECK_FALSE(reports[1].applicable);
  // ...and the kernel dimensions match exactly.
  CHECK(reports[2].hypothesis_constant == 1.0);
  CHECK(reports[2].conclusion_constant == 1.0);
}

TEST_CASE("equivalence reports are consistent on every builtin preset") {
  for (const auto& [name, d] : list_builtin_instances()) {
    CAPTURE(name);
    const Problem p = build_instance(d);
    for (const auto& r : verify_equivalence(p, 5, 208)) {
      CAPTURE(r.direction);
      CAPTURE(r.note);
      CHECK(r.consistent);
    }
  }
}

TEST_CASE("traces must have full row rank") {
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
  parts.tr1.row(1) = parts.tr1.row(0);  // rank deficient
  CHECK_THROWS_AS(Problem(std::move(parts)), DegenerateQuotientError);
}
