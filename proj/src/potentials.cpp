#include "layercalc/potentials.hpp"

namespace layercalc {

Functional apply_l(const Problem& p, const Vector& u) {
  if (u.size() != p.h2().dim())
    throw ShapeError("apply_l: vector does not live in H2");
  return Functional(p.form().matrix * u);
}

Functional l_indicator(const Problem& p, const InteriorElement& u) {
  const QuotientSpace& space = p.interior_space(2, u.side);
  if (u.coeffs.size() != space.dim())
    throw ShapeError("l_indicator: coefficients do not match the quotient");
  return Functional(p.restriction(1, u.side).adjoint() *
                    (p.local_form(u.side) * u.coeffs));
}

double interior_residual(const Problem& p, const InteriorElement& u) {
  const Functional ind = l_indicator(p, u);
  // The trace-free basis is Gram-orthonormal, so the dual norm of the
  // restricted functional is the Euclidean norm of its coefficients.
  return (p.trace_free_basis().adjoint() * ind.action).norm();
}

Functional neumann_trace(const Problem& p, const InteriorElement& u,
                         const NeumannTraceOptions& opt) {
  const double scale = p.interior_space(2, u.side).norm(u.coeffs);
  const double residual = interior_residual(p, u);
  const double tol = opt.tol_solution_rel * scale;
  if (!opt.force && residual > tol)
    throw NotASolution("neumann_trace: element does not solve the interior "
                       "equation; the trace would be basis dependent",
                       residual, tol);
  // Evaluate on minimum-norm extensions of the D1 basis.
  return Functional(p.dirichlet_extension(1).adjoint() *
                    l_indicator(p, u).action);
}

Vector newton_potential(const Problem& p, const Functional& h) {
  return p.solver().solve(h);
}

Vector single_layer(const Problem& p, const Functional& g) {
  if (g.action.size() != p.dirichlet_space(1).dim())
    throw ShapeError("single_layer: data does not live in N2");
  if (g.action.isZero(0.0)) return Vector::Zero(p.h2().dim());
  return p.solver().solve(Vector(p.trace(1).adjoint() * g.action));
}

InteriorElement double_layer_from_extension(const Problem& p, Side side,
                                            const Vector& extension) {
  if (extension.size() != p.h2().dim())
    throw ShapeError("double_layer: extension does not live in H2");
  const Matrix& restrict = p.restriction(2, side);
  const Vector interior_load = p.side_lift(side) * extension;
  const Vector newton = p.solver().solve(interior_load);
  return InteriorElement(side, restrict * (newton - extension));
}

InteriorElement double_layer(const Problem& p, Side side, const Vector& f) {
  if (f.size() != p.dirichlet_space(2).dim())
    throw ShapeError("double_layer: data does not live in D2");
  if (f.isZero(0.0))
    return InteriorElement(side,
                           Vector::Zero(p.interior_space(2, side).dim()));
  return double_layer_from_extension(p, side, p.dirichlet_space(2).extend(f));
}

Vector trace_of_double_layer_from_extension(const Problem& p, Side side,
                                            const Vector& extension) {
  if (extension.size() != p.h2().dim())
    throw ShapeError("trace_of_double_layer: extension does not live in H2");
  const Vector newton = p.solver().solve(Vector(p.side_lift(side) * extension));
  return p.trace(2) * (newton - extension);
}

Vector trace_of_double_layer(const Problem& p, Side side, const Vector& f) {
  if (f.size() != p.dirichlet_space(2).dim())
    throw ShapeError("trace_of_double_layer: data does not live in D2");
  if (f.isZero(0.0)) return Vector::Zero(p.dirichlet_space(2).dim());
  return trace_of_double_layer_from_extension(p, side,
                                              p.dirichlet_space(2).extend(f));
}

Problem adjoint_problem(const Problem& p) {
  ProblemParts parts{p.h2(),
                     p.h1(),
                     p.form().matrix.adjoint(),
                     p.restriction(2, Side::omega),
                     p.restriction(2, Side::complement),
                     p.restriction(1, Side::omega),
                     p.restriction(1, Side::complement),
                     p.local_form(Side::omega).adjoint(),
                     p.local_form(Side::complement).adjoint(),
                     p.trace(2),
                     p.trace(1),
                     p.basis()};
  if (parts.basis) std::swap(parts.basis->gamma1, parts.basis->gamma2);
  return Problem(std::move(parts));
}

Problem swap_sides(const Problem& p) {
  ProblemParts parts{p.h1(),
                     p.h2(),
                     p.form().matrix,
                     p.restriction(1, Side::complement),
                     p.restriction(1, Side::omega),
                     p.restriction(2, Side::complement),
                     p.restriction(2, Side::omega),
                     p.local_form(Side::complement),
                     p.local_form(Side::omega),
                     p.trace(1),
                     p.trace(2),
                     p.basis()};
  if (parts.basis) std::swap(parts.basis->i_omega, parts.basis->i_comp);
  return Problem(std::move(parts));
}

}  // namespace layercalc
