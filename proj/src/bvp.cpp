#include "layercalc/bvp.hpp"

namespace layercalc {

const char* boundary_kind_name(BoundaryKind k) {
  return k == BoundaryKind::single_layer_trace ? "single_layer_trace"
                                               : "double_layer_neumann";
}

BoundaryOperator boundary_operator(const Problem& p, BoundaryKind kind) {
  const QuotientSpace& d1 = p.dirichlet_space(1);
  const QuotientSpace& d2 = p.dirichlet_space(2);
  BoundaryOperator op;
  op.kind = kind;
  Matrix whitened;
  if (kind == BoundaryKind::single_layer_trace) {
    op.matrix.resize(d2.dim(), d1.dim());
    for (Index i = 0; i < d1.dim(); ++i) {
      const Functional g(Vector(Vector::Unit(d1.dim(), i)));
      op.matrix.col(i) = p.trace(2) * single_layer(p, g);
    }
    // Input space N2 carries the inverse D1 Gram.
    whitened = d2.range().gram_sqrt() * op.matrix * d1.range().gram_sqrt();
  } else {
    op.matrix.resize(d1.dim(), d2.dim());
    for (Index i = 0; i < d2.dim(); ++i) {
      const Vector f = Vector::Unit(d2.dim(), i);
      op.matrix.col(i) =
          neumann_trace(p, double_layer(p, Side::omega, f)).action;
    }
    whitened = d1.range().gram_inv_sqrt() * op.matrix * d2.range().gram_inv_sqrt();
  }
  op.singular_values = Eigen::BDCSVD<Matrix>(whitened).singularValues();
  return op;
}

namespace {

// Euclidean-orthonormal basis of the column space of m.
Matrix image_basis(const Matrix& m) {
  if (m.cols() == 0) return Matrix(m.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-12 * sv(0)) ++rank;
  return svd.matrixU().leftCols(rank);
}

struct RankedSolve {
  Vector solution;
  Matrix kernel;
  Vector residual;
};

// Minimum-norm least-squares solve with an explicit kernel basis.
RankedSolve ranked_solve(const Matrix& a, const Vector& rhs,
                         double rank_tol = 1e-10) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rank_tol * sv(0)) ++rank;
  const Matrix u = svd.matrixU().leftCols(rank);
  const Matrix v = svd.matrixV().leftCols(rank);
  RankedSolve out;
  out.solution =
      v * (sv.head(rank).cast<Complex>().cwiseInverse().asDiagonal() *
           (u.adjoint() * rhs));
  out.kernel = svd.matrixV().rightCols(a.cols() - rank);
  out.residual = a * out.solution - rhs;
  return out;
}

}  // namespace

DirichletSolution solve_dirichlet_direct(const Problem& p, Side side,
                                         const Vector& f) {
  const QuotientSpace& d2 = p.dirichlet_space(2);
  const QuotientSpace& interior = p.interior_space(2, side);
  if (f.size() != d2.dim())
    throw ShapeError("solve_dirichlet_direct: data does not live in D2");
  if (!p.has_factored_trace(side))
    throw StructureError(
        "solve_dirichlet_direct: the trace does not factor through this side");

  // Test space: restrictions of trace-free fields.
  const Matrix tests =
      image_basis(p.restriction(1, side) * p.trace_free_basis());
  Matrix a(d2.dim() + tests.cols(), interior.dim());
  a << p.factored_trace(side), tests.adjoint() * p.local_form(side);
  Vector rhs = Vector::Zero(a.rows());
  rhs.head(d2.dim()) = f;

  RankedSolve ls = ranked_solve(a, rhs);
  if (ls.kernel.cols() > 0)
    throw SingularSystem("solve_dirichlet_direct: solution is not unique",
                         ls.kernel);

  DirichletSolution out;
  out.u = InteriorElement(side, ls.solution);
  out.trace_residual = d2.norm(Vector(p.factored_trace(side) * ls.solution - f));
  out.interior_residual = interior_residual(p, out.u);
  const double f_norm = d2.norm(f);
  const double defect = ls.residual.norm();
  if (f_norm > 0 && defect > 1e-8 * f_norm)
    throw InconsistentSystem("solve_dirichlet_direct: no solution attains the "
                             "requested boundary data",
                             defect);
  out.stability = f_norm > 0 ? interior.norm(ls.solution) / f_norm : 0.0;
  return out;
}

NeumannSolution solve_neumann_direct(const Problem& p, Side side,
                                     const Functional& g) {
  const Space& n2 = p.neumann_space(2);
  if (g.action.size() != n2.dim())
    throw ShapeError("solve_neumann_direct: data does not live in N2");

  const Matrix a = p.restriction(1, side).adjoint() * p.local_form(side);
  const Vector rhs = p.trace(1).adjoint() * g.action;
  RankedSolve ls = ranked_solve(a, rhs);

  NeumannSolution out;
  out.u = InteriorElement(side, ls.solution);
  out.kernel = ls.kernel;
  out.kernel_dim = static_cast<int>(ls.kernel.cols());
  // Compatibility defect in the H1 dual norm.
  out.defect = std::sqrt(std::max(
      0.0, ls.residual.dot(p.h1().solve_gram(ls.residual)).real()));
  const double scale = n2.norm(g.action);
  if (out.defect > 1e-9 * std::max(scale, 1e-300))
    throw InconsistentSystem(
        "solve_neumann_direct: boundary data is incompatible", out.defect);
  return out;
}

namespace {

void require_invertible(const BoundaryOperator& op, double tol_invert) {
  if (op.sigma_min() < tol_invert * op.sigma_max())
    throw NotInvertible(std::string(boundary_kind_name(op.kind)) +
                            " is numerically singular",
                        op.sigma_min(), op.sigma_max());
}

}  // namespace

LayerSolution solve_dirichlet_via_layers(const Problem& p, Side side,
                                         const Vector& f, double tol_invert) {
  const QuotientSpace& d2 = p.dirichlet_space(2);
  if (f.size() != d2.dim())
    throw ShapeError("solve_dirichlet_via_layers: data does not live in D2");
  const BoundaryOperator op =
      boundary_operator(p, BoundaryKind::single_layer_trace);
  require_invertible(op, tol_invert);

  LayerSolution out;
  out.density = Eigen::PartialPivLU<Matrix>(op.matrix).solve(f);
  const Vector field = single_layer(p, Functional(out.density));
  out.u = InteriorElement(side, p.restriction(2, side) * field);
  out.data_residual = d2.norm(Vector(p.trace(2) * field - f));
  const double f_norm = d2.norm(f);
  out.stability =
      f_norm > 0 ? p.interior_space(2, side).norm(out.u.coeffs) / f_norm : 0.0;
  return out;
}

LayerSolution solve_neumann_via_layers(const Problem& p, Side side,
                                       const Functional& g, double tol_invert) {
  const Space& n2 = p.neumann_space(2);
  if (g.action.size() != n2.dim())
    throw ShapeError("solve_neumann_via_layers: data does not live in N2");
  const BoundaryOperator op =
      boundary_operator(p, BoundaryKind::double_layer_neumann);
  require_invertible(op, tol_invert);

  LayerSolution out;
  out.density = Eigen::PartialPivLU<Matrix>(op.matrix).solve(g.action);
  out.u = double_layer(p, side, out.density);
  out.data_residual =
      n2.norm(Vector(neumann_trace(p, out.u).action - g.action));
  const double g_norm = n2.norm(g.action);
  out.stability =
      g_norm > 0 ? p.interior_space(2, side).norm(out.u.coeffs) / g_norm : 0.0;
  return out;
}

namespace {

int whitened_kernel_dim(const BoundaryOperator& op, double tol = 1e-8) {
  int dim = 0;
  for (Index i = 0; i < op.singular_values.size(); ++i)
    if (op.singular_values(i) <= tol * op.sigma_max()) ++dim;
  return dim;
}

}  // namespace

std::vector<EquivalenceReport> verify_equivalence(const Problem& p,
                                                  int samples,
                                                  std::uint64_t seed) {
  std::vector<EquivalenceReport> out;
  Rng rng(seed);
  const QuotientSpace& d2 = p.dirichlet_space(2);
  const Space& n2 = p.neumann_space(2);
  const double lambda = p.lambda();
  const double nbo = p.local_form_norm(Side::omega);
  const double nbc = p.local_form_norm(Side::complement);

  const BoundaryOperator tr_s =
      boundary_operator(p, BoundaryKind::single_layer_trace);
  const BoundaryOperator md =
      boundary_operator(p, BoundaryKind::double_layer_neumann);

  // Spot check of the Green's formula; the theorems assume it.
  bool green_ok = true;
  {
    const Functional g(random_vector(rng, n2.dim()));
    const InteriorElement u(Side::omega, Vector(p.restriction(2, Side::omega) *
                                                single_layer(p, g)));
    for (const auto& r : check_green(p, u, 1e-6)) green_ok = green_ok && r.pass;
  }

  // (1) Surjectivity of Tr S implies Dirichlet existence with norm control.
  {
    EquivalenceReport r;
    r.direction = "surjective_implies_existence";
    r.applicable = green_ok && tr_s.sigma_min() >= 1e-8 * tr_s.sigma_max();
    if (r.applicable) {
      r.hypothesis_constant = 1.0 / tr_s.sigma_min();
      r.bound = 1.1 * r.hypothesis_constant / lambda;
      bool solved = true;
      double worst = 0.0;
      for (int i = 0; i < samples; ++i) {
        const Vector f = random_vector(rng, d2.dim());
        const LayerSolution sol =
            solve_dirichlet_via_layers(p, Side::omega, f);
        solved = solved && sol.data_residual <= 1e-9 * d2.norm(f);
        worst = std::max(worst, sol.stability);
      }
      r.conclusion_constant = worst;
      r.consistent = solved && worst <= r.bound;
      r.note = green_ok ? "" : "green formula failed";
    } else {
      r.consistent = true;
      r.note = "trace of single layer is singular";
    }
    out.push_back(r);
  }

  // (2) Injectivity of M D implies the Neumann uniqueness bound.
  {
    EquivalenceReport r;
    r.direction = "injective_implies_uniqueness";
    r.applicable = green_ok && md.sigma_min() >= 1e-8 * md.sigma_max();
    if (r.applicable) {
      const double c0 = 1.0 / md.sigma_min();
      r.hypothesis_constant = c0;
      r.bound = 1.1 * (1.0 / lambda + (nbc / lambda) * c0 * (1.0 + nbo / lambda));
      double worst = 0.0;
      for (int i = 0; i < samples; ++i) {
        // Random solutions of the interior equation.
        InteriorElement u;
        if (i % 2 == 0) {
          const Functional g(random_vector(rng, n2.dim()));
          u = InteriorElement(Side::omega, Vector(p.restriction(2, Side::omega) *
                                                  single_layer(p, g)));
        } else {
          u = double_layer(p, Side::omega, random_vector(rng, d2.dim()));
        }
        const double u_norm = p.interior_space(2, Side::omega).norm(u.coeffs);
        const double data_norm = n2.norm(neumann_trace(p, u).action);
        if (data_norm > 0) worst = std::max(worst, u_norm / data_norm);
      }
      r.conclusion_constant = worst;
      r.consistent = worst <= r.bound;
    } else {
      r.consistent = true;
      r.note = "neumann trace of double layer is singular";
    }
    out.push_back(r);
  }

  // (3) Kernel correspondence between M D and the Neumann problems.
  {
    EquivalenceReport r;
    r.direction = "uniqueness_iff_injectivity";
    const int ker_md = whitened_kernel_dim(md);
    auto neumann_kernel = [&](Side s) {
      const Matrix a = p.restriction(1, s).adjoint() * p.local_form(s);
      Eigen::JacobiSVD<Matrix> svd(a);
      const auto& sv = svd.singularValues();
      int dim = 0;
      for (Index i = 0; i < sv.size(); ++i)
        if (sv(i) <= 1e-10 * sv(0)) ++dim;
      return dim + static_cast<int>(a.cols() - sv.size());
    };
    const int ker_omega = neumann_kernel(Side::omega);
    const int ker_comp = neumann_kernel(Side::complement);
    r.hypothesis_constant = ker_md;
    r.conclusion_constant = ker_omega;
    r.bound = ker_comp;
    if (ker_comp == 0)
      r.consistent = ker_md == ker_omega;
    else
      r.consistent = (ker_md == 0) == (ker_omega == 0 && ker_comp == 0);
    r.note = "ker(MD)=" + std::to_string(ker_md) +
             " neumann_kernel(omega)=" + std::to_string(ker_omega) +
             " neumann_kernel(complement)=" + std::to_string(ker_comp);
    out.push_back(r);
  }

  // (4) Paired Dirichlet solvability implies surjectivity of Tr S.
  {
    EquivalenceReport r;
    r.direction = "existence_implies_surjective";
    r.applicable = green_ok && p.has_factored_trace(Side::omega) &&
                   p.has_factored_trace(Side::complement);
    if (r.applicable) {
      bool hypothesis = true;
      bool conclusion = true;
      double c0 = 0.0, c1 = 0.0;
      for (int i = 0; i < samples && hypothesis; ++i) {
        const Vector f = random_vector(rng, d2.dim());
        const double f_norm = d2.norm(f);
        try {
          const DirichletSolution plus =
              solve_dirichlet_direct(p, Side::omega, f);
          const DirichletSolution minus =
              solve_dirichlet_direct(p, Side::complement, f);
          c0 = std::max({c0, plus.stability, minus.stability});
          const Vector g = neumann_trace(p, plus.u).action +
                           neumann_trace(p, minus.u).action;
          conclusion = conclusion &&
                       d2.norm(Vector(tr_s.matrix * g - f)) <= 1e-9 * f_norm;
          c1 = std::max(c1, n2.norm(g) / f_norm);
        } catch (const Error&) {
          hypothesis = false;
        }
      }
      if (!hypothesis) {
        r.applicable = false;
        r.consistent = true;
        r.note = "paired dirichlet problems are not uniquely solvable";
      } else {
        r.hypothesis_constant = c0;
        r.conclusion_constant = c1;
        r.bound = 1.1 * c0 * (nbo + nbc);
        const bool surjective = tr_s.sigma_min() > 1e-8 * tr_s.sigma_max();
        r.consistent = conclusion && surjective && c1 <= r.bound;
      }
    } else {
      r.consistent = true;
      r.note = green_ok ? "factored traces unavailable" : "green formula failed";
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace layercalc
