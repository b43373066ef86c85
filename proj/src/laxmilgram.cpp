#include "layercalc/laxmilgram.hpp"

namespace layercalc {

InfSupReport inf_sup(const SesquilinearForm& b) {
  if (b.left.dim() != b.right.dim())
    throw StructureError("inf_sup requires equal domain dimensions");
  const Matrix whitened =
      b.left.gram_inv_sqrt() * b.matrix * b.right.gram_inv_sqrt();
  Eigen::BDCSVD<Matrix> svd(whitened);
  const auto& sv = svd.singularValues();
  InfSupReport r;
  r.norm_b = sv(0);
  r.lambda1 = sv(sv.size() - 1);
  r.lambda2 = r.lambda1;  // sigma_min of M and of M^H coincide for square M
  return r;
}

FormSolver::FormSolver(SesquilinearForm b, double tol_coercive_rel)
    : b_(std::move(b)), report_(inf_sup(b_)) {
  if (report_.lambda() < tol_coercive_rel * report_.norm_b)
    throw NotCoercive("form is not coercive at the requested tolerance",
                      report_.lambda(), report_.norm_b);
  lu_.compute(b_.matrix);
}

Vector FormSolver::solve(const Vector& rhs) const {
  if (rhs.size() != b_.left.dim())
    throw ShapeError("solve: right-hand side length mismatch");
  Vector u = lu_.solve(rhs);
  u += lu_.solve(Vector(rhs - b_.matrix * u));
  return u;
}

Vector FormSolver::solve(const Functional& t) const { return solve(t.action); }

Vector solve(const SesquilinearForm& b, const Functional& t,
             double tol_coercive_rel) {
  return FormSolver(b, tol_coercive_rel).solve(t);
}

}  // namespace layercalc
