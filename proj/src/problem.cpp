#include "layercalc/problem.hpp"

namespace layercalc {

const char* side_name(Side s) {
  return s == Side::omega ? "omega" : "complement";
}

namespace {

// Gram-orthonormal basis of the null space of a full-row-rank map.
Matrix kernel_basis(const Matrix& map, const Space& geometry) {
  Eigen::JacobiSVD<Matrix> svd(map, Eigen::ComputeFullV);
  const Index rank = map.rows();  // full row rank enforced upstream
  const Index n = map.cols();
  if (rank >= n) return Matrix(n, 0);
  Matrix null = svd.matrixV().rightCols(n - rank);
  // Re-orthonormalize in the Gram inner product: K = N L^{-H} where
  // N^H G N = L L^H.
  Matrix overlap = null.adjoint() * geometry.gram() * null;
  Eigen::LLT<Matrix> llt(((overlap + overlap.adjoint()) / 2.0).eval());
  const Matrix l = llt.matrixL();
  return l.triangularView<Eigen::Lower>()
      .solve(Matrix(null.adjoint()))
      .adjoint();
}

// ker(a) subset of ker(b), decided as rank([a; b]) == rank(a).
bool kernel_contained(const Matrix& a, const Matrix& b) {
  Matrix stacked(a.rows() + b.rows(), a.cols());
  stacked << a, b;
  const double scale = std::max({a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff(), 1e-300});
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod_a(a), cod_s(stacked);
  cod_a.setThreshold(1e-10);
  cod_s.setThreshold(1e-10);
  (void)scale;
  return cod_s.rank() == cod_a.rank();
}

}  // namespace

Problem::Problem(ProblemParts parts, double tol_coercive_rel)
    : parts_(std::move(parts)) {
  const Index n1 = parts_.h1.dim();
  const Index n2 = parts_.h2.dim();
  auto expect_cols = [](const Matrix& m, Index cols, const char* what) {
    if (m.cols() != cols || m.rows() == 0)
      throw ShapeError(std::string("problem: bad shape for ") + what);
  };
  expect_cols(parts_.b, n2, "form matrix");
  if (parts_.b.rows() != n1) throw ShapeError("problem: bad shape for form matrix");
  expect_cols(parts_.r1_omega, n1, "r1_omega");
  expect_cols(parts_.r1_comp, n1, "r1_comp");
  expect_cols(parts_.r2_omega, n2, "r2_omega");
  expect_cols(parts_.r2_comp, n2, "r2_comp");
  expect_cols(parts_.tr1, n1, "tr1");
  expect_cols(parts_.tr2, n2, "tr2");
  if (parts_.b_omega.rows() != parts_.r1_omega.rows() ||
      parts_.b_omega.cols() != parts_.r2_omega.rows())
    throw ShapeError("problem: local form b_omega does not match restrictions");
  if (parts_.b_comp.rows() != parts_.r1_comp.rows() ||
      parts_.b_comp.cols() != parts_.r2_comp.rows())
    throw ShapeError("problem: local form b_comp does not match restrictions");

  solver_ = std::make_shared<const FormSolver>(
      SesquilinearForm(parts_.h1, parts_.h2, parts_.b), tol_coercive_rel);

  h1_omega_ = std::make_shared<const QuotientSpace>(parts_.h1, parts_.r1_omega);
  h1_comp_ = std::make_shared<const QuotientSpace>(parts_.h1, parts_.r1_comp);
  h2_omega_ = std::make_shared<const QuotientSpace>(parts_.h2, parts_.r2_omega);
  h2_comp_ = std::make_shared<const QuotientSpace>(parts_.h2, parts_.r2_comp);
  d1_ = std::make_shared<const QuotientSpace>(parts_.h1, parts_.tr1);
  d2_ = std::make_shared<const QuotientSpace>(parts_.h2, parts_.tr2);
  n1_ = std::make_shared<const Space>(dual_space(*d2_));
  n2_ = std::make_shared<const Space>(dual_space(*d1_));

  // Quotient-whitened operator norms of the local forms.
  {
    Eigen::BDCSVD<Matrix> svd_o(h1_omega_->range().gram_inv_sqrt() *
                                parts_.b_omega *
                                h2_omega_->range().gram_inv_sqrt());
    norm_b_omega_ = svd_o.singularValues()(0);
    Eigen::BDCSVD<Matrix> svd_c(h1_comp_->range().gram_inv_sqrt() *
                                parts_.b_comp *
                                h2_comp_->range().gram_inv_sqrt());
    norm_b_comp_ = svd_c.singularValues()(0);
  }

  ker_tr1_ = kernel_basis(parts_.tr1, parts_.h1);

  side_lift_omega_ = parts_.r1_omega.adjoint() * parts_.b_omega * parts_.r2_omega;
  side_lift_comp_ = parts_.r1_comp.adjoint() * parts_.b_comp * parts_.r2_comp;

  factored_tr2_omega_ = parts_.tr2 * h2_omega_->extension_matrix();
  factored_tr2_comp_ = parts_.tr2 * h2_comp_->extension_matrix();
  has_factored_omega_ = kernel_contained(parts_.r2_omega, parts_.tr2);
  has_factored_comp_ = kernel_contained(parts_.r2_comp, parts_.tr2);
}

const Matrix& Problem::restriction(int j, Side s) const {
  if (j == 1) return s == Side::omega ? parts_.r1_omega : parts_.r1_comp;
  if (j == 2) return s == Side::omega ? parts_.r2_omega : parts_.r2_comp;
  throw StructureError("restriction index must be 1 or 2");
}

const Matrix& Problem::local_form(Side s) const {
  return s == Side::omega ? parts_.b_omega : parts_.b_comp;
}

const Matrix& Problem::trace(int j) const {
  if (j == 1) return parts_.tr1;
  if (j == 2) return parts_.tr2;
  throw StructureError("trace index must be 1 or 2");
}

const QuotientSpace& Problem::interior_space(int j, Side s) const {
  if (j == 1) return s == Side::omega ? *h1_omega_ : *h1_comp_;
  if (j == 2) return s == Side::omega ? *h2_omega_ : *h2_comp_;
  throw StructureError("interior space index must be 1 or 2");
}

const QuotientSpace& Problem::dirichlet_space(int j) const {
  if (j == 1) return *d1_;
  if (j == 2) return *d2_;
  throw StructureError("dirichlet space index must be 1 or 2");
}

const Space& Problem::neumann_space(int j) const {
  if (j == 1) return *n1_;
  if (j == 2) return *n2_;
  throw StructureError("neumann space index must be 1 or 2");
}

double Problem::local_form_norm(Side s) const {
  return s == Side::omega ? norm_b_omega_ : norm_b_comp_;
}

const Matrix& Problem::dirichlet_extension(int j) const {
  return dirichlet_space(j).extension_matrix();
}

bool Problem::has_factored_trace(Side s) const {
  return s == Side::omega ? has_factored_omega_ : has_factored_comp_;
}

const Matrix& Problem::factored_trace(Side s) const {
  return s == Side::omega ? factored_tr2_omega_ : factored_tr2_comp_;
}

const Matrix& Problem::side_lift(Side s) const {
  return s == Side::omega ? side_lift_omega_ : side_lift_comp_;
}

}  // namespace layercalc
