#include "layercalc/space.hpp"

#include <cmath>

namespace layercalc {

namespace {

void check_hermitian(const Matrix& g) {
  const double scale = std::max(g.cwiseAbs().maxCoeff(), 1e-300);
  const double skew = (g - g.adjoint()).cwiseAbs().maxCoeff();
  if (skew > 1e-13 * scale)
    throw NotPositiveDefinite("gram matrix is not Hermitian (skew " +
                              std::to_string(skew / scale) + " relative)");
}

}  // namespace

Space::Space(Matrix gram) : gram_(std::move(gram)) {
  if (gram_.rows() == 0 || gram_.rows() != gram_.cols())
    throw ShapeError("gram matrix must be square and nonempty");
  check_hermitian(gram_);
  gram_ = ((gram_ + gram_.adjoint()) / 2.0).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> es(gram_);
  const auto& ev = es.eigenvalues();
  if (ev.minCoeff() <= 1e-12 * ev.maxCoeff())
    throw NotPositiveDefinite("gram matrix is not positive definite");
  const RealVector half = ev.cwiseSqrt();
  sqrt_ = es.eigenvectors() * half.asDiagonal() * es.eigenvectors().adjoint();
  inv_sqrt_ = es.eigenvectors() * half.cwiseInverse().asDiagonal() *
              es.eigenvectors().adjoint();
  llt_.compute(gram_);
}

Complex Space::inner(const Vector& u, const Vector& v) const {
  if (u.size() != dim() || v.size() != dim())
    throw ShapeError("inner product: vector length does not match dimension");
  return u.dot(gram_ * v);  // Eigen's dot conjugates the first argument
}

double Space::norm(const Vector& v) const {
  const Complex q = inner(v, v);
  return std::sqrt(std::max(q.real(), 0.0));
}

Matrix Space::gram_inverse() const {
  Matrix inv = llt_.solve(Matrix::Identity(dim(), dim()));
  return (inv + inv.adjoint()) / 2.0;
}

SesquilinearForm::SesquilinearForm(Space left_, Space right_, Matrix matrix_)
    : left(std::move(left_)), right(std::move(right_)), matrix(std::move(matrix_)) {
  if (matrix.rows() != left.dim() || matrix.cols() != right.dim())
    throw ShapeError("form matrix shape does not match its domains");
}

Complex SesquilinearForm::operator()(const Vector& u, const Vector& v) const {
  if (u.size() != left.dim() || v.size() != right.dim())
    throw ShapeError("form arguments do not match its domains");
  return u.dot(matrix * v);
}

QuotientSpace::QuotientSpace(Space parent, Matrix surjection)
    : parent_(std::move(parent)),
      surjection_(std::move(surjection)),
      range_([&] {
        if (surjection_.cols() != parent_.dim())
          throw ShapeError("surjection source does not match parent space");
        if (surjection_.rows() == 0 || surjection_.rows() > surjection_.cols())
          throw DegenerateQuotientError("surjection cannot have full row rank");
        Eigen::JacobiSVD<Matrix> svd(surjection_);
        const auto& sv = svd.singularValues();
        if (sv(sv.size() - 1) < 1e-10 * sv(0))
          throw DegenerateQuotientError("surjection is rank deficient");
        // Induced Gram of the infimum norm: (R G^{-1} R^H)^{-1}.
        Matrix rgr = surjection_ * parent_.solve_gram(Matrix(surjection_.adjoint()));
        rgr = ((rgr + rgr.adjoint()) / 2.0).eval();
        Matrix gram = Eigen::LLT<Matrix>(rgr).solve(
            Matrix::Identity(rgr.rows(), rgr.cols()));
        return Space((gram + gram.adjoint()) / 2.0);
      }()) {
  extension_ = parent_.solve_gram(Matrix(surjection_.adjoint())) * range_.gram();
}

Vector QuotientSpace::extend(const Vector& f) const {
  if (f.size() != dim())
    throw ShapeError("extend: vector length does not match quotient dimension");
  return extension_ * f;
}

Complex pair(const Vector& f, const Functional& g) {
  if (f.size() != g.action.size())
    throw ShapeError("pairing: functional action length mismatch");
  return f.dot(g.action);
}

Complex pair(const Functional& g, const Vector& f) {
  return std::conj(pair(f, g));
}

Space dual_space(const Space& s) { return Space(s.gram_inverse()); }

Space dual_space(const QuotientSpace& q) { return dual_space(q.range()); }

}  // namespace layercalc
