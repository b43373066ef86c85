#ifndef LAYERCALC_SPACE_HPP
#define LAYERCALC_SPACE_HPP

#include <Eigen/Dense>

#include "layercalc/errors.hpp"
#include "layercalc/util.hpp"

namespace layercalc {

/// Finite-dimensional Hilbert space: a dimension plus a Hermitian
/// positive-definite Gram matrix. The inner product is conjugate-linear in
/// the first slot: <u, v> = u^H G v. Gram factorizations are computed once
/// at construction and cached; instances are immutable.
class Space {
public:
  /// Throws NotPositiveDefinite if gram is not Hermitian (to 1e-13 entrywise
  /// relative skew) or its smallest eigenvalue is <= 1e-12 times the largest.
  explicit Space(Matrix gram);

  Index dim() const { return gram_.rows(); }
  const Matrix& gram() const { return gram_; }

  Complex inner(const Vector& u, const Vector& v) const;
  double norm(const Vector& v) const;

  Vector solve_gram(const Vector& rhs) const { return llt_.solve(rhs); }
  Matrix solve_gram(const Matrix& rhs) const { return llt_.solve(rhs); }
  /// G^{-1}, re-Hermitized.
  Matrix gram_inverse() const;

  const Matrix& gram_sqrt() const { return sqrt_; }
  const Matrix& gram_inv_sqrt() const { return inv_sqrt_; }

private:
  Matrix gram_;
  Eigen::LLT<Matrix> llt_;
  Matrix sqrt_;
  Matrix inv_sqrt_;
};

/// Sesquilinear form B(u, v) = u^H M v on left x right, conjugate-linear in
/// the first slot and linear in the second.
struct SesquilinearForm {
  SesquilinearForm(Space left, Space right, Matrix matrix);

  Complex operator()(const Vector& u, const Vector& v) const;

  Space left;
  Space right;
  Matrix matrix;
};

/// Range of a full-row-rank map R out of a parent space, carrying the
/// infimum norm: ||f|| = min{ ||F||_parent : R F = f }. Elements are stored
/// as coordinate vectors in the range; the induced Gram matrix is
/// (R G^{-1} R^H)^{-1} and the minimizer is reproduced by extend().
class QuotientSpace {
public:
  /// Throws DegenerateQuotientError if R is rank deficient (smallest
  /// singular value below 1e-10 times the largest).
  QuotientSpace(Space parent, Matrix surjection);

  Index dim() const { return surjection_.rows(); }
  const Space& parent() const { return parent_; }
  const Matrix& surjection() const { return surjection_; }
  /// The range as a Space under the induced Gram matrix.
  const Space& range() const { return range_; }

  double norm(const Vector& f) const { return range_.norm(f); }

  /// Minimum-norm extension: the unique F with R F = f minimizing
  /// ||F||_parent. Equals extension_matrix() * f.
  Vector extend(const Vector& f) const;
  const Matrix& extension_matrix() const { return extension_; }

private:
  Space parent_;
  Matrix surjection_;
  Space range_;
  Matrix extension_;
};

/// Element of a dual space under the fixed pairing <f, g> = f^H action,
/// conjugate-linear in the first slot.
struct Functional {
  Functional() = default;
  explicit Functional(Vector action) : action(std::move(action)) {}
  Vector action;
};

/// Pairing <f, g> = f^H g.action of a primal vector against a functional.
Complex pair(const Vector& f, const Functional& g);
/// Reversed-slot pairing <g, f> = conj(<f, g>) = g.action^H f.
Complex pair(const Functional& g, const Vector& f);

/// Dual of a space: same dimension, Gram matrix G^{-1}. Action vectors of
/// functionals on the primal space are elements of the dual space, and the
/// dual norm sup_{||f||=1} |<f, g>| is the dual-space norm of the action.
Space dual_space(const Space& s);
Space dual_space(const QuotientSpace& q);

}  // namespace layercalc

#endif
