#ifndef LAYERCALC_ERRORS_HPP
#define LAYERCALC_ERRORS_HPP

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace layercalc {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Vector/matrix dimensions do not match the operation.
class ShapeError : public Error {
public:
  using Error::Error;
};

/// Structural precondition violated (unequal space dimensions, missing
/// factored trace, bad configuration values).
class StructureError : public Error {
public:
  using Error::Error;
};

/// Gram matrix failed the Hermitian positive-definite check.
class NotPositiveDefinite : public Error {
public:
  using Error::Error;
};

/// Surjection of a quotient space is rank deficient.
class DegenerateQuotientError : public Error {
public:
  using Error::Error;
};

/// Inf-sup constant below the coercivity tolerance.
class NotCoercive : public Error {
public:
  NotCoercive(const std::string& what, double lambda, double norm_b)
      : Error(what), lambda(lambda), norm_b(norm_b) {}
  double lambda;
  double norm_b;
};

/// An interior element was required to solve the equation but does not.
class NotASolution : public Error {
public:
  NotASolution(const std::string& what, double residual, double tol)
      : Error(what), residual(residual), tol(tol) {}
  double residual;
  double tol;
};

/// A boundary operator is numerically singular.
class NotInvertible : public Error {
public:
  NotInvertible(const std::string& what, double sigma_min, double sigma_max)
      : Error(what), sigma_min(sigma_min), sigma_max(sigma_max) {}
  double sigma_min;
  double sigma_max;
};

/// A constrained solve has a nontrivial kernel; carries a basis of it.
class SingularSystem : public Error {
public:
  SingularSystem(const std::string& what, Eigen::MatrixXcd kernel)
      : Error(what), kernel(std::move(kernel)) {}
  Eigen::MatrixXcd kernel;
};

/// A least-squares system has no solution; carries the compatibility defect.
class InconsistentSystem : public Error {
public:
  InconsistentSystem(const std::string& what, double defect)
      : Error(what), defect(defect) {}
  double defect;
};

/// Random instance generation failed repeatedly.
class RetryExhausted : public Error {
public:
  using Error::Error;
};

/// Bad run configuration (schema violation, missing file, invalid value).
class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace layercalc

#endif
