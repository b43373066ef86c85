#ifndef LAYERCALC_LAXMILGRAM_HPP
#define LAYERCALC_LAXMILGRAM_HPP

#include "layercalc/space.hpp"

namespace layercalc {

/// Two-sided inf-sup data of a form. For a square form both constants
/// coincide with the smallest singular value of the Gram-whitened matrix
/// G_left^{-1/2} M G_right^{-1/2}; norm_b is its largest singular value.
struct InfSupReport {
  double lambda1 = 0.0;  ///< inf over unit v in right of sup over unit u in left
  double lambda2 = 0.0;  ///< inf over unit u in left of sup over unit v in right
  double norm_b = 0.0;   ///< operator norm of the form

  double lambda() const { return std::min(lambda1, lambda2); }
};

/// Requires equal domain dimensions (structural error otherwise).
InfSupReport inf_sup(const SesquilinearForm& b);

/// Variational solver for a fixed coercive form: factors the form matrix
/// once (LU with partial pivoting) and serves every solve B(v, u) = <v, T>
/// against the cached factorization. Immutable after construction;
/// concurrent solves are safe.
class FormSolver {
public:
  /// Throws NotCoercive when the measured inf-sup constant is below
  /// tol_coercive_rel * norm_b.
  explicit FormSolver(SesquilinearForm b, double tol_coercive_rel = 1e-10);

  const SesquilinearForm& form() const { return b_; }
  const InfSupReport& report() const { return report_; }
  double lambda() const { return report_.lambda(); }

  /// Unique u with B(v, u) = <v, T> for all v; equivalently M u = T.action.
  /// One step of iterative refinement keeps the residual at roundoff level.
  Vector solve(const Functional& t) const;

  /// Solve against the raw right-hand side vector M u = rhs.
  Vector solve(const Vector& rhs) const;

private:
  SesquilinearForm b_;
  InfSupReport report_;
  Eigen::PartialPivLU<Matrix> lu_;
};

/// One-off convenience wrapper around FormSolver.
Vector solve(const SesquilinearForm& b, const Functional& t,
             double tol_coercive_rel = 1e-10);

}  // namespace layercalc

#endif
