#ifndef LAYERCALC_PROBLEM_HPP
#define LAYERCALC_PROBLEM_HPP

#include <memory>
#include <optional>
#include <vector>

#include "layercalc/laxmilgram.hpp"
#include "layercalc/space.hpp"

namespace layercalc {

enum class Side { omega, complement };

inline Side opposite(Side s) {
  return s == Side::omega ? Side::complement : Side::omega;
}
const char* side_name(Side s);

/// Index sets of a basis adapted to the domain decomposition: degrees of
/// freedom interior to omega, interior to the complement, and the boundary
/// sets carrying the two traces. Attached to generated problems as metadata.
struct DecomposedBasis {
  std::vector<int> i_omega;
  std::vector<int> i_comp;
  std::vector<int> gamma1;
  std::vector<int> gamma2;
};

/// Raw ingredients of a Problem. Restrictions and traces are matrices acting
/// on coordinates of h1/h2; the local forms are given in the restricted
/// coordinate systems (b_omega pairs r1_omega-coords with r2_omega-coords).
struct ProblemParts {
  Space h1;
  Space h2;
  Matrix b;
  Matrix r1_omega, r1_comp;
  Matrix r2_omega, r2_comp;
  Matrix b_omega, b_comp;
  Matrix tr1, tr2;
  std::optional<DecomposedBasis> basis;
};

/// The full tuple (H1, H2, B, B_omega, B_comp, restrictions, traces) plus
/// every derived object: quotient spaces with infimum norms, Dirichlet trace
/// spaces, Neumann dual spaces, the inf-sup constant, a cached factorization
/// of B, a Gram-orthonormal basis of the trace-free test space, minimum-norm
/// extension operators, and factored boundary traces where they exist.
///
/// Construction checks shapes and ranks only; whether the locality,
/// coercivity and trace-extension conditions hold is reported by
/// verify_conditions, so that negative controls remain constructible.
/// Immutable; all evaluations against one Problem may run concurrently.
class Problem {
public:
  explicit Problem(ProblemParts parts, double tol_coercive_rel = 1e-10);

  const Space& h1() const { return parts_.h1; }
  const Space& h2() const { return parts_.h2; }
  const SesquilinearForm& form() const { return solver_->form(); }
  const FormSolver& solver() const { return *solver_; }

  const Matrix& restriction(int j, Side s) const;
  const Matrix& local_form(Side s) const;
  const Matrix& trace(int j) const;

  /// H_j^Omega / H_j^C with the infimum norm.
  const QuotientSpace& interior_space(int j, Side s) const;
  /// D_j = range of Tr_j with the infimum norm.
  const QuotientSpace& dirichlet_space(int j) const;
  /// N_2 = dual(D_1), N_1 = dual(D_2).
  const Space& neumann_space(int j) const;

  double lambda() const { return solver_->lambda(); }
  double norm_b() const { return solver_->report().norm_b; }
  /// Operator norm of the local form in the quotient geometries.
  double local_form_norm(Side s) const;

  /// Gram-orthonormal basis (columns) of {phi in H1 : Tr1 phi = 0}.
  const Matrix& trace_free_basis() const { return ker_tr1_; }

  /// Minimum-norm extension operators D_j -> H_j.
  const Matrix& dirichlet_extension(int j) const;

  /// True when Tr2 factors through the side restriction, i.e.
  /// ker(restriction) is contained in ker(Tr2).
  bool has_factored_trace(Side s) const;
  /// The factored trace on interior coordinates, Tr2^side. Computed through
  /// the minimum-norm extension; canonical only when has_factored_trace.
  const Matrix& factored_trace(Side s) const;

  const std::optional<DecomposedBasis>& basis() const { return parts_.basis; }

  /// R1_side^H B_side R2_side, the side contribution to B in global coords.
  const Matrix& side_lift(Side s) const;

private:
  ProblemParts parts_;
  std::shared_ptr<const FormSolver> solver_;
  std::shared_ptr<const QuotientSpace> h1_omega_, h1_comp_, h2_omega_, h2_comp_;
  std::shared_ptr<const QuotientSpace> d1_, d2_;
  std::shared_ptr<const Space> n1_, n2_;
  double norm_b_omega_ = 0.0, norm_b_comp_ = 0.0;
  Matrix ker_tr1_;
  Matrix side_lift_omega_, side_lift_comp_;
  Matrix factored_tr2_omega_, factored_tr2_comp_;
  bool has_factored_omega_ = false, has_factored_comp_ = false;
};

/// Element of H_2^Omega or H_2^C in quotient coordinates.
struct InteriorElement {
  InteriorElement() : side(Side::omega) {}
  InteriorElement(Side side, Vector coeffs)
      : side(side), coeffs(std::move(coeffs)) {}
  Side side;
  Vector coeffs;
};

}  // namespace layercalc

#endif
