#ifndef LAYERCALC_INSTANCES_HPP
#define LAYERCALC_INSTANCES_HPP

#include <cstdint>
#include <vector>

#include "layercalc/problem.hpp"

namespace layercalc {

struct AbstractDims {
  int n_omega = 2;
  int n_comp = 2;
  int n_gamma1 = 1;
  int n_gamma2 = 1;
};

/// Random abstract instance on coordinate index sets I_omega, I_comp, Gamma.
/// The local forms are perturbed identity blocks and the global form is
/// assembled from them, so the locality and trace-extension conditions hold
/// by construction; draws are retried (up to 10) until the inf-sup constant
/// is at least 0.1. Deterministic in the seed.
Problem make_abstract(std::uint64_t seed, const AbstractDims& dims);

/// Boundary data convention for higher-order operators: only the top-order
/// derivatives, or the full Whitney array of all derivatives of order < m.
enum class TraceConvention { top_order, whitney };

/// Conforming Galerkin instance of the order-2m divergence-form operator on
/// a box with zero outer boundary conditions. Coefficients are constant per
/// element; omega is a mesh-aligned subinterval (1D) or subsquare (2D).
struct FemConfig {
  int order = 1;      ///< m; 2 only in dimension 1
  int dimension = 1;  ///< 1 or 2 (2 only with m = 1)
  double box_lo = 0.0, box_hi = 1.0;
  double omega_lo = 0.25, omega_hi = 0.75;  ///< per direction
  int n_elements = 8;                       ///< per direction
  TraceConvention trace_convention = TraceConvention::top_order;
  /// One matrix (constant coefficient) or one per element, each k x k where
  /// k is the number of order-m derivatives (1 in 1D, d in 2D). Empty means
  /// the identity coefficient.
  std::vector<Matrix> coefficients;
};

Problem make_fem(const FemConfig& config);

/// Pass/fail record for the structural conditions a Problem must satisfy:
/// coercivity, locality of the form, the trace-extension condition (for
/// j = 1, 2), and the factorization of the traces through the restrictions.
struct ConditionsReport {
  double lambda = 0.0;
  double lambda_tol = 1e-6;
  bool coercive = false;

  double locality_residual = 0.0;
  double locality_tol = 1e-12;
  bool local = false;

  bool trace_extension[2] = {false, false};      // j = 1, 2
  bool trace_factorization[2] = {false, false};  // ker R_o ^ ker R_c in ker Tr

  // Hypothesis of the single-layer trace continuity relation: Tr2 factors
  // through each side restriction alone. Informational, not pass-gating.
  bool factored_trace_omega = false;
  bool factored_trace_comp = false;

  bool pass() const {
    return coercive && local && trace_extension[0] && trace_extension[1] &&
           trace_factorization[0] && trace_factorization[1];
  }
};

/// Numerically checks the structural conditions. Reports failures, never
/// throws.
ConditionsReport verify_conditions(const Problem& p, double lambda_tol = 1e-6,
                                   double locality_tol = 1e-12);

}  // namespace layercalc

#endif
