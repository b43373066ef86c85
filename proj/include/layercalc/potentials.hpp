#ifndef LAYERCALC_POTENTIALS_HPP
#define LAYERCALC_POTENTIALS_HPP

#include "layercalc/problem.hpp"

namespace layercalc {

/// L u as a functional on H1: <phi, Lu> = B(phi, u).
Functional apply_l(const Problem& p, const Vector& u);

/// The functional phi -> B_side(phi|_side, u) on all of H1, defined for
/// every interior element. Its action vector is R1^H B_side u.
Functional l_indicator(const Problem& p, const InteriorElement& u);

/// Dual norm of the l_indicator functional restricted to the trace-free
/// test space {phi : Tr1 phi = 0}. Zero certifies (Lu)|_side = 0.
double interior_residual(const Problem& p, const InteriorElement& u);

struct NeumannTraceOptions {
  double tol_solution_rel = 1e-9;  ///< residual allowance relative to ||u||
  bool force = false;              ///< compute the basis-dependent value anyway
};

/// Weak conormal data of a solution: the functional M u in N2 with
/// <Tr1 phi, M u> = B_side(phi|_side, u) for all phi. Throws NotASolution
/// when interior_residual exceeds the tolerance unless forced.
Functional neumann_trace(const Problem& p, const InteriorElement& u,
                         const NeumannTraceOptions& opt = {});

/// Inverse of L through the form: B(phi, P h) = <phi, h> for all phi.
Vector newton_potential(const Problem& p, const Functional& h);

/// Single layer potential of Neumann data g in N2: the unique field in H2
/// with B(phi, S g) = <Tr1 phi, g> for all phi. Side-independent.
Vector single_layer(const Problem& p, const Functional& g);

/// Double layer potential of Dirichlet data f in D2 on the given side:
/// -F|_side + P(L(1_side F))|_side for the minimum-norm extension F of f.
/// Well defined (extension-independent) whenever the trace-extension
/// condition holds.
InteriorElement double_layer(const Problem& p, Side side, const Vector& f);

/// Same, but with the extension F supplied explicitly; exposed so the
/// extension-independence of the construction can be exercised directly.
InteriorElement double_layer_from_extension(const Problem& p, Side side,
                                            const Vector& extension);

/// Boundary trace of the double layer: -Tr2 F + Tr2 P(L(1_side F)).
Vector trace_of_double_layer(const Problem& p, Side side, const Vector& f);
Vector trace_of_double_layer_from_extension(const Problem& p, Side side,
                                            const Vector& extension);

/// Problem for the adjoint form B*(phi, psi) = conj(B(psi, phi)): swaps the
/// two spaces, restrictions and traces and conjugate-transposes every form
/// matrix. An involution; the inf-sup constant is preserved.
Problem adjoint_problem(const Problem& p);

/// Problem with the roles of omega and the complement exchanged.
Problem swap_sides(const Problem& p);

}  // namespace layercalc

#endif
