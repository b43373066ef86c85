#ifndef LAYERCALC_BVP_HPP
#define LAYERCALC_BVP_HPP

#include "layercalc/identities.hpp"

namespace layercalc {

/// The two boundary restrictions of the layer potentials: the Dirichlet
/// trace of the single layer (N2 -> D2) and the Neumann trace of the double
/// layer (D2 -> N2).
enum class BoundaryKind { single_layer_trace, double_layer_neumann };
const char* boundary_kind_name(BoundaryKind k);

struct BoundaryOperator {
  BoundaryKind kind;
  Matrix matrix;                ///< in D2/N2 action coordinates
  RealVector singular_values;  ///< of the Gram-whitened matrix, descending

  double sigma_min() const { return singular_values(singular_values.size() - 1); }
  double sigma_max() const { return singular_values(0); }
};

/// Assembles the boundary operator column by column by applying the layer
/// potential and its boundary trace to a basis.
BoundaryOperator boundary_operator(const Problem& p, BoundaryKind kind);

struct DirichletSolution {
  InteriorElement u;
  double trace_residual = 0.0;     ///< ||Tr u - f|| in D2
  double interior_residual = 0.0;  ///< trace-free dual norm of the defect
  double stability = 0.0;          ///< ||u|| / ||f||
};

/// Direct variational Dirichlet solve: (Lu)|_side = 0, Tr u = f. Requires
/// the factored trace on the side. Throws SingularSystem with a kernel
/// basis when the solution is not unique.
DirichletSolution solve_dirichlet_direct(const Problem& p, Side side,
                                         const Vector& f);

struct NeumannSolution {
  InteriorElement u;
  int kernel_dim = 0;
  Matrix kernel;           ///< basis of {u : (Lu)|_side = 0, M u = 0}
  double defect = 0.0;     ///< compatibility defect of the least-squares solve
};

/// Direct variational Neumann solve of B_side(phi|_side, u) = <Tr1 phi, g>
/// in the least-squares sense; reports the solution kernel. Throws
/// InconsistentSystem when no solution exists.
NeumannSolution solve_neumann_direct(const Problem& p, Side side,
                                     const Functional& g);

struct LayerSolution {
  InteriorElement u;
  Vector density;            ///< preimage under the boundary operator
  double data_residual = 0;  ///< ||achieved boundary data - requested||
  double stability = 0;      ///< ||u|| / ||data||
};

/// Method of layer potentials: invert the boundary operator for the density
/// and evaluate the potential. Throws NotInvertible when the whitened
/// singular-value gap is below tol_invert.
LayerSolution solve_dirichlet_via_layers(const Problem& p, Side side,
                                         const Vector& f,
                                         double tol_invert = 1e-8);
LayerSolution solve_neumann_via_layers(const Problem& p, Side side,
                                       const Functional& g,
                                       double tol_invert = 1e-8);

/// One direction of the well-posedness <-> invertibility equivalence.
struct EquivalenceReport {
  std::string direction;
  bool applicable = true;            ///< hypothesis met on this instance
  double hypothesis_constant = 0.0;  ///< C0 (or a kernel dimension)
  double conclusion_constant = 0.0;  ///< achieved C1 (or a kernel dimension)
  double bound = 0.0;                ///< theorem bound on the conclusion
  bool consistent = false;
  std::string note;
};

/// Verifies all four equivalence directions numerically with X = H2^Omega:
/// surjectivity -> existence, injectivity -> uniqueness, uniqueness ->
/// injectivity (kernel dimensions), existence -> surjectivity. Reports
/// only; never throws on mathematical failure.
std::vector<EquivalenceReport> verify_equivalence(const Problem& p,
                                                  int samples = 10,
                                                  std::uint64_t seed = 7u);

}  // namespace layercalc

#endif
