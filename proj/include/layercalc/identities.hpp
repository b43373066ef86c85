#ifndef LAYERCALC_IDENTITIES_HPP
#define LAYERCALC_IDENTITIES_HPP

#include <string>
#include <vector>

#include "layercalc/potentials.hpp"

namespace layercalc {

/// One verified identity: the norm of its defect, the scale it is judged
/// against, and the verdict. Functional-valued defects are measured in the
/// dual norm of the space they live in.
struct ResidualReport {
  std::string identity;
  double residual = 0.0;
  double scale = 0.0;
  double tol = 0.0;
  bool applicable = true;
  bool pass = false;

  static ResidualReport judged(std::string name, double residual, double scale,
                               double tol);
  static ResidualReport not_applicable(std::string name);
};

/// Green's reproduction formula for a solution u on its side s, and the
/// annihilation of the same layer combination on the opposite side:
///   u = -D_s(Tr2 U) + S(M_s u)|_s,   0 = D_t(Tr2 U) + S(M_s u)|_t
/// with U the minimum-norm extension of u. Throws NotASolution when u does
/// not solve the interior equation.
std::vector<ResidualReport> check_green(const Problem& p,
                                        const InteriorElement& u,
                                        double tol = 1e-9);

/// The four jump and continuity relations for data f in D2, g in N2. The
/// single-layer trace continuity relation is reported as not applicable
/// when the factored-trace hypothesis fails.
std::vector<ResidualReport> check_jump(const Problem& p, const Vector& f,
                                       const Functional& g, double tol = 1e-9);

/// The three adjoint relations, evaluated on both sides independently
/// through the adjoint problem.
std::vector<ResidualReport> check_adjoint(const Problem& p, const Vector& f,
                                          const Vector& phi,
                                          const Functional& g,
                                          const Functional& gamma,
                                          double tol = 1e-10);

/// Same with a precomputed adjoint problem, for batch runs.
std::vector<ResidualReport> check_adjoint(const Problem& p, const Problem& adj,
                                          const Vector& f, const Vector& phi,
                                          const Functional& g,
                                          const Functional& gamma,
                                          double tol = 1e-10);

/// Norm bounds of the three potentials over `samples` random inputs. For
/// bound reports, residual is the achieved norm and scale the bound; pass
/// allows the given relative slack.
std::vector<ResidualReport> check_bounds(const Problem& p, int samples,
                                         std::uint64_t seed,
                                         double slack = 1e-9);

}  // namespace layercalc

#endif
