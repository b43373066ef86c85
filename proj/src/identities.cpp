#include "layercalc/identities.hpp"

namespace layercalc {

ResidualReport ResidualReport::judged(std::string name, double residual,
                                      double scale, double tol) {
  ResidualReport r;
  r.identity = std::move(name);
  r.residual = residual;
  r.scale = scale;
  r.tol = tol;
  r.pass = residual <= tol * scale || residual == 0.0;
  return r;
}

ResidualReport ResidualReport::not_applicable(std::string name) {
  ResidualReport r;
  r.identity = std::move(name);
  r.applicable = false;
  r.pass = true;
  return r;
}

std::vector<ResidualReport> check_green(const Problem& p,
                                        const InteriorElement& u, double tol) {
  const Side s = u.side;
  const Side t = opposite(s);
  const QuotientSpace& here = p.interior_space(2, s);
  const QuotientSpace& there = p.interior_space(2, t);

  const Functional m_u = neumann_trace(p, u);
  const Vector extension = here.extend(u.coeffs);
  const Vector f = p.trace(2) * extension;

  const Vector layered = single_layer(p, m_u);
  const InteriorElement d_here = double_layer(p, s, f);
  const InteriorElement d_there = double_layer(p, t, f);

  const double scale = here.norm(u.coeffs);
  const Vector defect_here =
      u.coeffs - (-d_here.coeffs + p.restriction(2, s) * layered);
  const Vector defect_there = d_there.coeffs + p.restriction(2, t) * layered;

  return {ResidualReport::judged("green_reproduction", here.norm(defect_here),
                                 scale, tol),
          ResidualReport::judged("green_annihilation", there.norm(defect_there),
                                 scale, tol)};
}

std::vector<ResidualReport> check_jump(const Problem& p, const Vector& f,
                                       const Functional& g, double tol) {
  std::vector<ResidualReport> out;
  const QuotientSpace& d2 = p.dirichlet_space(2);
  const Space& n2 = p.neumann_space(2);
  const double f_scale = d2.norm(f);
  const double g_scale = n2.norm(g.action);

  // Tr D_omega f + Tr D_comp f = -f.
  {
    const Vector defect = trace_of_double_layer(p, Side::omega, f) +
                          trace_of_double_layer(p, Side::complement, f) + f;
    out.push_back(ResidualReport::judged("jump_double_trace", d2.norm(defect),
                                         f_scale, tol));
  }

  const Vector layered = single_layer(p, g);
  const InteriorElement s_omega(Side::omega,
                                p.restriction(2, Side::omega) * layered);
  const InteriorElement s_comp(Side::complement,
                               p.restriction(2, Side::complement) * layered);

  // M_omega (S g)|_omega + M_comp (S g)|_comp = g.
  {
    const Vector defect = neumann_trace(p, s_omega).action +
                          neumann_trace(p, s_comp).action - g.action;
    out.push_back(ResidualReport::judged("jump_single_neumann", n2.norm(defect),
                                         g_scale, tol));
  }

  // M_omega D_omega f - M_comp D_comp f = 0.
  {
    const Vector defect =
        neumann_trace(p, double_layer(p, Side::omega, f)).action -
        neumann_trace(p, double_layer(p, Side::complement, f)).action;
    out.push_back(ResidualReport::judged("continuity_double_neumann",
                                         n2.norm(defect), f_scale, tol));
  }

  // Tr2^omega (S g)|_omega - Tr2^comp (S g)|_comp = 0, under the
  // factored-trace hypothesis.
  if (p.has_factored_trace(Side::omega) &&
      p.has_factored_trace(Side::complement)) {
    const Vector defect = p.factored_trace(Side::omega) * s_omega.coeffs -
                          p.factored_trace(Side::complement) * s_comp.coeffs;
    out.push_back(ResidualReport::judged("continuity_single_trace",
                                         d2.norm(defect), g_scale, tol));
  } else {
    out.push_back(ResidualReport::not_applicable("continuity_single_trace"));
  }
  return out;
}

std::vector<ResidualReport> check_adjoint(const Problem& p, const Vector& f,
                                          const Vector& phi,
                                          const Functional& g,
                                          const Functional& gamma,
                                          double tol) {
  return check_adjoint(p, adjoint_problem(p), f, phi, g, gamma, tol);
}

std::vector<ResidualReport> check_adjoint(const Problem& p, const Problem& adj,
                                          const Vector& f, const Vector& phi,
                                          const Functional& g,
                                          const Functional& gamma,
                                          double tol) {
  std::vector<ResidualReport> out;
  const double f_n = p.dirichlet_space(2).norm(f);
  const double phi_n = p.dirichlet_space(1).norm(phi);
  const double g_n = p.neumann_space(2).norm(g.action);
  const double gamma_n = p.neumann_space(1).norm(gamma.action);

  // <phi, M D f> = <M* D* phi, f>.
  {
    const Complex lhs =
        pair(phi, neumann_trace(p, double_layer(p, Side::omega, f)));
    const Complex rhs =
        pair(neumann_trace(adj, double_layer(adj, Side::omega, phi)), f);
    const double scale = std::abs(lhs) + std::abs(rhs) + phi_n * f_n;
    out.push_back(ResidualReport::judged("adjoint_neumann_double",
                                         std::abs(lhs - rhs), scale, tol));
  }

  const Vector s_adj_gamma = single_layer(adj, gamma);

  // <gamma, Tr2 S g> = <Tr1 S* gamma, g>.
  {
    const Complex lhs = pair(gamma, Vector(p.trace(2) * single_layer(p, g)));
    const Complex rhs = pair(Vector(adj.trace(2) * s_adj_gamma), g);
    const double scale = std::abs(lhs) + std::abs(rhs) + gamma_n * g_n;
    out.push_back(ResidualReport::judged("adjoint_dirichlet_single",
                                         std::abs(lhs - rhs), scale, tol));
  }

  // <gamma, Tr D_omega f> = <-gamma + M* (S* gamma)|_omega, f>.
  {
    const Complex lhs = pair(gamma, trace_of_double_layer(p, Side::omega, f));
    const InteriorElement restricted(
        Side::omega, adj.restriction(2, Side::omega) * s_adj_gamma);
    const Functional reflected(
        Vector(-gamma.action + neumann_trace(adj, restricted).action));
    const Complex rhs = pair(reflected, f);
    const double scale = std::abs(lhs) + std::abs(rhs) + gamma_n * f_n;
    out.push_back(ResidualReport::judged("adjoint_dirichlet_double",
                                         std::abs(lhs - rhs), scale, tol));
  }
  return out;
}

std::vector<ResidualReport> check_bounds(const Problem& p, int samples,
                                         std::uint64_t seed, double slack) {
  if (samples < 1) throw StructureError("check_bounds: samples must be >= 1");
  Rng rng(seed);
  std::vector<ResidualReport> out;
  out.reserve(3 * static_cast<size_t>(samples));
  const double lambda = p.lambda();
  const QuotientSpace& d2 = p.dirichlet_space(2);
  const Space& n2 = p.neumann_space(2);

  for (int i = 0; i < samples; ++i) {
    const Functional g(random_vector(rng, n2.dim()));
    const Vector f = random_vector(rng, d2.dim());
    const double g_n = n2.norm(g.action);
    const double f_n = d2.norm(f);

    const double s_norm = p.h2().norm(single_layer(p, g));
    out.push_back(ResidualReport::judged("bound_single_layer", s_norm,
                                         g_n / lambda, 1.0 + slack));

    const InteriorElement d_omega = double_layer(p, Side::omega, f);
    out.push_back(ResidualReport::judged(
        "bound_double_layer_omega",
        p.interior_space(2, Side::omega).norm(d_omega.coeffs),
        p.local_form_norm(Side::complement) * f_n / lambda, 1.0 + slack));

    const InteriorElement d_comp = double_layer(p, Side::complement, f);
    out.push_back(ResidualReport::judged(
        "bound_double_layer_comp",
        p.interior_space(2, Side::complement).norm(d_comp.coeffs),
        p.local_form_norm(Side::omega) * f_n / lambda, 1.0 + slack));
  }
  return out;
}

}  // namespace layercalc
