// Independent numerical oracles for the test suites. Everything here is
// hand-rolled (Gaussian elimination, KKT systems, sampling) or closed-form,
// so results do not flow through the library's factorization paths.
#ifndef LAYERCALC_TEST_ORACLES_HPP
#define LAYERCALC_TEST_ORACLES_HPP

#include <complex>
#include <random>
#include <vector>

#include "layercalc/util.hpp"

namespace oracles {

using layercalc::Complex;
using layercalc::Index;
using layercalc::Matrix;
using layercalc::Rng;
using layercalc::Vector;

// Dense solve by Gaussian elimination with partial pivoting.
inline Vector gauss_solve(Matrix a, Vector b) {
  const Index n = a.rows();
  for (Index k = 0; k < n; ++k) {
    Index pivot = k;
    for (Index i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(pivot, k))) pivot = i;
    if (pivot != k) {
      a.row(k).swap(a.row(pivot));
      std::swap(b(k), b(pivot));
    }
    for (Index i = k + 1; i < n; ++i) {
      const Complex factor = a(i, k) / a(k, k);
      a.row(i).tail(n - k) -= factor * a.row(k).tail(n - k);
      b(i) -= factor * b(k);
    }
  }
  Vector x(n);
  for (Index i = n - 1; i >= 0; --i) {
    Complex acc = b(i);
    for (Index j = i + 1; j < n; ++j) acc -= a(i, j) * x(j);
    x(i) = acc / a(i, i);
  }
  return x;
}

// Minimum-Gram-norm solution of R f = target through the KKT system
//   [G  R^H] [f ]   [0]
//   [R  0  ] [mu] = [t].
inline Vector constrained_min_norm(const Matrix& gram, const Matrix& r,
                                   const Vector& target) {
  const Index n = gram.rows();
  const Index m = r.rows();
  Matrix kkt = Matrix::Zero(n + m, n + m);
  kkt.topLeftCorner(n, n) = gram;
  kkt.topRightCorner(n, m) = r.adjoint();
  kkt.bottomLeftCorner(m, n) = r;
  Vector rhs = Vector::Zero(n + m);
  rhs.tail(m) = target;
  return gauss_solve(kkt, rhs).head(n);
}

inline double gram_norm(const Matrix& gram, const Vector& v) {
  return std::sqrt(std::max(0.0, v.dot(gram * v).real()));
}

// sup_{||f||_G = 1} |f^H action| from random unit samples plus the KKT
// ascent candidate G f = action, solved by elimination. Pure uniform
// sampling cannot come near the supremum in more than a few dimensions, so
// the candidate keeps the lower-bound side of the check meaningful.
inline double dual_norm_sampled(const Matrix& gram, const Vector& action,
                                int samples, Rng& rng) {
  double best = 0.0;
  for (int i = 0; i < samples; ++i) {
    Vector f = layercalc::random_vector(rng, gram.rows());
    const double n = gram_norm(gram, f);
    if (n > 0) best = std::max(best, std::abs(f.dot(action)) / n);
  }
  Vector candidate = gauss_solve(gram, action);
  const double n = gram_norm(gram, candidate);
  if (n > 0) best = std::max(best, std::abs(candidate.dot(action)) / n);
  return best;
}

// Random unit samples only (a strict upper-bound check on the true norm).
inline double dual_norm_uniform(const Matrix& gram, const Vector& action,
                                int samples, Rng& rng) {
  double best = 0.0;
  for (int i = 0; i < samples; ++i) {
    Vector f = layercalc::random_vector(rng, gram.rows());
    const double n = gram_norm(gram, f);
    if (n > 0) best = std::max(best, std::abs(f.dot(action)) / n);
  }
  return best;
}

// Hand-rolled Cholesky factor (lower triangular L with L L^H = G).
inline Matrix cholesky(const Matrix& g) {
  const Index n = g.rows();
  Matrix l = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    Complex diag = g(j, j);
    for (Index k = 0; k < j; ++k) diag -= l(j, k) * std::conj(l(j, k));
    l(j, j) = std::sqrt(std::max(diag.real(), 0.0));
    for (Index i = j + 1; i < n; ++i) {
      Complex acc = g(i, j);
      for (Index k = 0; k < j; ++k) acc -= l(i, k) * std::conj(l(j, k));
      l(i, j) = acc / l(j, j);
    }
  }
  return l;
}

inline Vector solve_lower(const Matrix& l, Vector b) {
  for (Index i = 0; i < l.rows(); ++i) {
    for (Index k = 0; k < i; ++k) b(i) -= l(i, k) * b(k);
    b(i) /= l(i, i);
  }
  return b;
}

struct InfSupOracle {
  double sampled_min = 0.0;   // min over sampled directions; >= true lambda
  double polished = 0.0;      // after inverse iteration; >= true lambda, close
};

// value(v) = ||M v||_{G1^{-1}} / ||v||_{G2}, minimized by sampling and then
// polished with inverse iteration on the pencil M^H G1^{-1} M v = mu G2 v.
// Both returned values are upper bounds of the true inf-sup constant.
inline InfSupOracle inf_sup_sampled(const Matrix& g1, const Matrix& g2,
                                    const Matrix& m, int samples, Rng& rng) {
  const Index n = m.cols();
  const Matrix l1 = cholesky(g1);
  const Matrix l2 = cholesky(g2);
  auto value = [&](const Vector& v) {
    const double numer = solve_lower(l1, m * v).norm();
    const double denom = (l2.adjoint() * v).norm();
    return numer / denom;
  };

  InfSupOracle out;
  out.sampled_min = std::numeric_limits<double>::infinity();
  Vector best;
  const int block = 1024;
  for (int done = 0; done < samples; done += block) {
    const int count = std::min(block, samples - done);
    Matrix v = layercalc::random_matrix(rng, n, count);
    for (int c = 0; c < count; ++c) {
      const Vector col = v.col(c);
      const double val = value(col);
      if (val < out.sampled_min) {
        out.sampled_min = val;
        best = col;
      }
    }
  }

  // v <- (M^H G1^{-1} M)^{-1} G2 v = M^{-1} G1 M^{-H} G2 v.
  Vector v = best / gram_norm(g2, best);
  for (int it = 0; it < 60; ++it) {
    Vector w = g2 * v;
    w = gauss_solve(Matrix(m.adjoint()), w);
    w = g1 * w;
    w = gauss_solve(m, w);
    const double n2 = gram_norm(g2, w);
    if (!(n2 > 0)) break;
    v = w / n2;
  }
  out.polished = std::min(out.sampled_min, value(v));
  return out;
}

// Green's function of -(d/dx)^2 on [0, 1] with zero boundary values.
inline double laplace_green(double x, double y) {
  return x <= y ? x * (1.0 - y) : y * (1.0 - x);
}

struct LaplaceReference {
  Vector trace_single;    // values of S(1,0) at x = 1/4, 3/4
  Vector neumann_omega;   // action of M_omega(S(1,0)|_omega)
  Vector neumann_comp;    // action of M_comp(S(1,0)|_comp)
};

// Brute-force reference for the interval instance with omega = (1/4, 3/4)
// and unit coefficient: hand-assembled P1 stiffness, elimination solve of
// the single-layer equation for g = (1, 0), and direct evaluation of the
// local forms on explicit trace extensions.
inline LaplaceReference laplace_reference(int n_elements) {
  const int n = n_elements;
  const double h = 1.0 / n;
  const Index dim = n - 1;
  Matrix stiffness = Matrix::Zero(dim, dim);
  for (int e = 0; e < n; ++e) {
    const int left = e, right = e + 1;
    auto dof = [&](int node) { return node - 1; };
    if (left >= 1 && left <= n - 1) stiffness(dof(left), dof(left)) += 1.0 / h;
    if (right >= 1 && right <= n - 1) stiffness(dof(right), dof(right)) += 1.0 / h;
    if (left >= 1 && right <= n - 1) {
      stiffness(dof(left), dof(right)) -= 1.0 / h;
      stiffness(dof(right), dof(left)) -= 1.0 / h;
    }
  }
  const int node_a = n / 4, node_b = 3 * n / 4;
  // B(phi, u) = <Tr phi, (1,0)> means the load is the unit at node_a.
  Vector load = Vector::Zero(dim);
  load(node_a - 1) = 1.0;
  const Vector u = gauss_solve(stiffness, load);

  LaplaceReference ref;
  ref.trace_single = Vector(2);
  ref.trace_single << u(node_a - 1), u(node_b - 1);

  // M_side action entries: B_side(phi_k, u) for phi_k the hat at each
  // boundary node (any extension with the right trace works; a nodal hat
  // has trace e_k and is evaluated directly from nodal values).
  auto side_energy = [&](int node_phi, bool omega_side) {
    double acc = 0.0;
    auto u_at = [&](int node) {
      if (node <= 0 || node >= n) return Complex(0.0);
      return u(node - 1);
    };
    for (int e = 0; e < n; ++e) {
      const bool in_omega = e >= node_a && e < node_b;
      if (in_omega != omega_side) continue;
      const double phi_slope =
          (node_phi == e + 1 ? 1.0 : node_phi == e ? -1.0 : 0.0) / h;
      const Complex u_slope = (u_at(e + 1) - u_at(e)) / h;
      acc += (phi_slope * u_slope).real() * h;
    }
    return acc;
  };
  ref.neumann_omega = Vector(2);
  ref.neumann_omega << side_energy(node_a, true), side_energy(node_b, true);
  ref.neumann_comp = Vector(2);
  ref.neumann_comp << side_energy(node_a, false), side_energy(node_b, false);
  return ref;
}

}  // namespace oracles

#endif
