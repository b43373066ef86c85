#include "layercalc/instances.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace layercalc {

namespace {

Matrix selection_rows(const std::vector<int>& rows, Index n) {
  Matrix s = Matrix::Zero(static_cast<Index>(rows.size()), n);
  for (Index i = 0; i < s.rows(); ++i) s(i, rows[static_cast<size_t>(i)]) = 1.0;
  return s;
}

Matrix submatrix(const Matrix& a, const std::vector<int>& idx) {
  Matrix out(static_cast<Index>(idx.size()), static_cast<Index>(idx.size()));
  for (Index i = 0; i < out.rows(); ++i)
    for (Index j = 0; j < out.cols(); ++j)
      out(i, j) = a(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)]);
  return out;
}

ProblemParts assemble_parts(const Space& h1, const Space& h2, Matrix b_full,
                            Matrix b_omega_full, Matrix b_comp_full,
                            DecomposedBasis basis) {
  std::vector<int> omega_dofs = basis.i_omega;
  std::vector<int> comp_dofs = basis.i_comp;
  // The side coordinate systems keep interior and straddling degrees of
  // freedom; straddlers are everything not interior to either side.
  std::vector<int> straddle;
  {
    std::vector<char> interior(static_cast<size_t>(h1.dim()), 0);
    for (int i : basis.i_omega) interior[static_cast<size_t>(i)] = 1;
    for (int i : basis.i_comp) interior[static_cast<size_t>(i)] = 1;
    for (Index i = 0; i < h1.dim(); ++i)
      if (!interior[static_cast<size_t>(i)]) straddle.push_back(static_cast<int>(i));
  }
  omega_dofs.insert(omega_dofs.end(), straddle.begin(), straddle.end());
  comp_dofs.insert(comp_dofs.end(), straddle.begin(), straddle.end());
  std::sort(omega_dofs.begin(), omega_dofs.end());
  std::sort(comp_dofs.begin(), comp_dofs.end());

  ProblemParts parts{h1,
                     h2,
                     std::move(b_full),
                     selection_rows(omega_dofs, h1.dim()),
                     selection_rows(comp_dofs, h1.dim()),
                     selection_rows(omega_dofs, h2.dim()),
                     selection_rows(comp_dofs, h2.dim()),
                     submatrix(b_omega_full, omega_dofs),
                     submatrix(b_comp_full, comp_dofs),
                     selection_rows(basis.gamma1, h1.dim()),
                     selection_rows(basis.gamma2, h2.dim()),
                     std::move(basis)};
  return parts;
}

}  // namespace

Problem make_abstract(std::uint64_t seed, const AbstractDims& dims) {
  if (dims.n_omega < 1 || dims.n_comp < 1 || dims.n_gamma1 < 1 ||
      dims.n_gamma2 < 1)
    throw StructureError("make_abstract: all block dimensions must be >= 1");
  if (dims.n_gamma1 != dims.n_gamma2)
    throw StructureError(
        "make_abstract: a square form forces equal trace dimensions");
  const int n_omega = dims.n_omega, n_comp = dims.n_comp, n_gamma = dims.n_gamma1;
  const Index n = n_omega + n_comp + n_gamma;

  DecomposedBasis basis;
  for (int i = 0; i < n_omega; ++i) basis.i_omega.push_back(i);
  for (int i = 0; i < n_comp; ++i) basis.i_comp.push_back(n_omega + i);
  for (int i = 0; i < n_gamma; ++i) basis.gamma1.push_back(n_omega + n_comp + i);
  basis.gamma2 = basis.gamma1;

  Rng rng(seed);
  for (int attempt = 0; attempt < 10; ++attempt) {
    const Space h1(random_hermitian_pd(rng, n, 0.2));
    const Space h2(random_hermitian_pd(rng, n, 0.2));

    const Index d_omega = n_omega + n_gamma;
    const Index d_comp = n_comp + n_gamma;
    Matrix b_omega = Matrix::Identity(d_omega, d_omega) +
                     (0.2 / std::sqrt(double(d_omega))) *
                         random_matrix(rng, d_omega, d_omega);
    Matrix b_comp = Matrix::Identity(d_comp, d_comp) +
                    (0.2 / std::sqrt(double(d_comp))) *
                        random_matrix(rng, d_comp, d_comp);

    // Embed the local blocks; the global form is their sum, so locality
    // holds by construction.
    Matrix b_omega_full = Matrix::Zero(n, n);
    Matrix b_comp_full = Matrix::Zero(n, n);
    std::vector<int> omega_dofs = basis.i_omega;
    omega_dofs.insert(omega_dofs.end(), basis.gamma1.begin(), basis.gamma1.end());
    std::vector<int> comp_dofs = basis.i_comp;
    comp_dofs.insert(comp_dofs.end(), basis.gamma1.begin(), basis.gamma1.end());
    std::sort(omega_dofs.begin(), omega_dofs.end());
    std::sort(comp_dofs.begin(), comp_dofs.end());
    for (Index i = 0; i < d_omega; ++i)
      for (Index j = 0; j < d_omega; ++j)
        b_omega_full(omega_dofs[size_t(i)], omega_dofs[size_t(j)]) = b_omega(i, j);
    for (Index i = 0; i < d_comp; ++i)
      for (Index j = 0; j < d_comp; ++j)
        b_comp_full(comp_dofs[size_t(i)], comp_dofs[size_t(j)]) = b_comp(i, j);

    Problem p(assemble_parts(h1, h2, b_omega_full + b_comp_full, b_omega_full,
                             b_comp_full, basis));
    if (p.lambda() < 0.1) continue;
    if (!verify_conditions(p).pass()) continue;
    return p;
  }
  throw RetryExhausted("make_abstract: no coercive draw in 10 attempts");
}

namespace {

// 3-point Gauss rule on [0, 1].
struct Quadrature {
  std::array<double, 3> points;
  std::array<double, 3> weights;
  Quadrature() {
    const double s = std::sqrt(3.0 / 5.0);
    points = {0.5 * (1.0 - s), 0.5, 0.5 * (1.0 + s)};
    weights = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  }
};

// Values of the four cubic Hermite shape derivatives of order `deriv`
// (w.r.t. the physical variable) at reference point xi on an element of
// width h. Shape order: value-left, slope-left, value-right, slope-right.
std::array<double, 4> hermite_deriv(double xi, double h, int deriv) {
  if (deriv == 1) {
    return {(-6.0 * xi + 6.0 * xi * xi) / h,
            1.0 - 4.0 * xi + 3.0 * xi * xi,
            (6.0 * xi - 6.0 * xi * xi) / h,
            -2.0 * xi + 3.0 * xi * xi};
  }
  // Second derivative.
  return {(-6.0 + 12.0 * xi) / (h * h),
          (-4.0 + 6.0 * xi) / h,
          (6.0 - 12.0 * xi) / (h * h),
          (-2.0 + 6.0 * xi) / h};
}

struct MeshChecks {
  int k_lo = 0, k_hi = 0;  // omega boundary in element units
};

MeshChecks check_alignment(const FemConfig& c) {
  if (c.n_elements < 2) throw ConfigError("fem: need at least two elements");
  if (!(c.box_lo < c.box_hi))
    throw ConfigError("fem: empty box");
  if (!(c.box_lo < c.omega_lo && c.omega_lo < c.omega_hi &&
        c.omega_hi < c.box_hi))
    throw ConfigError("fem: omega closure must lie strictly inside the box");
  const double h = (c.box_hi - c.box_lo) / c.n_elements;
  auto to_index = [&](double x) {
    const double k = (x - c.box_lo) / h;
    const double rounded = std::round(k);
    if (std::abs(k - rounded) > 1e-9 * c.n_elements)
      throw ConfigError("fem: omega boundary is not mesh aligned");
    return static_cast<int>(rounded);
  };
  MeshChecks m;
  m.k_lo = to_index(c.omega_lo);
  m.k_hi = to_index(c.omega_hi);
  if (m.k_lo < 1 || m.k_hi > c.n_elements - 1 || m.k_lo >= m.k_hi)
    throw ConfigError("fem: omega must cover at least one interior element");
  return m;
}

Matrix coefficient_for(const FemConfig& c, int element, int k) {
  Matrix a;
  if (c.coefficients.empty()) {
    a = Matrix::Identity(k, k);
  } else if (c.coefficients.size() == 1) {
    a = c.coefficients[0];
  } else {
    const int total = c.dimension == 1 ? c.n_elements : c.n_elements * c.n_elements;
    if (static_cast<int>(c.coefficients.size()) != total)
      throw ConfigError("fem: coefficient count does not match element count");
    a = c.coefficients[static_cast<size_t>(element)];
  }
  if (a.rows() != k || a.cols() != k)
    throw ConfigError("fem: coefficient blocks must be " + std::to_string(k) +
                      "x" + std::to_string(k));
  return a;
}

Problem make_fem_1d(const FemConfig& c, const MeshChecks& mesh) {
  const int n = c.n_elements;
  const int m = c.order;
  const double h = (c.box_hi - c.box_lo) / n;
  const int per_node = m;  // value for m=1; value+slope for m=2
  const Index dim = static_cast<Index>(per_node) * (n - 1);

  // Global dof of (node, local component); interior nodes only.
  auto dof = [&](int node, int comp) { return per_node * (node - 1) + comp; };

  Matrix gram = Matrix::Zero(dim, dim);
  Matrix b_omega_full = Matrix::Zero(dim, dim);
  Matrix b_comp_full = Matrix::Zero(dim, dim);
  const Quadrature quad;

  for (int e = 0; e < n; ++e) {
    const Matrix a = coefficient_for(c, e, 1);
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic> ke =
        Matrix::Zero(2 * per_node, 2 * per_node);
    Matrix ge = Matrix::Zero(2 * per_node, 2 * per_node);
    for (size_t q = 0; q < quad.points.size(); ++q) {
      const double w = quad.weights[q] * h;
      std::array<double, 4> d;
      if (m == 1) {
        const std::array<double, 2> lin = {-1.0 / h, 1.0 / h};
        d = {lin[0], lin[1], 0.0, 0.0};
      } else {
        d = hermite_deriv(quad.points[q], h, 2);
      }
      for (int p = 0; p < 2 * per_node; ++p)
        for (int r = 0; r < 2 * per_node; ++r) {
          ke(p, r) += w * d[size_t(p)] * a(0, 0) * d[size_t(r)];
          ge(p, r) += w * d[size_t(p)] * d[size_t(r)];
        }
    }
    const bool in_omega = e >= mesh.k_lo && e < mesh.k_hi;
    Matrix& target = in_omega ? b_omega_full : b_comp_full;
    for (int p = 0; p < 2 * per_node; ++p) {
      const int node_p = e + p / per_node;
      if (node_p == 0 || node_p == n) continue;
      for (int r = 0; r < 2 * per_node; ++r) {
        const int node_r = e + r / per_node;
        if (node_r == 0 || node_r == n) continue;
        const Index gp = dof(node_p, p % per_node);
        const Index gr = dof(node_r, r % per_node);
        target(gp, gr) += ke(p, r);
        gram(gp, gr) += ge(p, r).real();
      }
    }
  }

  DecomposedBasis basis;
  for (int node = 1; node < n; ++node) {
    if (node == mesh.k_lo || node == mesh.k_hi) continue;
    for (int comp = 0; comp < per_node; ++comp) {
      const int d = dof(node, comp);
      if (node > mesh.k_lo && node < mesh.k_hi)
        basis.i_omega.push_back(d);
      else
        basis.i_comp.push_back(d);
    }
  }
  for (int node : {mesh.k_lo, mesh.k_hi}) {
    if (m == 1) {
      basis.gamma1.push_back(dof(node, 0));
    } else if (c.trace_convention == TraceConvention::whitney) {
      basis.gamma1.push_back(dof(node, 0));
      basis.gamma1.push_back(dof(node, 1));
    } else {
      basis.gamma1.push_back(dof(node, 1));  // top-order: slope only
    }
  }
  basis.gamma2 = basis.gamma1;

  const Space space(gram);
  return Problem(assemble_parts(space, space, b_omega_full + b_comp_full,
                                b_omega_full, b_comp_full, std::move(basis)));
}

Problem make_fem_2d(const FemConfig& c, const MeshChecks& mesh) {
  const int n = c.n_elements;
  const double h = (c.box_hi - c.box_lo) / n;
  const Index dim = static_cast<Index>(n - 1) * (n - 1);
  auto dof = [&](int ix, int iy) { return (iy - 1) * (n - 1) + (ix - 1); };

  Matrix gram = Matrix::Zero(dim, dim);
  Matrix b_omega_full = Matrix::Zero(dim, dim);
  Matrix b_comp_full = Matrix::Zero(dim, dim);
  const Quadrature quad;

  // Bilinear shape gradients at a reference point; local corner order
  // (0,0), (1,0), (0,1), (1,1).
  auto gradients = [&](double xi, double eta) {
    std::array<std::array<double, 2>, 4> g;
    const std::array<double, 2> l = {1.0 - xi, xi};
    const std::array<double, 2> mth = {1.0 - eta, eta};
    const std::array<double, 2> dl = {-1.0, 1.0};
    for (int t = 0; t < 2; ++t)
      for (int s = 0; s < 2; ++s)
        g[size_t(2 * t + s)] = {dl[size_t(s)] * mth[size_t(t)] / h,
                                l[size_t(s)] * dl[size_t(t)] / h};
    return g;
  };

  for (int ey = 0; ey < n; ++ey) {
    for (int ex = 0; ex < n; ++ex) {
      const Matrix a = coefficient_for(c, ey * n + ex, 2);
      Matrix ke = Matrix::Zero(4, 4);
      Matrix ge = Matrix::Zero(4, 4);
      for (size_t qx = 0; qx < quad.points.size(); ++qx) {
        for (size_t qy = 0; qy < quad.points.size(); ++qy) {
          const double w = quad.weights[qx] * quad.weights[qy] * h * h;
          const auto g = gradients(quad.points[qx], quad.points[qy]);
          for (int p = 0; p < 4; ++p)
            for (int r = 0; r < 4; ++r) {
              Complex acc = 0.0;
              for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                  acc += g[size_t(p)][size_t(i)] * a(i, j) * g[size_t(r)][size_t(j)];
              ke(p, r) += w * acc;
              ge(p, r) += w * (g[size_t(p)][0] * g[size_t(r)][0] +
                               g[size_t(p)][1] * g[size_t(r)][1]);
            }
        }
      }
      const bool in_omega = ex >= mesh.k_lo && ex < mesh.k_hi &&
                            ey >= mesh.k_lo && ey < mesh.k_hi;
      Matrix& target = in_omega ? b_omega_full : b_comp_full;
      const std::array<std::array<int, 2>, 4> corners = {
          {{ex, ey}, {ex + 1, ey}, {ex, ey + 1}, {ex + 1, ey + 1}}};
      for (int p = 0; p < 4; ++p) {
        const auto [px, py] = corners[size_t(p)];
        if (px == 0 || px == n || py == 0 || py == n) continue;
        for (int r = 0; r < 4; ++r) {
          const auto [rx, ry] = corners[size_t(r)];
          if (rx == 0 || rx == n || ry == 0 || ry == n) continue;
          target(dof(px, py), dof(rx, ry)) += ke(p, r);
          gram(dof(px, py), dof(rx, ry)) += ge(p, r).real();
        }
      }
    }
  }

  DecomposedBasis basis;
  auto on_ring = [&](int ix, int iy) {
    const bool x_edge = ix == mesh.k_lo || ix == mesh.k_hi;
    const bool y_edge = iy == mesh.k_lo || iy == mesh.k_hi;
    const bool x_in = ix >= mesh.k_lo && ix <= mesh.k_hi;
    const bool y_in = iy >= mesh.k_lo && iy <= mesh.k_hi;
    return (x_edge && y_in) || (y_edge && x_in);
  };
  for (int iy = 1; iy < n; ++iy)
    for (int ix = 1; ix < n; ++ix) {
      if (on_ring(ix, iy)) continue;
      if (ix > mesh.k_lo && ix < mesh.k_hi && iy > mesh.k_lo && iy < mesh.k_hi)
        basis.i_omega.push_back(dof(ix, iy));
      else
        basis.i_comp.push_back(dof(ix, iy));
    }
  // Boundary nodes counterclockwise from the lower-left corner of omega.
  for (int ix = mesh.k_lo; ix <= mesh.k_hi; ++ix)
    basis.gamma1.push_back(dof(ix, mesh.k_lo));
  for (int iy = mesh.k_lo + 1; iy <= mesh.k_hi; ++iy)
    basis.gamma1.push_back(dof(mesh.k_hi, iy));
  for (int ix = mesh.k_hi - 1; ix >= mesh.k_lo; --ix)
    basis.gamma1.push_back(dof(ix, mesh.k_hi));
  for (int iy = mesh.k_hi - 1; iy >= mesh.k_lo + 1; --iy)
    basis.gamma1.push_back(dof(mesh.k_lo, iy));
  basis.gamma2 = basis.gamma1;

  const Space space(gram);
  return Problem(assemble_parts(space, space, b_omega_full + b_comp_full,
                                b_omega_full, b_comp_full, std::move(basis)));
}

}  // namespace

Problem make_fem(const FemConfig& c) {
  if (c.order != 1 && c.order != 2)
    throw ConfigError("fem: order must be 1 or 2");
  if (c.dimension != 1 && c.dimension != 2)
    throw ConfigError("fem: dimension must be 1 or 2");
  if (c.order == 2 && c.dimension != 1)
    throw ConfigError("fem: order 2 is supported only in dimension 1");
  const MeshChecks mesh = check_alignment(c);
  Problem p = c.dimension == 1 ? make_fem_1d(c, mesh) : make_fem_2d(c, mesh);
  if (p.lambda() < 1e-10)
    throw NotCoercive("fem: assembled instance is not coercive", p.lambda(),
                      p.norm_b());
  return p;
}

namespace {

Index rank_of(const Matrix& m) {
  if (m.size() == 0) return 0;
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(m);
  cod.setThreshold(1e-10);
  return cod.rank();
}

Matrix euclidean_kernel(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  Index rank = 0;
  const auto& sv = svd.singularValues();
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-10 * sv(0)) ++rank;
  return svd.matrixV().rightCols(m.cols() - rank);
}

// Condition: whenever Tr phi = Tr psi, the stacked system
// (R_o w, R_c w, Tr w) = (R_o phi, R_c psi, Tr phi) is solvable. Reduces to
// (0, R_c k, 0) lying in the range of the stacked map for every k in
// ker(Tr).
bool trace_extension_holds(const Matrix& r_omega, const Matrix& r_comp,
                           const Matrix& tr) {
  Matrix stacked(r_omega.rows() + r_comp.rows() + tr.rows(), r_omega.cols());
  stacked << r_omega, r_comp, tr;
  const Matrix ker = euclidean_kernel(tr);
  if (ker.cols() == 0) return true;
  Matrix targets = Matrix::Zero(stacked.rows(), ker.cols());
  targets.middleRows(r_omega.rows(), r_comp.rows()) = r_comp * ker;
  Matrix augmented(stacked.rows(), stacked.cols() + targets.cols());
  augmented << stacked, targets;
  return rank_of(augmented) == rank_of(stacked);
}

// ker(R_o) ^ ker(R_c) inside ker(Tr), as a rank identity.
bool factorization_holds(const Matrix& r_omega, const Matrix& r_comp,
                         const Matrix& tr) {
  Matrix restrictions(r_omega.rows() + r_comp.rows(), r_omega.cols());
  restrictions << r_omega, r_comp;
  Matrix with_trace(restrictions.rows() + tr.rows(), r_omega.cols());
  with_trace << restrictions, tr;
  return rank_of(with_trace) == rank_of(restrictions);
}

}  // namespace

ConditionsReport verify_conditions(const Problem& p, double lambda_tol,
                                   double locality_tol) {
  ConditionsReport r;
  r.lambda = p.lambda();
  r.lambda_tol = lambda_tol;
  r.coercive = r.lambda >= lambda_tol;

  const Matrix reassembled =
      p.side_lift(Side::omega) + p.side_lift(Side::complement);
  const double scale = std::max(p.form().matrix.cwiseAbs().maxCoeff(), 1e-300);
  r.locality_residual =
      (p.form().matrix - reassembled).cwiseAbs().maxCoeff() / scale;
  r.locality_tol = locality_tol;
  r.local = r.locality_residual <= locality_tol;

  for (int j = 1; j <= 2; ++j) {
    r.trace_extension[j - 1] =
        trace_extension_holds(p.restriction(j, Side::omega),
                              p.restriction(j, Side::complement), p.trace(j));
    r.trace_factorization[j - 1] =
        factorization_holds(p.restriction(j, Side::omega),
                            p.restriction(j, Side::complement), p.trace(j));
  }
  r.factored_trace_omega = p.has_factored_trace(Side::omega);
  r.factored_trace_comp = p.has_factored_trace(Side::complement);
  return r;
}

}  // namespace layercalc
