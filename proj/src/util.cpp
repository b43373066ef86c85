#include "layercalc/util.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace layercalc {

Complex random_complex(Rng& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  const double re = n01(rng);
  const double im = n01(rng);
  return Complex(re, im) / std::sqrt(2.0);
}

Vector random_vector(Rng& rng, Index n) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = random_complex(rng);
  return v;
}

Matrix random_matrix(Rng& rng, Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = random_complex(rng);
  return m;
}

Matrix random_hermitian_pd(Rng& rng, Index n, double spread) {
  for (;;) {
    Matrix h = random_matrix(rng, n, n);
    h = ((h + h.adjoint()) / 2.0).eval();
    Matrix g = Matrix::Identity(n, n) + (spread / std::sqrt(double(n))) * h;
    Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() > 1e-6 * es.eigenvalues().maxCoeff()) return g;
    spread *= 0.5;
  }
}

int max_threads() {
  if (const char* env = std::getenv("LAYERCALC_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) return cap;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(Index n, const std::function<void(Index)>& fn) {
  const int workers = std::min<Index>(max_threads(), n);
  if (workers <= 1) {
    for (Index i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<Index> next(0);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (Index i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace layercalc
