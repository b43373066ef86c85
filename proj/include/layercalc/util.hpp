#ifndef LAYERCALC_UTIL_HPP
#define LAYERCALC_UTIL_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <random>

#include <Eigen/Dense>

namespace layercalc {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

using Rng = std::mt19937_64;

/// Standard complex normal sample, variance 1 (1/2 per component).
Complex random_complex(Rng& rng);

Vector random_vector(Rng& rng, Index n);
Matrix random_matrix(Rng& rng, Index rows, Index cols);

/// I + spread * H / sqrt(n) with H a Hermitian standard normal draw;
/// redrawn with shrinking spread until positive definite.
Matrix random_hermitian_pd(Rng& rng, Index n, double spread);

/// Thread cap: LAYERCALC_THREADS if set (>=1), else hardware concurrency.
int max_threads();

/// Runs fn(i) for i in [0, n) on up to max_threads() workers. fn must be
/// pure with respect to shared state other than its own output slot.
void parallel_for(Index n, const std::function<void(Index)>& fn);

}  // namespace layercalc

#endif
