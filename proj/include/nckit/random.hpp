#pragma once

// Seeded random model used by the verification suite and the tests:
//   elements: independent standard Gaussian real and imaginary parts;
//   faithful states: h = g*g + εI per block (ε = 1e-3), normalised to τ_can(h) = 1.

#include <cstdint>
#include <initializer_list>
#include <random>

#include "nckit/algebra.hpp"
#include "nckit/states.hpp"

namespace nckit {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::initializer_list<std::uint64_t> seeds) {
    std::seed_seq seq(seeds.begin(), seeds.end());
    engine_.seed(seq);
  }

  double normal() { return normal_(engine_); }
  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

  Matrix gaussian(Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
      for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = Complex(normal(), normal());
    return m;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

inline AlgebraElement random_element(const MatrixAlgebra& a, Rng& rng) {
  AlgebraElement x(a);
  for (std::size_t k = 0; k < a.block_count(); ++k) x.block(k) = rng.gaussian(a.dim(k), a.dim(k));
  return x;
}

inline AlgebraElement random_hermitian(const MatrixAlgebra& a, Rng& rng) {
  const auto g = random_element(a, rng);
  return 0.5 * (g + g.adjoint());
}

inline AlgebraElement random_positive(const MatrixAlgebra& a, Rng& rng) {
  const auto g = random_element(a, rng);
  auto p = g.adjoint() * g;
  return 0.5 * (p + p.adjoint());
}

/// Haar-like unitary from the QR factorisation of a Gaussian matrix.
inline AlgebraElement random_unitary(const MatrixAlgebra& a, Rng& rng) {
  AlgebraElement u(a);
  for (std::size_t k = 0; k < a.block_count(); ++k) {
    Eigen::HouseholderQR<Matrix> qr(rng.gaussian(a.dim(k), a.dim(k)));
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR();
    for (Eigen::Index i = 0; i < q.cols(); ++i) {
      const Complex d = r(i, i);
      if (std::abs(d) > 0.0) q.col(i) *= d / std::abs(d);
    }
    u.block(k) = q;
  }
  return u;
}

inline constexpr double kFaithfulFloor = 1e-3;

inline StateDensity random_faithful_state(const MatrixAlgebra& a, Rng& rng, double floor = kFaithfulFloor) {
  auto h = random_positive(a, rng) + floor * AlgebraElement::identity(a);
  h *= 1.0 / h.trace_can().real();
  return StateDensity(std::move(h));
}

/// A normalised state of the given rank in every block (rank ≤ n_k).
inline StateDensity random_state_of_rank(const MatrixAlgebra& a, int rank, Rng& rng) {
  AlgebraElement h(a);
  for (std::size_t k = 0; k < a.block_count(); ++k) {
    const int r = std::min(rank, a.dim(k));
    const Matrix g = rng.gaussian(a.dim(k), r);
    h.block(k) = g * g.adjoint();
  }
  h = 0.5 * (h + h.adjoint());
  h *= 1.0 / h.trace_can().real();
  return StateDensity(std::move(h));
}

}  // namespace nckit
