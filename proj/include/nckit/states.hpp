#pragma once

// Normal positive functionals (all weights are finite at this scale) given by
// block densities, and general linear functionals given by coefficient blocks.

#include <utility>

#include "nckit/algebra.hpp"
#include "nckit/trace.hpp"

namespace nckit {

/// φ(x) = τ(h x) for a positive density h relative to a trace τ.
class StateDensity {
 public:
  StateDensity(AlgebraElement density, TraceSpec trace, const Tolerances& tol = {})
      : h_(std::move(density)), trace_(std::move(trace)) {
    trace_.check(h_.algebra());
    if (!is_positive(h_, tol)) throw Error(ErrorKind::NotPositive, "state density must be positive semidefinite");
    h_ = 0.5 * (h_ + h_.adjoint());
  }

  /// Density relative to the canonical trace.
  explicit StateDensity(AlgebraElement density, const Tolerances& tol = {})
      : StateDensity(density, TraceSpec::can(density.algebra()), tol) {}

  /// The normalised trace τ_can / τ_can(I).
  static StateDensity tracial(const MatrixAlgebra& a) {
    double total = 0.0;
    for (const auto& b : a.blocks()) total += b.dim;
    return StateDensity((1.0 / total) * AlgebraElement::identity(a));
  }

  const MatrixAlgebra& algebra() const noexcept { return h_.algebra(); }
  const AlgebraElement& density() const noexcept { return h_; }
  const TraceSpec& trace() const noexcept { return trace_; }

  /// Density relative to τ_can: w_k h_k.
  AlgebraElement canonical_density() const {
    AlgebraElement c = h_;
    for (std::size_t k = 0; k < c.blocks().size(); ++k) c.block(k) *= trace_.weight(k);
    return c;
  }

  Complex operator()(const AlgebraElement& x) const {
    require_same_algebra(algebra(), x.algebra());
    return trace_(h_ * x);
  }

  /// ‖φ‖ = φ(I).
  double norm() const { return trace_(h_).real(); }

  bool is_normalized(double tol = 1e-12) const { return std::abs(norm() - 1.0) <= tol; }

  bool is_faithful(const Tolerances& tol = {}) const {
    const double cut = tol.supp * operator_norm(h_);
    for (const auto& ev : hermitian_eigenvalues(h_))
      if (ev.size() > 0 && (ev.minCoeff() <= cut || ev.minCoeff() <= 0.0)) return false;
    return true;
  }

  StateDensity scaled(double lambda) const { return StateDensity(lambda * h_, trace_); }

  StateDensity normalized() const {
    const double n = norm();
    if (!(n > 0.0)) throw Error(ErrorKind::InvalidInput, "cannot normalise the zero functional");
    return scaled(1.0 / n);
  }

  /// Same functional, density re-expressed relative to another trace.
  StateDensity relative_to(const TraceSpec& t) const {
    t.check(algebra());
    AlgebraElement c = canonical_density();
    for (std::size_t k = 0; k < c.blocks().size(); ++k) c.block(k) /= t.weight(k);
    return StateDensity(std::move(c), t);
  }

 private:
  AlgebraElement h_;
  TraceSpec trace_;
};

/// φ(x) = Σ_k tr(c_k x_k), no positivity assumed.
class LinearFunctional {
 public:
  explicit LinearFunctional(AlgebraElement coefficients) : c_(std::move(coefficients)) {}

  explicit LinearFunctional(const StateDensity& s) : c_(s.canonical_density()) {}

  const MatrixAlgebra& algebra() const noexcept { return c_.algebra(); }
  const AlgebraElement& coefficients() const noexcept { return c_; }

  Complex operator()(const AlgebraElement& x) const {
    require_same_algebra(algebra(), x.algebra());
    return (c_ * x).trace_can();
  }

  bool is_self_adjoint(const Tolerances& tol = {}) const { return nckit::is_self_adjoint(c_, tol); }

  /// ‖φ‖ = Σ_k ‖c_k‖_1 (trace norms).
  double norm() const {
    double s = 0.0;
    for (const auto& sv : singular_values(c_)) s += sv.sum();
    return s;
  }

 private:
  AlgebraElement c_;
};

inline Complex evaluate(const StateDensity& phi, const AlgebraElement& x) { return phi(x); }
inline Complex evaluate(const LinearFunctional& phi, const AlgebraElement& x) { return phi(x); }

struct FunctionalPolar {
  StateDensity abs;  // |φ|
  AlgebraElement v;  // φ(x) = |φ|(x v)
};

/// Polar decomposition φ = |φ|(· v) from the polar decomposition c = v|c| of
/// the coefficient blocks: tr(c x) = tr(|c| x v).
inline FunctionalPolar functional_polar(const LinearFunctional& phi, const Tolerances& tol = {}) {
  auto pd = polar_decompose(phi.coefficients(), tol);
  return {StateDensity(std::move(pd.abs), tol), std::move(pd.v)};
}

/// Smallest projection P with φ(P) = φ(I).
inline AlgebraElement support(const StateDensity& phi, const Tolerances& tol = {}) {
  return support_projection(phi.density(), tol);
}

/// The positive h with φ(y) = τ(h y) for the requested trace.
inline AlgebraElement dye_segal_density(const StateDensity& phi, const TraceSpec& trace) {
  return phi.relative_to(trace).density();
}

/// ω ≪ φ iff supp(ω) ≤ supp(φ).
inline bool absolutely_continuous(const StateDensity& omega, const StateDensity& phi,
                                  const Tolerances& tol = {}) {
  require_same_algebra(omega.algebra(), phi.algebra());
  const auto po = support(omega, tol);
  const auto pp = support(phi, tol);
  return operator_norm(po * pp - po) <= tol.spec;
}

/// φ ≤ ω as functionals, decided on canonical densities.
inline bool functional_leq(const StateDensity& phi, const StateDensity& omega, const Tolerances& tol = {}) {
  require_same_algebra(omega.algebra(), phi.algebra());
  AlgebraElement diff = omega.canonical_density() - phi.canonical_density();
  const double scale = std::max(operator_norm(omega.canonical_density()), operator_norm(phi.canonical_density()));
  for (const auto& ev : hermitian_eigenvalues(diff))
    if (ev.size() > 0 && ev.minCoeff() < -tol.spec * scale) return false;
  return true;
}

}  // namespace nckit
