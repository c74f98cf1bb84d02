#pragma once

// Finite boolean algebras (subsets of A ≤ 64 atoms as bit words), measures on
// them, Radon–Nikodým quotients, weighted and canonical Lp spaces, and the
// embedding into the diagonal matrix algebra ⊕_A M_1(C).

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "nckit/algebra.hpp"
#include "nckit/nc_lp.hpp"
#include "nckit/states.hpp"
#include "nckit/trace.hpp"

namespace nckit {

/// An element of a finite boolean algebra: the set of atoms below it.
struct BoolElement {
  std::uint64_t bits = 0;

  bool contains(int atom) const { return (bits >> atom) & 1u; }
  friend bool operator==(BoolElement, BoolElement) = default;
};

class FiniteBooleanAlgebra {
 public:
  static constexpr int kMaxAtoms = 64;

  explicit FiniteBooleanAlgebra(int atoms) : atoms_(atoms) {
    if (atoms < 1 || atoms > kMaxAtoms)
      throw Error(ErrorKind::InvalidInput, "atom count must lie in [1, 64]");
  }

  int atoms() const noexcept { return atoms_; }
  std::uint64_t mask() const { return atoms_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << atoms_) - 1; }

  BoolElement zero() const { return {0}; }
  BoolElement one() const { return {mask()}; }
  BoolElement atom(int a) const {
    check_atom(a);
    return {std::uint64_t{1} << a};
  }
  BoolElement element(std::uint64_t bits) const {
    if (bits & ~mask()) throw Error(ErrorKind::InvalidInput, "element mentions atoms outside the algebra");
    return {bits};
  }

  BoolElement meet(BoolElement x, BoolElement y) const { return {x.bits & y.bits}; }
  BoolElement join(BoolElement x, BoolElement y) const { return {x.bits | y.bits}; }
  BoolElement complement(BoolElement x) const { return {~x.bits & mask()}; }
  bool leq(BoolElement x, BoolElement y) const { return (x.bits & ~y.bits) == 0; }

  /// Number of elements, 2^A; only meaningful for exhaustive loops (A < 64).
  std::uint64_t size() const { return atoms_ == 64 ? 0 : std::uint64_t{1} << atoms_; }

  void check_atom(int a) const {
    if (a < 0 || a >= atoms_) throw Error(ErrorKind::InvalidInput, "atom index out of range");
  }

 private:
  int atoms_;
};

/// A boolean homomorphism h: B → 2. The nonzero ones on a finite algebra
/// are exactly the evaluations "does x contain atom a".
struct StoneHomomorphism {
  int atom;
  bool operator()(BoolElement x) const { return x.contains(atom); }
};

/// Stone spectrum Hom(B, 2) \ {0}: one homomorphism per atom.
inline std::vector<StoneHomomorphism> stone_spectrum(const FiniteBooleanAlgebra& b) {
  std::vector<StoneHomomorphism> out;
  for (int a = 0; a < b.atoms(); ++a) out.push_back({a});
  return out;
}

/// Stone representation x ↦ x̂ = {h : h(x) = 1}, as a bitset over the spectrum.
inline std::uint64_t stone_represent(const std::vector<StoneHomomorphism>& spectrum, BoolElement x) {
  std::uint64_t out = 0;
  for (std::size_t i = 0; i < spectrum.size(); ++i)
    if (spectrum[i](x)) out |= std::uint64_t{1} << i;
  return out;
}

/// μ(x) = Σ_{a ∈ x} w_a, weights in [0, ∞].
class MeasureVector {
 public:
  explicit MeasureVector(std::vector<double> weights) : w_(std::move(weights)) {
    if (w_.empty() || w_.size() > 64) throw Error(ErrorKind::InvalidInput, "measure needs between 1 and 64 atoms");
    for (double w : w_)
      if (std::isnan(w) || w < 0.0) throw Error(ErrorKind::InvalidInput, "measure weights must lie in [0, inf]");
  }

  int atoms() const { return static_cast<int>(w_.size()); }
  const std::vector<double>& weights() const noexcept { return w_; }
  double weight(int a) const { return w_.at(static_cast<std::size_t>(a)); }

  double operator()(BoolElement x) const {
    double s = 0.0;
    for (int a = 0; a < atoms(); ++a)
      if (x.contains(a)) s += w_[static_cast<std::size_t>(a)];
    return s;
  }

  bool strictly_positive() const {
    return std::all_of(w_.begin(), w_.end(), [](double w) { return w > 0.0; });
  }
  bool finite() const {
    return std::all_of(w_.begin(), w_.end(), [](double w) { return std::isfinite(w); });
  }

  void check(const FiniteBooleanAlgebra& b) const {
    if (atoms() != b.atoms()) throw Error(ErrorKind::AlgebraMismatch, "measure and algebra have different atom counts");
  }

 private:
  std::vector<double> w_;
};

/// dμ₂/dμ₁: f(a) = w₂(a)/w₁(a) on supp μ₁ and 0 elsewhere, so that
/// μ₂(x) = Σ_{a∈x} w₁(a) f(a). Requires μ₂ ≪ μ₁ and finite weights.
inline std::vector<double> rn_quotient(const MeasureVector& mu2, const MeasureVector& mu1) {
  if (mu1.atoms() != mu2.atoms()) throw Error(ErrorKind::AlgebraMismatch, "measures have different atom counts");
  if (!mu1.finite() || !mu2.finite()) throw Error(ErrorKind::InvalidInput, "rn_quotient needs finite weights on atoms");
  std::vector<double> f(static_cast<std::size_t>(mu1.atoms()), 0.0);
  for (int a = 0; a < mu1.atoms(); ++a) {
    const double w1 = mu1.weight(a);
    const double w2 = mu2.weight(a);
    if (w1 == 0.0) {
      if (w2 != 0.0)
        throw Error(ErrorKind::NotAbsolutelyContinuous, "atom " + std::to_string(a) + " is null for mu1 but not mu2");
      continue;
    }
    f[static_cast<std::size_t>(a)] = w2 / w1;
  }
  return f;
}

/// (Σ_a w_a |f(a)|^p)^{1/p}; p = ∞ gives max |f| over supp μ.
inline double lp_b_norm(const std::vector<double>& f, double p, const MeasureVector& mu) {
  require_exponent(p);
  if (static_cast<int>(f.size()) != mu.atoms())
    throw Error(ErrorKind::DimensionMismatch, "function and measure have different atom counts");
  if (std::isinf(p)) {
    double m = 0.0;
    for (int a = 0; a < mu.atoms(); ++a)
      if (mu.weight(a) > 0.0) m = std::max(m, std::abs(f[static_cast<std::size_t>(a)]));
    return m;
  }
  double s = 0.0;
  for (int a = 0; a < mu.atoms(); ++a) {
    const double fa = std::abs(f[static_cast<std::size_t>(a)]);
    if (fa == 0.0 || mu.weight(a) == 0.0) continue;
    s += mu.weight(a) * std::pow(fa, p);
  }
  return std::pow(s, 1.0 / p);
}

// ---------------------------------------------------------------------------
// Canonical (measure-free) Lp(B)

/// The class f μ^γ of pairs (f, μ) under (f₁, μ₁) ~ (f₂, μ₂) iff
/// f₁ = f₂ (μ₂/μ₁)^γ atomwise. It is an element of L_{1/γ}(B).
class CanonicalLpElement {
 public:
  CanonicalLpElement(std::vector<double> f, MeasureVector mu, double gamma)
      : f_(std::move(f)), mu_(std::move(mu)), gamma_(gamma) {
    if (!(gamma > 0.0 && gamma <= 1.0)) throw Error(ErrorKind::BadExponent, "gamma must lie in (0, 1]");
    if (static_cast<int>(f_.size()) != mu_.atoms())
      throw Error(ErrorKind::DimensionMismatch, "function and measure have different atom counts");
    if (!mu_.strictly_positive() || !mu_.finite())
      throw Error(ErrorKind::InvalidInput, "reference measure must be strictly positive and finite on atoms");
  }

  const std::vector<double>& function() const noexcept { return f_; }
  const MeasureVector& measure() const noexcept { return mu_; }
  double gamma() const noexcept { return gamma_; }
  int atoms() const { return mu_.atoms(); }

  /// The same class written against another strictly positive measure.
  CanonicalLpElement rereferenced(const MeasureVector& nu) const {
    if (nu.atoms() != atoms()) throw Error(ErrorKind::AlgebraMismatch, "measures have different atom counts");
    std::vector<double> g(f_.size());
    for (int a = 0; a < atoms(); ++a) {
      const auto i = static_cast<std::size_t>(a);
      g[i] = f_[i] * std::pow(mu_.weight(a) / nu.weight(a), gamma_);
    }
    return CanonicalLpElement(std::move(g), nu, gamma_);
  }

  /// ‖f μ^γ‖ = (Σ_a w_a |f(a)|^{1/γ})^γ.
  double norm() const { return lp_b_norm(f_, 1.0 / gamma_, mu_); }

  bool equivalent(const CanonicalLpElement& other, double tol = 1e-12) const {
    if (other.atoms() != atoms() || other.gamma_ != gamma_) return false;
    const auto o = other.rereferenced(mu_);
    for (std::size_t i = 0; i < f_.size(); ++i)
      if (std::abs(o.f_[i] - f_[i]) > tol * std::max(1.0, std::abs(f_[i]))) return false;
    return true;
  }

 private:
  std::vector<double> f_;
  MeasureVector mu_;
  double gamma_;
};

/// Atomwise maximum of two measures, the default common reference.
inline MeasureVector common_reference(const MeasureVector& a, const MeasureVector& b) {
  if (a.atoms() != b.atoms()) throw Error(ErrorKind::AlgebraMismatch, "measures have different atom counts");
  std::vector<double> w(static_cast<std::size_t>(a.atoms()));
  for (int i = 0; i < a.atoms(); ++i) w[static_cast<std::size_t>(i)] = std::max(a.weight(i), b.weight(i));
  return MeasureVector(std::move(w));
}

namespace canonical {

inline void require_same_gamma(const CanonicalLpElement& x, const CanonicalLpElement& y) {
  if (x.gamma() != y.gamma()) throw Error(ErrorKind::ExponentMismatch, "classes have different exponents");
  if (x.atoms() != y.atoms()) throw Error(ErrorKind::AlgebraMismatch, "classes live on different algebras");
}

template <class Op>
CanonicalLpElement pointwise(const CanonicalLpElement& x, const CanonicalLpElement& y, const MeasureVector& ref, Op op) {
  require_same_gamma(x, y);
  const auto a = x.rereferenced(ref);
  const auto b = y.rereferenced(ref);
  std::vector<double> out(a.function().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(a.function()[i], b.function()[i]);
  return CanonicalLpElement(std::move(out), ref, x.gamma());
}

inline CanonicalLpElement add(const CanonicalLpElement& x, const CanonicalLpElement& y, const MeasureVector& ref) {
  return pointwise(x, y, ref, [](double a, double b) { return a + b; });
}
inline CanonicalLpElement add(const CanonicalLpElement& x, const CanonicalLpElement& y) {
  return add(x, y, common_reference(x.measure(), y.measure()));
}

inline CanonicalLpElement meet(const CanonicalLpElement& x, const CanonicalLpElement& y, const MeasureVector& ref) {
  return pointwise(x, y, ref, [](double a, double b) { return std::min(a, b); });
}
inline CanonicalLpElement meet(const CanonicalLpElement& x, const CanonicalLpElement& y) {
  return meet(x, y, common_reference(x.measure(), y.measure()));
}

inline CanonicalLpElement join(const CanonicalLpElement& x, const CanonicalLpElement& y, const MeasureVector& ref) {
  return pointwise(x, y, ref, [](double a, double b) { return std::max(a, b); });
}
inline CanonicalLpElement join(const CanonicalLpElement& x, const CanonicalLpElement& y) {
  return join(x, y, common_reference(x.measure(), y.measure()));
}

inline CanonicalLpElement scale(const CanonicalLpElement& x, double lambda) {
  std::vector<double> f = x.function();
  for (auto& v : f) v *= lambda;
  return CanonicalLpElement(std::move(f), x.measure(), x.gamma());
}

/// (f₁ μ^{γ₁})(f₂ μ^{γ₂}) = f₁ f₂ μ^{γ₁+γ₂}, defined for γ₁ + γ₂ ≤ 1.
inline CanonicalLpElement multiply(const CanonicalLpElement& x, const CanonicalLpElement& y, const MeasureVector& ref) {
  if (x.atoms() != y.atoms()) throw Error(ErrorKind::AlgebraMismatch, "classes live on different algebras");
  const double g = x.gamma() + y.gamma();
  if (g > 1.0 + 1e-15) throw Error(ErrorKind::ExponentMismatch, "product exponent exceeds 1");
  const auto a = x.rereferenced(ref);
  const auto b = y.rereferenced(ref);
  std::vector<double> out(a.function().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.function()[i] * b.function()[i];
  return CanonicalLpElement(std::move(out), ref, std::min(g, 1.0));
}
inline CanonicalLpElement multiply(const CanonicalLpElement& x, const CanonicalLpElement& y) {
  return multiply(x, y, common_reference(x.measure(), y.measure()));
}

inline double norm(const CanonicalLpElement& x) { return x.norm(); }

}  // namespace canonical

/// ∫ f μ = Σ_a w_a f(a) for a class with γ = 1.
inline double canonical_integral(const CanonicalLpElement& x) {
  if (x.gamma() != 1.0) throw Error(ErrorKind::ExponentMismatch, "the integral is defined on L_1 (gamma = 1)");
  double s = 0.0;
  for (int a = 0; a < x.atoms(); ++a) s += x.measure().weight(a) * x.function()[static_cast<std::size_t>(a)];
  return s;
}

// ---------------------------------------------------------------------------
// Diagonal embedding

/// B ↦ projections of ⊕_A M_1(C); measures ↦ diagonal states.
class DiagonalEmbedding {
 public:
  explicit DiagonalEmbedding(const FiniteBooleanAlgebra& b) : bool_(b), algebra_(MatrixAlgebra::diagonal(b.atoms())) {}

  const MatrixAlgebra& algebra() const noexcept { return algebra_; }

  AlgebraElement projection(BoolElement x) const {
    AlgebraElement p(algebra_);
    for (int a = 0; a < bool_.atoms(); ++a)
      if (x.contains(a)) p.block(static_cast<std::size_t>(a))(0, 0) = 1.0;
    return p;
  }

  AlgebraElement function(const std::vector<double>& f) const {
    if (static_cast<int>(f.size()) != bool_.atoms())
      throw Error(ErrorKind::DimensionMismatch, "function has the wrong number of atoms");
    AlgebraElement e(algebra_);
    for (std::size_t a = 0; a < f.size(); ++a) e.block(a)(0, 0) = f[a];
    return e;
  }

  StateDensity state(const MeasureVector& mu) const {
    mu.check(bool_);
    if (!mu.finite()) throw Error(ErrorKind::InvalidInput, "only finite measures embed as states");
    return StateDensity(function(mu.weights()));
  }

  /// The trace τ_μ(x) = Σ_a w_a x_a; needs a strictly positive finite μ.
  TraceSpec trace(const MeasureVector& mu) const {
    mu.check(bool_);
    return TraceSpec::weighted(algebra_, mu.weights());
  }

  /// Inverse of `state` on diagonal densities.
  MeasureVector measure(const StateDensity& s) const {
    require_same_algebra(algebra_, s.algebra());
    std::vector<double> w;
    const auto h = s.canonical_density();
    for (std::size_t a = 0; a < h.blocks().size(); ++a) w.push_back(h.block(a)(0, 0).real());
    return MeasureVector(std::move(w));
  }

 private:
  FiniteBooleanAlgebra bool_;
  MatrixAlgebra algebra_;
};

inline DiagonalEmbedding embed_diagonal(const FiniteBooleanAlgebra& b) { return DiagonalEmbedding(b); }

}  // namespace nckit
