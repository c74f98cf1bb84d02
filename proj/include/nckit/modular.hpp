#pragma once

// Modular theory on the Hilbert–Schmidt standard form of N = ⊕_k M_{n_k}.
//
// The standard Hilbert space is N itself with ⟨a, b⟩ = Σ_k tr(a_k* b_k);
// N acts by left multiplication, the commutant by right multiplication, and
// J(ξ) = ξ*. The natural cone is the PSD cone. For a state with canonical
// density h, the cyclic vector is h^{1/2} and
//
//   Δ ξ = h ξ h^{-1},   σ_t(x) = h^{it} x h^{-it},   (Dφ:Dψ)_t = h_φ^{it} h_ψ^{-it}.
//
// Off the support of a density, inverses and complex powers act as zero.

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "nckit/algebra.hpp"
#include "nckit/states.hpp"

namespace nckit {

/// Linear map ξ ↦ Σ_terms L ξ R on the Hilbert–Schmidt space of an algebra.
class SuperOperator {
 public:
  struct Term {
    AlgebraElement left;
    AlgebraElement right;
  };

  explicit SuperOperator(MatrixAlgebra a) : algebra_(std::move(a)) {}
  SuperOperator(MatrixAlgebra a, std::vector<Term> terms) : algebra_(std::move(a)), terms_(std::move(terms)) {
    for (const auto& t : terms_) {
      require_same_algebra(algebra_, t.left.algebra());
      require_same_algebra(algebra_, t.right.algebra());
    }
  }

  static SuperOperator sandwich(AlgebraElement left, AlgebraElement right) {
    MatrixAlgebra a = left.algebra();
    return SuperOperator(std::move(a), {{std::move(left), std::move(right)}});
  }

  const MatrixAlgebra& algebra() const noexcept { return algebra_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }

  AlgebraElement operator()(const AlgebraElement& xi) const {
    require_same_algebra(algebra_, xi.algebra());
    AlgebraElement out(algebra_);
    for (const auto& t : terms_) out += t.left * xi * t.right;
    return out;
  }

  /// Dense matrix in the column-major Hilbert–Schmidt coordinates of
  /// AlgebraElement::hs_vector: vec(L ξ R) = (Rᵀ ⊗ L) vec(ξ).
  Matrix dense() const {
    const int d = algebra_.linear_dim();
    Matrix out = Matrix::Zero(d, d);
    for (const auto& t : terms_) {
      int off = 0;
      for (std::size_t k = 0; k < algebra_.block_count(); ++k) {
        const int n2 = algebra_.dim(k) * algebra_.dim(k);
        out.block(off, off, n2, n2) +=
            Eigen::kroneckerProduct(t.right.block(k).transpose(), t.left.block(k)).eval();
        off += n2;
      }
    }
    return out;
  }

  SuperOperator adjoint() const {
    std::vector<Term> ts;
    for (const auto& t : terms_) ts.push_back({t.left.adjoint(), t.right.adjoint()});
    return SuperOperator(algebra_, std::move(ts));
  }

  friend SuperOperator operator+(const SuperOperator& a, const SuperOperator& b) {
    require_same_algebra(a.algebra_, b.algebra_);
    auto ts = a.terms_;
    ts.insert(ts.end(), b.terms_.begin(), b.terms_.end());
    return SuperOperator(a.algebra_, std::move(ts));
  }

  friend SuperOperator operator*(Complex s, const SuperOperator& a) {
    auto ts = a.terms_;
    for (auto& t : ts) t.left *= s;
    return SuperOperator(a.algebra_, std::move(ts));
  }

  /// Composition (a ∘ b)(ξ) = a(b(ξ)).
  friend SuperOperator operator*(const SuperOperator& a, const SuperOperator& b) {
    require_same_algebra(a.algebra_, b.algebra_);
    std::vector<Term> ts;
    for (const auto& ta : a.terms_)
      for (const auto& tb : b.terms_) ts.push_back({ta.left * tb.left, tb.right * ta.right});
    return SuperOperator(a.algebra_, std::move(ts));
  }

 private:
  MatrixAlgebra algebra_;
  std::vector<Term> terms_;
};

/// ξ ↦ M conj(ξ) in Hilbert–Schmidt coordinates.
struct AntilinearOperator {
  Matrix matrix;

  Vector operator()(const Vector& v) const { return matrix * v.conjugate(); }

  /// The linear map J L J.
  Matrix conjugate_linear(const Matrix& l) const { return matrix * l.conjugate() * matrix.conjugate(); }
};

/// Spectrum of ξ ↦ A ξ B for Hermitian A, B: per block {α_i β_j}.
inline std::vector<double> sandwich_spectrum(const AlgebraElement& a, const AlgebraElement& b) {
  require_same_algebra(a.algebra(), b.algebra());
  const auto ea = hermitian_eigenvalues(a);
  const auto eb = hermitian_eigenvalues(b);
  std::vector<double> out;
  for (std::size_t k = 0; k < ea.size(); ++k)
    for (Eigen::Index i = 0; i < ea[k].size(); ++i)
      for (Eigen::Index j = 0; j < eb[k].size(); ++j) out.push_back(ea[k](i) * eb[k](j));
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

// ---------------------------------------------------------------------------
// Standard form

class StandardForm {
 public:
  explicit StandardForm(MatrixAlgebra a) : algebra_(std::move(a)) {}

  const MatrixAlgebra& algebra() const noexcept { return algebra_; }
  int dim() const { return algebra_.linear_dim(); }

  SuperOperator left(const AlgebraElement& x) const {
    return SuperOperator::sandwich(x, AlgebraElement::identity(algebra_));
  }
  SuperOperator right(const AlgebraElement& x) const {
    return SuperOperator::sandwich(AlgebraElement::identity(algebra_), x);
  }

  AlgebraElement conjugation(const AlgebraElement& xi) const { return xi.adjoint(); }

  /// J in Hilbert–Schmidt coordinates: the transposition permutation
  /// composed with complex conjugation.
  AntilinearOperator conjugation_dense() const {
    const int d = dim();
    Matrix t = Matrix::Zero(d, d);
    int off = 0;
    for (std::size_t k = 0; k < algebra_.block_count(); ++k) {
      const int n = algebra_.dim(k);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t(off + i + j * n, off + j + i * n) = 1.0;
      off += n * n;
    }
    return {t};
  }

  bool in_cone(const AlgebraElement& xi, const Tolerances& tol = {}) const { return is_positive(xi, tol); }

  Complex inner(const AlgebraElement& a, const AlgebraElement& b) const { return a.hs_inner(b); }

 private:
  MatrixAlgebra algebra_;
};

/// Representative ξ(φ) = h_φ^{1/2} of φ in the natural cone.
inline AlgebraElement std_vector(const StateDensity& phi, const StandardForm& sf, const Tolerances& tol = {}) {
  require_same_algebra(phi.algebra(), sf.algebra());
  return pseudo_power(phi.canonical_density(), 0.5, tol);
}

// ---------------------------------------------------------------------------
// GNS

struct GnsData {
  MatrixAlgebra algebra;
  int dim = 0;
  std::vector<AlgebraElement> element_basis{};
  Matrix coefficients{};           // column a: coefficients of the a-th orthonormal vector [Σ_i c_ai b_i]
  std::vector<Matrix> pi_basis{};  // π(b_i) for each element basis vector
  Vector cyclic{};                 // Ω in the orthonormal basis

  /// π(x) for an arbitrary element, by linearity over the element basis.
  Matrix pi(const AlgebraElement& x) const {
    require_same_algebra(algebra, x.algebra());
    Matrix out = Matrix::Zero(dim, dim);
    const Vector coords = x.hs_vector();
    for (Eigen::Index l = 0; l < coords.size(); ++l)
      if (coords(l) != Complex(0.0)) out += coords(l) * pi_basis[static_cast<std::size_t>(l)];
    return out;
  }
};

/// GNS triple from the Gram matrix [ω(b_i* b_j)] over the matrix-unit basis.
/// H_ω is spanned by the classes [b_i]; the null space of the Gram matrix is
/// the left ideal I_ω.
inline GnsData gns(const StateDensity& omega, const Tolerances& tol = {}) {
  GnsData g{omega.algebra()};
  g.element_basis = AlgebraElement::basis(g.algebra);
  const auto& b = g.element_basis;
  const auto nb = static_cast<Eigen::Index>(b.size());

  auto gram_with = [&](const AlgebraElement& mid) {
    Matrix gm(nb, nb);
    for (Eigen::Index i = 0; i < nb; ++i)
      for (Eigen::Index j = 0; j < nb; ++j) gm(i, j) = omega(b[i].adjoint() * mid * b[j]);
    return gm;
  };
  const Matrix gram = gram_with(AlgebraElement::identity(g.algebra));
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (gram + gram.adjoint()));
  const double top = std::max(es.eigenvalues().maxCoeff(), 0.0);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = nb - 1; i >= 0; --i)
    if (es.eigenvalues()(i) > tol.supp * top && es.eigenvalues()(i) > 0.0) keep.push_back(i);
  g.dim = static_cast<int>(keep.size());
  g.coefficients.resize(nb, g.dim);
  for (int a = 0; a < g.dim; ++a)
    g.coefficients.col(a) = es.eigenvectors().col(keep[static_cast<std::size_t>(a)]) /
                            std::sqrt(es.eigenvalues()(keep[static_cast<std::size_t>(a)]));

  // ⟨e_a, π(x) e_c⟩ = ω((Σ c_ai b_i)* x (Σ c_cj b_j)) = c_a* G^x c_c.
  for (const auto& bl : b) g.pi_basis.push_back(g.coefficients.adjoint() * gram_with(bl) * g.coefficients);

  Vector gi(nb);
  for (Eigen::Index i = 0; i < nb; ++i) gi(i) = omega(b[i].adjoint());
  g.cyclic = g.coefficients.adjoint() * gi;
  return g;
}

// ---------------------------------------------------------------------------
// Modular operator and flow

struct ModularOptions {
  /// Reduce to the support of a non-faithful state instead of failing.
  bool reduce = true;
  Tolerances tol{};
};

struct ModularData {
  StateDensity state;
  AlgebraElement density;          // canonical h
  AlgebraElement density_inverse;  // pseudo-inverse h^{-1}
  AlgebraElement support;
  SuperOperator delta;             // ξ ↦ h ξ h^{-1}
  SuperOperator generator;         // K = -log Δ on the reduced space
  std::vector<double> eigenvalues; // λ_i / λ_j over positive eigenvalues of each block

  /// Δ^z ξ = h^z ξ h^{-z}.
  SuperOperator power(Complex z, const Tolerances& tol = {}) const {
    return SuperOperator::sandwich(pseudo_power(density, z, tol), pseudo_power(density, -z, tol));
  }
};

inline void require_faithful(const StateDensity& phi, const Tolerances& tol, const char* who) {
  if (!phi.is_faithful(tol))
    throw Error(ErrorKind::NotFaithful, std::string(who) + ": reference state is not faithful");
}

inline ModularData modular_operator(const StateDensity& phi, const ModularOptions& opt = {}) {
  if (!opt.reduce) require_faithful(phi, opt.tol, "modular_operator");
  AlgebraElement h = phi.canonical_density();
  AlgebraElement hinv = pseudo_power(h, -1.0, opt.tol);
  AlgebraElement p = support_projection(h, opt.tol);
  AlgebraElement logh = pseudo_log(h, opt.tol);

  const double cut = opt.tol.supp * operator_norm(h);
  std::vector<double> ratios;
  for (const auto& ev : hermitian_eigenvalues(h))
    for (Eigen::Index i = 0; i < ev.size(); ++i)
      for (Eigen::Index j = 0; j < ev.size(); ++j)
        if (ev(i) > cut && ev(j) > cut) ratios.push_back(ev(i) / ev(j));
  std::sort(ratios.begin(), ratios.end(), std::greater<>());

  const MatrixAlgebra& a = phi.algebra();
  SuperOperator delta = SuperOperator::sandwich(h, hinv);
  SuperOperator gen(a, {{-1.0 * logh, p}, {p, logh}});
  return ModularData{phi, std::move(h), std::move(hinv), std::move(p), std::move(delta), std::move(gen),
                     std::move(ratios)};
}

/// σ_t^φ(x) = h^{it} x h^{-it}; on a non-faithful φ this is the flow of the
/// reduced algebra applied to P x P.
inline AlgebraElement modular_flow(const StateDensity& phi, const AlgebraElement& x, double t,
                                   const ModularOptions& opt = {}) {
  require_same_algebra(phi.algebra(), x.algebra());
  if (!opt.reduce) require_faithful(phi, opt.tol, "modular_flow");
  const auto h = phi.canonical_density();
  return pseudo_power(h, kI * t, opt.tol) * x * pseudo_power(h, -kI * t, opt.tol);
}

/// Analytic continuation σ_z^φ(x) = h^{iz} x h^{-iz} for faithful φ.
inline AlgebraElement modular_flow_analytic(const StateDensity& phi, const AlgebraElement& x, Complex z,
                                            const Tolerances& tol = {}) {
  require_faithful(phi, tol, "modular_flow_analytic");
  const auto h = phi.canonical_density();
  return pseudo_power(h, kI * z, tol) * x * pseudo_power(h, -kI * z, tol);
}

/// The modular hamiltonian -log h of a faithful state; Ad(e^{itH}) = σ_{-t}.
inline AlgebraElement modular_hamiltonian(const StateDensity& phi, const Tolerances& tol = {}) {
  require_faithful(phi, tol, "modular_hamiltonian");
  return -1.0 * pseudo_log(phi.canonical_density(), tol);
}

/// Δ_{φ,ψ} ξ = h_φ ξ h_ψ^{-1}, pseudo-inverse on supp(ψ).
inline SuperOperator relative_modular(const StateDensity& phi, const StateDensity& psi, const Tolerances& tol = {}) {
  require_same_algebra(phi.algebra(), psi.algebra());
  return SuperOperator::sandwich(phi.canonical_density(), pseudo_power(psi.canonical_density(), -1.0, tol));
}

/// Eigenvalues of Δ_{φ,ψ}: per block φ_i / ψ_j over nonzero ψ_j, and zeros
/// for the directions killed by the pseudo-inverse.
inline std::vector<double> relative_modular_spectrum(const StateDensity& phi, const StateDensity& psi,
                                                     const Tolerances& tol = {}) {
  require_same_algebra(phi.algebra(), psi.algebra());
  return sandwich_spectrum(phi.canonical_density(), pseudo_power(psi.canonical_density(), -1.0, tol));
}

/// Dense Tomita route: build S: x h^{1/2} ↦ x* h^{1/2} on HS coordinates as
/// an antilinear map M∘conj and take its polar decomposition S = J Δ^{1/2},
/// giving Δ = conj(M*M) and J = M (M*M)^{-1/2} ∘ conj. Independent of the
/// closed forms used above; intended for verification.
struct TomitaPolar {
  Matrix delta;
  AntilinearOperator conjugation;
};

inline TomitaPolar tomita_polar(const StateDensity& phi, const Tolerances& tol = {}) {
  require_faithful(phi, tol, "tomita_polar");
  const auto h = phi.canonical_density();
  const auto hs = pseudo_power(h, 0.5, tol);
  const auto hsi = pseudo_power(h, -0.5, tol);
  const StandardForm sf(phi.algebra());
  const Matrix transpose = sf.conjugation_dense().matrix;
  // S ξ = h^{-1/2} ξ* h^{1/2}; vec(ξ*) = T vec(conj ξ).
  const Matrix m = SuperOperator::sandwich(hsi, hs).dense() * transpose;
  const Matrix mm = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (mm + mm.adjoint()));
  RealVector inv_sqrt = es.eigenvalues().cwiseSqrt().cwiseInverse();
  Matrix mm_inv_sqrt = es.eigenvectors() * inv_sqrt.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
  return {mm.conjugate(), {m * mm_inv_sqrt}};
}

// ---------------------------------------------------------------------------
// Connes cocycles

inline AlgebraElement supports_commutator(const StateDensity& phi, const StateDensity& psi, const Tolerances& tol) {
  return commutator(support(phi, tol), support(psi, tol));
}

/// (Dφ:Dψ)_t = h_φ^{it} h_ψ^{-it}. Requires [supp φ, supp ψ] = 0.
inline AlgebraElement connes_cocycle(const StateDensity& phi, const StateDensity& psi, double t,
                                     const Tolerances& tol = {}) {
  require_same_algebra(phi.algebra(), psi.algebra());
  if (operator_norm(supports_commutator(phi, psi, tol)) > tol.spec)
    throw Error(ErrorKind::NoncommutingSupports, "connes_cocycle: supports of the two weights do not commute");
  return pseudo_power(phi.canonical_density(), kI * t, tol) * pseudo_power(psi.canonical_density(), -kI * t, tol);
}

/// Analytic continuation h_φ^{iz} h_ψ^{-iz} on the strip -1/2 ≤ Im z ≤ 0.
/// At z = -i/2 the value c satisfies φ(x) = ψ(c* x c), and ‖c‖ ≤ λ^{1/2}
/// whenever φ ≤ λψ.
inline AlgebraElement cocycle_analytic(const StateDensity& phi, const StateDensity& psi, Complex z,
                                       const Tolerances& tol = {}) {
  require_same_algebra(phi.algebra(), psi.algebra());
  constexpr double slack = 1e-12;
  if (z.imag() < -0.5 - slack || z.imag() > slack)
    throw Error(ErrorKind::InvalidInput, "cocycle_analytic: Im z must lie in [-1/2, 0]");
  const auto pphi = support(phi, tol);
  const auto ppsi = support(psi, tol);
  if (operator_norm(pphi * ppsi - pphi) > tol.spec)
    throw Error(ErrorKind::SupportViolation, "cocycle_analytic: supp(phi) is not below supp(psi)");
  return pseudo_power(phi.canonical_density(), kI * z, tol) * pseudo_power(psi.canonical_density(), -kI * z, tol);
}

// ---------------------------------------------------------------------------
// Reports shared by KMS and Pedersen–Takesaki checks

struct SampleResidual {
  double t;
  double residual;
};

struct CheckReport {
  bool pass = true;
  double max_residual = 0.0;
  double tolerance = 0.0;
  std::vector<SampleResidual> samples;
};

/// KMS boundary check at inverse temperature β for the flow α_z(y) = e^{izH} y e^{-izH}:
/// compares F(t+iβ) = ω(x α_{t+iβ}(y)) with ω(α_t(y) x). Passes iff the
/// largest residual is at most rel_tol·‖x‖‖y‖. The continuation is exact
/// spectral calculus.
inline CheckReport kms_check(const StateDensity& omega, const AlgebraElement& hamiltonian, const AlgebraElement& x,
                             const AlgebraElement& y, const std::vector<double>& ts, double beta = 1.0,
                             double rel_tol = 1e-8, const Tolerances& tol = {}) {
  require_same_algebra(omega.algebra(), hamiltonian.algebra());
  require_same_algebra(omega.algebra(), x.algebra());
  require_same_algebra(omega.algebra(), y.algebra());
  require_hermitian(hamiltonian, tol);
  CheckReport rep;
  rep.tolerance = rel_tol * operator_norm(x) * operator_norm(y);
  for (double t : ts) {
    const Complex z(t, beta);
    const auto ay = hermitian_exp(hamiltonian, kI * z) * y * hermitian_exp(hamiltonian, -kI * z);
    const auto at = hermitian_exp(hamiltonian, kI * t) * y * hermitian_exp(hamiltonian, -kI * t);
    const double r = std::abs(omega(x * ay) - omega(at * x));
    rep.samples.push_back({t, r});
    rep.max_residual = std::max(rep.max_residual, r);
  }
  rep.pass = rep.max_residual <= rep.tolerance;
  return rep;
}

/// KMS check of a faithful ω against its own dynamics α_t = Ad(h^{-it}) = σ^ω_{-t},
/// for which the boundary identity holds at β = 1.
inline CheckReport kms_check(const StateDensity& omega, const AlgebraElement& x, const AlgebraElement& y,
                             const std::vector<double>& ts, double rel_tol = 1e-8, const Tolerances& tol = {}) {
  return kms_check(omega, modular_hamiltonian(omega, tol), x, y, ts, 1.0, rel_tol, tol);
}

// ---------------------------------------------------------------------------
// Pedersen–Takesaki densities

struct InvarianceFailure {
  double commutator_norm;
  CheckReport deviation;  // ‖ψ∘σ^φ_t − ψ‖ on the diagnostic grid
};

/// ‖ψ∘σ^φ_t − ψ‖, the trace norm of h_φ^{-it} h_ψ h_φ^{it} − h_ψ.
inline double invariance_deviation(const StateDensity& psi, const StateDensity& phi, double t,
                                   const Tolerances& tol = {}) {
  const auto hphi = phi.canonical_density();
  const auto hpsi = psi.canonical_density();
  const auto moved = pseudo_power(hphi, -kI * t, tol) * hpsi * pseudo_power(hphi, kI * t, tol);
  double s = 0.0;
  for (const auto& sv : singular_values(moved - hpsi)) s += sv.sum();
  return s;
}

inline const std::vector<double>& pt_diagnostic_grid() {
  static const std::vector<double> grid{-2.0, -1.0, -0.5, 0.5, 1.0, 2.0};
  return grid;
}

/// The positive h, commuting with h_φ, with ψ(x) = φ(h^{1/2} x h^{1/2}),
/// or InvarianceFailure when ψ is not σ^φ-invariant ([h_ψ, h_φ] ≠ 0).
inline std::variant<AlgebraElement, InvarianceFailure> pedersen_takesaki(const StateDensity& psi,
                                                                         const StateDensity& phi,
                                                                         const Tolerances& tol = {}) {
  require_same_algebra(psi.algebra(), phi.algebra());
  require_faithful(phi, tol, "pedersen_takesaki");
  const auto hphi = phi.canonical_density();
  const auto hpsi = psi.canonical_density();
  const double comm = operator_norm(commutator(hpsi, hphi));
  if (comm <= tol.spec * operator_norm(hpsi) * operator_norm(hphi)) {
    AlgebraElement h = hpsi * pseudo_power(hphi, -1.0, tol);
    return AlgebraElement(0.5 * (h + h.adjoint()));
  }
  InvarianceFailure f{comm, {}};
  f.deviation.pass = false;
  for (double t : pt_diagnostic_grid()) {
    const double d = invariance_deviation(psi, phi, t, tol);
    f.deviation.samples.push_back({t, d});
    f.deviation.max_residual = std::max(f.deviation.max_residual, d);
  }
  return f;
}

// ---------------------------------------------------------------------------
// Standard liouvilleans

struct Liouvillean {
  AlgebraElement hamiltonian;
  SuperOperator generator;  // K ξ = H ξ − ξ H

  /// e^{itK} ξ = e^{itH} ξ e^{-itH}.
  SuperOperator exp_it(double t) const {
    return SuperOperator::sandwich(hermitian_exp(hamiltonian, kI * t), hermitian_exp(hamiltonian, -kI * t));
  }

  /// Per block, all differences λ_i − λ_j of eigenvalues of H (descending).
  std::vector<double> spectrum() const {
    std::vector<double> out;
    for (const auto& ev : hermitian_eigenvalues(hamiltonian))
      for (Eigen::Index i = 0; i < ev.size(); ++i)
        for (Eigen::Index j = 0; j < ev.size(); ++j) out.push_back(ev(i) - ev(j));
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
  }
};

/// K = H − JHJ: the generator of ξ ↦ e^{itH} ξ e^{-itH}, which preserves
/// the natural cone and anticommutes with J.
inline Liouvillean standard_liouvillean(const AlgebraElement& hamiltonian, const StandardForm& sf,
                                        const Tolerances& tol = {}) {
  require_same_algebra(hamiltonian.algebra(), sf.algebra());
  require_hermitian(hamiltonian, tol);
  const auto id = AlgebraElement::identity(sf.algebra());
  SuperOperator k(sf.algebra(), {{hamiltonian, id}, {id, -1.0 * hamiltonian}});
  return {hamiltonian, std::move(k)};
}

}  // namespace nckit
