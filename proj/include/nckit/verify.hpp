#pragma once

// Seeded property suite over every module. Each identity reduces to a worst
// case over all trials (max residual, min value, or hit fraction), so the
// aggregate does not depend on trial order or thread count.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "nckit/algebra.hpp"
#include "nckit/boolean_lp.hpp"
#include "nckit/modular.hpp"
#include "nckit/nc_lp.hpp"
#include "nckit/orlicz.hpp"
#include "nckit/random.hpp"
#include "nckit/states.hpp"

namespace nckit {

/// Deliberate defects for negative-control runs of the suite.
enum class Poison { None, FlipSignInJ };

struct IdentityResult {
  enum class Kind { AtMost, AtLeast, Fraction };
  Kind kind = Kind::AtMost;
  double bound = 0.0;     // tolerance, floor, or floor for each hit
  double required = 1.0;  // Fraction only: minimum share of hits
  double worst = 0.0;     // max residual (AtMost) or min value (AtLeast, Fraction)
  long samples = 0;
  long hits = 0;          // Fraction only

  bool pass() const {
    switch (kind) {
      case Kind::AtMost: return worst <= bound;
      case Kind::AtLeast: return worst >= bound;
      case Kind::Fraction: return samples > 0 && static_cast<double>(hits) >= required * static_cast<double>(samples);
    }
    return false;
  }
};

class Ledger {
 public:
  void at_most(const std::string& name, double residual, double tol) {
    auto& r = slot(name, IdentityResult::Kind::AtMost, tol);
    update(r, residual, true);
  }

  void at_least(const std::string& name, double value, double floor) {
    auto& r = slot(name, IdentityResult::Kind::AtLeast, floor);
    update(r, value, false);
  }

  void fraction_at_least(const std::string& name, double value, double floor, double required) {
    auto& r = slot(name, IdentityResult::Kind::Fraction, floor);
    r.required = required;
    if (value >= floor) ++r.hits;
    update(r, value, false);
  }

  void merge(const Ledger& other) {
    for (const auto& [name, o] : other.items_) {
      auto it = items_.find(name);
      if (it == items_.end()) {
        items_.emplace(name, o);
        continue;
      }
      auto& r = it->second;
      if (std::isnan(o.worst)) r.worst = o.worst;
      else if (!std::isnan(r.worst))
        r.worst = r.kind == IdentityResult::Kind::AtMost ? std::max(r.worst, o.worst) : std::min(r.worst, o.worst);
      r.samples += o.samples;
      r.hits += o.hits;
    }
  }

  const std::map<std::string, IdentityResult>& items() const noexcept { return items_; }

 private:
  // NaN is sticky so that a poisoned computation can never pass.
  static void update(IdentityResult& r, double v, bool larger_is_worse) {
    if (r.samples == 0 || std::isnan(v)) r.worst = v;
    else if (!std::isnan(r.worst) && (larger_is_worse ? v > r.worst : v < r.worst)) r.worst = v;
    ++r.samples;
  }

  IdentityResult& slot(const std::string& name, IdentityResult::Kind kind, double bound) {
    auto [it, inserted] = items_.try_emplace(name);
    if (inserted) {
      it->second.kind = kind;
      it->second.bound = bound;
    }
    return it->second;
  }

  std::map<std::string, IdentityResult> items_;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  int trials = 50;
  std::vector<MatrixAlgebra> algebras;
  Tolerances tol{};
  Poison poison = Poison::None;
  int threads = 0;  // 0: NCKIT_THREADS, else hardware concurrency
};

struct VerifyReport {
  bool pass = true;
  std::uint64_t seed = 0;
  int trials = 0;
  std::vector<MatrixAlgebra> algebras;
  Ledger ledger;
  std::vector<std::string> warnings;
};

/// "2,3;2x2" → {M2 ⊕ M3, M2 ⊗ 1_2}: ';' separates algebras, ',' blocks,
/// "nxm" is an n×n block of multiplicity m.
inline std::vector<MatrixAlgebra> parse_dims(const std::string& spec) {
  std::vector<MatrixAlgebra> out;
  std::stringstream algebras(spec);
  std::string alg;
  while (std::getline(algebras, alg, ';')) {
    std::vector<Block> blocks;
    std::stringstream bs(alg);
    std::string tok;
    while (std::getline(bs, tok, ',')) {
      const auto x = tok.find('x');
      try {
        std::size_t used = 0;
        const int n = std::stoi(tok.substr(0, x), &used);
        const int m = x == std::string::npos ? 1 : std::stoi(tok.substr(x + 1));
        blocks.push_back({n, m});
      } catch (const std::logic_error&) {
        throw Error(ErrorKind::InvalidInput, "bad dims token \"" + tok + "\"");
      }
    }
    if (blocks.empty()) throw Error(ErrorKind::InvalidInput, "empty algebra in dims \"" + spec + "\"");
    out.emplace_back(std::move(blocks));
  }
  if (out.empty()) throw Error(ErrorKind::InvalidInput, "dims must name at least one algebra");
  return out;
}

inline int thread_budget(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("NCKIT_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace suites {

inline double rel(double num, double den) { return den > 0.0 ? num / den : num; }

inline double min_eigenvalue(const AlgebraElement& a) {
  double m = kInf;
  for (const auto& ev : hermitian_eigenvalues(a))
    if (ev.size() > 0) m = std::min(m, ev.minCoeff());
  return m;
}

inline double dense_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

struct Context {
  const MatrixAlgebra& algebra;
  const Tolerances& tol;
  Poison poison;
  Ledger& out;
};

/// J as used by the suite: ξ ↦ ξ*, or its sign-flipped defect.
inline AlgebraElement apply_j(const Context& c, const AlgebraElement& xi) {
  auto r = xi.adjoint();
  if (c.poison == Poison::FlipSignInJ) r *= -1.0;
  return r;
}

inline void algebra_core(const Context& c, Rng& rng) {
  const auto& a = c.algebra;
  const auto x = random_element(a, rng);
  const double nx = operator_norm(x);
  c.out.at_most("algebra.c_star_identity", rel(std::abs(operator_norm(x.adjoint() * x) - nx * nx), nx * nx), 1e-10);

  const auto h = random_hermitian(a, rng);
  const auto sd = spectral_decompose(h, c.tol);
  c.out.at_most("algebra.spectral_reconstruction", rel(operator_norm(sd.reconstruct() - h), operator_norm(h)),
                c.tol.spec);
  double orth = 0.0;
  for (std::size_t i = 0; i < sd.projectors.size(); ++i)
    for (std::size_t j = 0; j < sd.projectors.size(); ++j) {
      const auto pp = sd.projectors[i] * sd.projectors[j];
      orth = std::max(orth, operator_norm(i == j ? pp - sd.projectors[i] : pp));
    }
  c.out.at_most("algebra.spectral_orthogonality", orth, c.tol.spec);

  // Rank-deficient x exercises the partial-isometry part of the polar decomposition.
  const auto low = x * random_state_of_rank(a, 1, rng).density();
  for (const auto* y : {&x, &low}) {
    const auto pd = polar_decompose(*y, c.tol);
    const double ny = operator_norm(*y);
    c.out.at_most("algebra.polar_factorisation", rel(operator_norm(pd.v * pd.abs - *y), ny), c.tol.spec);
    c.out.at_most("algebra.polar_initial_projection",
                  operator_norm(pd.v.adjoint() * pd.v - support_projection(pd.abs, c.tol)), c.tol.spec);
    c.out.at_most("algebra.polar_final_projection",
                  operator_norm(pd.v * pd.v.adjoint() - support_projection(absolute_value(y->adjoint(), c.tol), c.tol)),
                  c.tol.spec);
  }

  int expected = 0;
  for (const auto& b : a.blocks()) expected += b.mult * b.mult;
  const auto comm = commutant(a);
  c.out.at_most("algebra.commutant_dimension", std::abs(static_cast<double>(comm.size()) - expected), 0.0);
  const auto bicomm = commutant(comm);
  const Matrix px = x.represented();
  c.out.at_most("algebra.bicommutant_membership", rel(span_residual(bicomm, px), px.norm()), 1e-9);
  c.out.at_most("algebra.bicommutant_dimension",
                std::abs(static_cast<double>(bicomm.size()) - static_cast<double>(a.linear_dim())), 0.0);

  // Partition of the unit into rotated rank-one projections in every block.
  const auto u = random_unitary(a, rng);
  std::vector<AlgebraElement> partition;
  for (std::size_t k = 0; k < a.block_count(); ++k)
    for (int i = 0; i < a.dim(k); ++i) {
      AlgebraElement p(a);
      p.block(k) = u.block(k).col(i) * u.block(k).col(i).adjoint();
      partition.push_back(std::move(p));
    }
  const auto ex = pinch_expectation(x, partition, c.tol);
  c.out.at_most("algebra.pinching_idempotent", rel(operator_norm(pinch_expectation(ex, partition, c.tol) - ex), nx),
                c.tol.spec);
  c.out.at_most("algebra.pinching_trace", rel(std::abs(ex.trace_can() - x.trace_can()), nx), c.tol.spec);
  const auto pos = random_positive(a, rng);
  c.out.at_most("algebra.pinching_positive",
                rel(std::max(0.0, -min_eigenvalue(pinch_expectation(pos, partition, c.tol))), operator_norm(pos)),
                c.tol.spec);
}

inline void states_suite(const Context& c, Rng& rng) {
  const auto& a = c.algebra;
  const auto phi = random_faithful_state(a, rng);
  const LinearFunctional lf(phi);
  c.out.at_most("states.positive_norm", std::abs(lf.norm() - phi(AlgebraElement::identity(a)).real()), 1e-12);

  // A generic and a rank-deficient coefficient element.
  const auto g1 = random_element(a, rng);
  const auto g2 = random_element(a, rng);
  const auto r1 = random_state_of_rank(a, 1, rng).density();
  for (const auto& cf : {g1, AlgebraElement(g2 * r1)}) {
    const LinearFunctional f(cf);
    const auto fp = functional_polar(f, c.tol);
    const double nf = f.norm();
    c.out.at_most("states.polar_norm", rel(std::abs(fp.abs.norm() - nf), nf), c.tol.spec);
    c.out.at_most("states.polar_support", operator_norm(support(fp.abs, c.tol) - fp.v.adjoint() * fp.v), c.tol.spec);
    double recon = 0.0;
    for (const auto& b : AlgebraElement::basis(a)) recon = std::max(recon, std::abs(f(b) - fp.abs(b * fp.v)));
    c.out.at_most("states.polar_reconstruction", rel(recon, nf), c.tol.spec);
  }

  const auto y = random_element(a, rng);
  const auto rep = TraceSpec::rep(a);
  const auto h = dye_segal_density(phi, rep);
  c.out.at_most("states.dye_segal_roundtrip", rel(std::abs(rep(h * y) - phi(y)), operator_norm(y)), c.tol.spec);
  c.out.at_most("states.dye_segal_positive", std::max(0.0, -min_eigenvalue(h)), c.tol.spec);

  const StateDensity omega(phi.density() + random_positive(a, rng));
  c.out.at_most("states.order_decided", functional_leq(phi, omega, c.tol) ? 0.0 : 1.0, 0.0);
  const auto p = random_positive(a, rng);
  c.out.at_most("states.order_on_positives",
                rel(std::max(0.0, phi(p).real() - omega(p).real()), operator_norm(p)), 1e-12);
}

inline void modular_suite(const Context& c, Rng& rng) {
  const auto& a = c.algebra;
  const auto& tol = c.tol;
  const auto omega = random_faithful_state(a, rng);
  const StandardForm sf(a);
  const auto md = modular_operator(omega, {true, tol});
  const auto om = std_vector(omega, sf, tol);
  const auto x = random_element(a, rng);
  const double nx = operator_norm(x);

  Matrix jd = sf.conjugation_dense().matrix;
  if (c.poison == Poison::FlipSignInJ) jd *= -1.0;
  const AntilinearOperator j{jd};
  const Matrix delta = md.delta.dense();
  const Matrix delta_inv = md.power(-1.0, tol).dense();
  c.out.at_most("modular.J_delta_J", rel(dense_norm(j.conjugate_linear(delta) - delta_inv), dense_norm(delta_inv)),
                tol.spec);
  c.out.at_most("modular.delta_fixes_omega", (md.delta(om) - om).hs_norm(), tol.spec);
  c.out.at_most("modular.J_fixes_omega", (apply_j(c, om) - om).hs_norm(), tol.spec);
  c.out.at_most("modular.delta_half_relation",
                rel((md.power(0.5, tol)(x * om) - apply_j(c, x.adjoint() * om)).hs_norm(), nx), tol.spec);

  // Dense Tomita route against the closed forms.
  const auto tp = tomita_polar(omega, tol);
  c.out.at_most("modular.tomita_delta_agrees", rel(dense_norm(tp.delta - delta), dense_norm(delta)), 1e-9);
  c.out.at_most("modular.tomita_J_agrees", dense_norm(tp.conjugation.matrix - jd), 1e-9);

  std::vector<Matrix> left;
  for (const auto& b : AlgebraElement::basis(a)) left.push_back(sf.left(b).dense());
  const auto lcomm = commutant(left);
  c.out.at_most("modular.commutant_of_left_dimension",
                std::abs(static_cast<double>(lcomm.size()) - static_cast<double>(a.linear_dim())), 0.0);
  double member = 0.0;
  for (const auto& l : left)
    member = std::max(member, rel(span_residual(lcomm, tp.conjugation.conjugate_linear(l)), l.norm()));
  c.out.at_most("modular.JLJ_in_commutant", member, 1e-9);
  // J L(x) J = R(x*): ξ ↦ ξ x*.
  c.out.at_most("modular.JLJ_is_right_multiplication",
                rel(dense_norm(j.conjugate_linear(sf.left(x).dense()) - sf.right(x.adjoint()).dense()), nx), tol.spec);

  const double s = rng.uniform(-2.0, 2.0), t = rng.uniform(-2.0, 2.0);
  const auto st = modular_flow(omega, x, t);
  c.out.at_most("modular.flow_group_law",
                rel(operator_norm(modular_flow(omega, st, s) - modular_flow(omega, x, s + t)), nx), 1e-9);
  c.out.at_most("modular.flow_invariance", rel(std::abs(omega(st) - omega(x)), nx), 1e-9);
  c.out.at_most("modular.flow_implemented_by_delta",
                rel((md.power(kI * t, tol)(x * om) - st * om).hs_norm(), nx), 1e-9);

  // Natural cone: Δ^{1/4} of positive·Ω lands in the cone and is fixed by J.
  const auto p = random_positive(a, rng);
  const auto cone_vec = md.power(0.25, tol)(p * om);
  c.out.at_most("modular.cone_positive", rel(std::max(0.0, -min_eigenvalue(0.5 * (cone_vec + cone_vec.adjoint()))),
                                             operator_norm(cone_vec)), 1e-9);
  c.out.at_most("modular.cone_fixed_by_J", rel((apply_j(c, cone_vec) - cone_vec).hs_norm(), cone_vec.hs_norm()),
                1e-9);

  // Modular spectrum against dense diagonalisation.
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (delta + delta.adjoint()));
  std::vector<double> dense_ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(dense_ev.begin(), dense_ev.end(), std::greater<>());
  double spec_err = dense_ev.size() == md.eigenvalues.size() ? 0.0 : kInf;
  for (std::size_t i = 0; i < std::min(dense_ev.size(), md.eigenvalues.size()); ++i)
    spec_err = std::max(spec_err, std::abs(dense_ev[i] - md.eigenvalues[i]) / md.eigenvalues.front());
  c.out.at_most("modular.delta_spectrum", spec_err, 1e-9);
}

inline void cocycle_suite(const Context& c, Rng& rng) {
  const auto& a = c.algebra;
  const auto& tol = c.tol;
  const auto phi1 = random_faithful_state(a, rng);
  const auto phi2 = random_faithful_state(a, rng);
  const auto phi3 = random_faithful_state(a, rng);
  const auto id = AlgebraElement::identity(a);
  for (double t : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
    const auto u12 = connes_cocycle(phi1, phi2, t, tol);
    const auto u23 = connes_cocycle(phi2, phi3, t, tol);
    const auto u13 = connes_cocycle(phi1, phi3, t, tol);
    c.out.at_most("cocycle.chain_rule", operator_norm(u12 * u23 - u13), 1e-9);
    c.out.at_most("cocycle.adjoint_rule", operator_norm(u12.adjoint() - connes_cocycle(phi2, phi1, t, tol)), 1e-9);
    c.out.at_most("cocycle.self_is_identity", operator_norm(connes_cocycle(phi1, phi1, t, tol) - id), 1e-10);
    c.out.at_most("cocycle.unitary", operator_norm(u12.adjoint() * u12 - id), 1e-9);
    const double s = rng.uniform(-2.0, 2.0);
    // u_{s+t} = u_s σ^ψ_s(u_t) for u = (Dφ1:Dφ2).
    c.out.at_most("cocycle.cocycle_identity",
                  operator_norm(connes_cocycle(phi1, phi2, s + t, tol) -
                                connes_cocycle(phi1, phi2, s, tol) * modular_flow(phi2, u12, s)),
                  1e-9);
  }

  const auto cc = cocycle_analytic(phi1, phi2, Complex(0.0, -0.5), tol);
  double recon = 0.0;
  for (const auto& e : AlgebraElement::basis(a)) recon = std::max(recon, std::abs(phi1(e) - phi2(cc.adjoint() * e * cc)));
  c.out.at_most("cocycle.analytic_boundary", recon, 1e-8);

  // φ ≤ λψ by construction: h_φ = λ h_ψ^{1/2} s h_ψ^{1/2} with 0 ≤ s ≤ 1.
  const double lambda = rng.uniform(0.5, 4.0);
  auto sm = random_positive(a, rng) + 1e-2 * id;
  sm *= rng.uniform(0.3, 1.0) / operator_norm(sm);
  const auto hs = pseudo_power(phi2.density(), 0.5, tol);
  const StateDensity bounded(lambda * (hs * sm * hs));
  const auto cb = cocycle_analytic(bounded, phi2, Complex(0.0, -0.5), tol);
  c.out.at_most("cocycle.analytic_norm_bound", std::max(0.0, operator_norm(cb) - std::sqrt(lambda)), 1e-9);
}

inline void kms_suite(const Context& c, Rng& rng) {
  const auto& a = c.algebra;
  const auto h = random_hermitian(a, rng);
  auto g = hermitian_exp(h, -1.0);
  g *= 1.0 / g.trace_can().real();
  const StateDensity gibbs(g);
  const auto x = random_element(a, rng);
  const auto y = random_element(a, rng);
  const std::vector<double> ts{-1.0, -0.3, 0.0, 0.7, 2.0};
  const double scale = operator_norm(x) * operator_norm(y);
  const auto rep = kms_check(gibbs, h, x, y, ts, 1.0, 1e-8, c.tol);
  c.out.at_most("kms.gibbs_boundary", rep.max_residual / scale, 1e-8);
  const auto own = kms_check(gibbs, x, y, ts, 1e-8, c.tol);
  c.out.at_most("kms.modular_dynamics", own.max_residual / scale, 1e-8);

  constexpr double eps = 1e-2;
  const auto rho = random_faithful_state(a, rng);
  const StateDensity perturbed((1.0 - eps) * g + eps * rho.density());
  const auto bad = kms_check(perturbed, h, x, y, ts, 1.0, 1e-8, c.tol);
  if (!a.is_commutative())
    c.out.fraction_at_least("kms.perturbed_control_fails", bad.max_residual / scale, 1e-4, 0.95);
}

inline void pedersen_takesaki_suite(const Context& c, Rng& rng) {
  const auto& a = c.algebra;
  const auto& tol = c.tol;
  const auto phi = random_faithful_state(a, rng);
  // ψ commuting with φ: a positive function of h_φ.
  const auto sd = spectral_decompose(phi.density(), tol);
  AlgebraElement hp(a);
  for (const auto& pr : sd.projectors) hp += rng.uniform(0.1, 2.0) * pr;
  hp *= 1.0 / hp.trace_can().real();
  const StateDensity psi(hp);
  const auto res = pedersen_takesaki(psi, phi, tol);
  if (const auto* hd = std::get_if<AlgebraElement>(&res)) {
    const auto root = pseudo_power(*hd, 0.5, tol);
    double err = 0.0;
    for (const auto& e : AlgebraElement::basis(a)) err = std::max(err, std::abs(psi(e) - phi(root * e * root)));
    c.out.at_most("pt.commuting_recovery", err, 1e-10);
  } else {
    c.out.at_most("pt.commuting_recovery", kInf, 1e-10);
  }

  if (a.is_commutative()) return;
  const auto generic = random_faithful_state(a, rng);
  const auto fail = pedersen_takesaki(generic, phi, tol);
  if (const auto* f = std::get_if<InvarianceFailure>(&fail)) {
    double at_one = 0.0;
    for (const auto& smp : f->deviation.samples)
      if (smp.t == 1.0) at_one = smp.residual;
    c.out.at_least("pt.noncommuting_deviation", at_one, 1e-6);
  } else {
    c.out.at_least("pt.noncommuting_deviation", 0.0, 1e-6);
  }
}

inline void liouvillean_suite(const Context& c, Rng& rng) {
  const auto& a = c.algebra;
  const StandardForm sf(a);
  const auto h = random_hermitian(a, rng);
  const auto lv = standard_liouvillean(h, sf, c.tol);
  const Matrix k = lv.generator.dense();
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (k + k.adjoint()));
  std::vector<double> dense_ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(dense_ev.begin(), dense_ev.end(), std::greater<>());
  const auto formula = lv.spectrum();
  double err = dense_ev.size() == formula.size() ? 0.0 : kInf;
  for (std::size_t i = 0; i < std::min(dense_ev.size(), formula.size()); ++i)
    err = std::max(err, std::abs(dense_ev[i] - formula[i]));
  c.out.at_most("liouvillean.spectrum", err, 1e-9);

  Matrix jd = sf.conjugation_dense().matrix;
  if (c.poison == Poison::FlipSignInJ) jd *= -1.0;
  const AntilinearOperator j{jd};
  // JK + KJ = 0 ⇔ JKJ = -K.
  c.out.at_most("liouvillean.anticommutes_with_J", dense_norm(j.conjugate_linear(k) + k), 1e-10);

  const double t = rng.uniform(-2.0, 2.0);
  const auto v = lv.exp_it(t);
  const auto xi = random_positive(a, rng);
  const auto moved = v(xi);
  c.out.at_most("liouvillean.cone_preserved",
                rel(std::max(0.0, -min_eigenvalue(0.5 * (moved + moved.adjoint()))), operator_norm(xi)), 1e-9);
  const auto x = random_element(a, rng);
  const auto alpha = hermitian_exp(h, kI * t) * x * hermitian_exp(h, -kI * t);
  const Matrix vd = v.dense();
  c.out.at_most("liouvillean.implements_dynamics",
                rel(dense_norm(vd * sf.left(x).dense() * vd.adjoint() - sf.left(alpha).dense()), operator_norm(x)),
                1e-9);
}

inline void lp_suite(const Context& c, Rng& rng) {
  const auto& a = c.algebra;
  const auto x = random_element(a, rng);
  const auto y = random_element(a, rng);
  const auto z = random_element(a, rng);
  const auto u = random_unitary(a, rng);
  const auto w = random_unitary(a, rng);
  const std::vector<double> ps{1.0, 1.5, 2.0, 3.0, 4.0, kInf};
  for (const auto& tau : {TraceSpec::can(a), TraceSpec::rep(a)}) {
    std::vector<double> norms;
    for (double p : ps) {
      const double nx = lp_norm(x, p, tau);
      const double ny = lp_norm(y, p, tau);
      norms.push_back(nx);
      c.out.at_most("lp.triangle", rel(std::max(0.0, lp_norm(x + y, p, tau) - nx - ny), nx + ny), 1e-10);
      c.out.at_most("lp.unitary_invariance", rel(std::abs(lp_norm(u * x * w, p, tau) - nx), nx), 1e-10);
      const double q = conjugate_exponent(p);
      const auto d = extremal_dual(x, p, tau, c.tol);
      c.out.at_most("lp.dual_unit_norm", std::abs(lp_norm(d, q, tau) - 1.0), 1e-9);
      c.out.at_most("lp.dual_saturation", rel(std::abs(duality_pair(x, d, tau) - nx), nx), 1e-9);
      c.out.at_most("lp.holder", rel(std::max(0.0, std::abs(duality_pair(x, z, tau)) - nx * lp_norm(z, q, tau)), nx),
                    1e-10);
    }
    for (std::size_t i = 1; i < norms.size(); ++i)
      c.out.at_most("lp.monotone_in_p", rel(std::max(0.0, norms[i] - norms[i - 1]), norms[i - 1]), 1e-12);
  }
}

inline double modular_via_absolute(const AlgebraElement& x, const OrliczFunction& f, const TraceSpec& tau,
                                   const Tolerances& tol) {
  const auto ev = hermitian_eigenvalues(absolute_value(x, tol));
  double s = 0.0;
  for (std::size_t k = 0; k < ev.size(); ++k)
    for (Eigen::Index i = 0; i < ev[k].size(); ++i) s += tau.weight(k) * f(std::max(0.0, ev[k](i)));
  return s;
}

inline void orlicz_suite(const Context& c, Rng& rng) {
  const auto& a = c.algebra;
  const auto x = random_element(a, rng);
  const auto y = random_element(a, rng);
  const auto tab = OrliczFunction::tabulated({0.0, 1.0, 2.0, 3.0}, {0.0, 0.5, 2.0, 4.5}, 3.0, false);
  const std::vector<OrliczFunction> family{OrliczFunction::cosh_minus_one(), OrliczFunction::exp_minus_one(0.5), tab,
                                           OrliczFunction::power(1.5)};
  for (const auto& tau : {TraceSpec::can(a), TraceSpec::rep(a)}) {
    for (double p : {1.0, 2.0, 3.0, 3.5}) {
      const double np = lp_norm(x, p, tau);
      c.out.at_most("orlicz.power_collapse", rel(std::abs(luxemburg_norm(x, OrliczFunction::power(p), tau) - np), np),
                    1e-9);
    }
    for (const auto& f : family) {
      const double lx = luxemburg_norm(x, f, tau);
      const double ly = luxemburg_norm(y, f, tau);
      c.out.at_most("orlicz.triangle", rel(std::max(0.0, luxemburg_norm(x + y, f, tau) - lx - ly), lx + ly), 1e-8);
      const double lambda = rng.uniform(0.1, 10.0);
      c.out.at_most("orlicz.homogeneity", rel(std::abs(luxemburg_norm(lambda * x, f, tau) - lambda * lx), lambda * lx),
                    1e-9);
      const double direct = modular_via_absolute(x, f, tau, c.tol);
      c.out.at_most("orlicz.rearrangement_identity",
                    rel(std::abs(orlicz_modular_rearranged(x, f, tau) - direct), std::max(1.0, direct)), 1e-12);
      const bool finite_direct = std::isfinite(orlicz_modular(2.0 * x, f, tau));
      const bool finite_steps = std::isfinite(orlicz_modular_rearranged(2.0 * x, f, tau));
      c.out.at_most("orlicz.membership_agrees", finite_direct == finite_steps ? 0.0 : 1.0, 0.0);
    }
    c.out.at_most("orlicz.norm_of_zero", luxemburg_norm(AlgebraElement(a), family[0], tau), 0.0);

    // Orlicz–Hölder τ(|xy|) ≤ 2‖x‖_Υ‖y‖_{Υ*}.
    for (const auto& f : {OrliczFunction::power(3.0), OrliczFunction::cosh_minus_one()}) {
      const auto g = young_conjugate(f);
      const double lhs = lp_norm(x * y, 1.0, tau);
      const double rhs = 2.0 * luxemburg_norm(x, f, tau) * luxemburg_norm(y, g, tau);
      c.out.at_most("orlicz.holder", rel(std::max(0.0, lhs - rhs), rhs), 1e-8);
    }

    // |x| ≤ |y| for commuting x = u diag(d) u*, y = u diag(d + e) u*.
    const auto u = random_unitary(a, rng);
    AlgebraElement dx(a), dy(a);
    for (std::size_t k = 0; k < a.block_count(); ++k) {
      RealVector d(a.dim(k));
      for (auto& v : d) v = std::abs(rng.normal());
      RealVector e(a.dim(k));
      for (auto& v : e) v = std::abs(rng.normal());
      dx.block(k) = u.block(k) * d.cast<Complex>().asDiagonal() * u.block(k).adjoint();
      dy.block(k) = u.block(k) * (d + e).cast<Complex>().asDiagonal() * u.block(k).adjoint();
    }
    for (const auto& f : family)
      c.out.at_most("orlicz.monotone", std::max(0.0, luxemburg_norm(dx, f, tau) - luxemburg_norm(dy, f, tau)), 1e-9);
  }

  std::vector<std::pair<double, double>> samples;
  for (int i = 0; i < 8; ++i) samples.emplace_back(std::abs(rng.normal()) * 2.0, std::abs(rng.normal()) * 2.0);
  for (const auto& f : family) {
    const auto yr = young_inequality_check(f, samples);
    c.out.at_most("orlicz.young_inequality", yr.pass ? 0.0 : 1.0, 0.0);
  }
}

inline MeasureVector random_measure(int atoms, Rng& rng, double lo = 0.1, double hi = 2.0) {
  std::vector<double> w(static_cast<std::size_t>(atoms));
  for (auto& v : w) v = rng.uniform(lo, hi);
  return MeasureVector(std::move(w));
}

inline std::vector<double> random_function(int atoms, Rng& rng) {
  std::vector<double> f(static_cast<std::size_t>(atoms));
  for (auto& v : f) v = rng.normal();
  return f;
}

inline void boolean_suite(Ledger& out, Rng& rng) {
  const int atoms = rng.integer(1, 6);
  const FiniteBooleanAlgebra b(atoms);

  if (atoms <= 4) {
    const auto spec = stone_spectrum(b);
    double bad = 0.0;
    std::vector<bool> hit(static_cast<std::size_t>(b.size()), false);
    for (std::uint64_t xb = 0; xb < b.size(); ++xb) {
      const auto x = b.element(xb);
      const auto rx = stone_represent(spec, x);
      hit[rx] = true;
      if (stone_represent(spec, b.complement(x)) != (~rx & b.mask())) bad += 1.0;
      for (std::uint64_t yb = 0; yb < b.size(); ++yb) {
        const auto y = b.element(yb);
        const auto ry = stone_represent(spec, y);
        if (stone_represent(spec, b.meet(x, y)) != (rx & ry)) bad += 1.0;
        if (stone_represent(spec, b.join(x, y)) != (rx | ry)) bad += 1.0;
      }
    }
    for (bool h : hit)
      if (!h) bad += 1.0;
    out.at_most("boolean.stone_isomorphism", bad, 0.0);
  }

  const auto m1 = random_measure(atoms, rng);
  const auto m2 = random_measure(atoms, rng);
  const auto m3 = random_measure(atoms, rng);
  const auto q21 = rn_quotient(m2, m1), q32 = rn_quotient(m3, m2), q31 = rn_quotient(m3, m1), q12 = rn_quotient(m1, m2);
  double chain = 0.0, inv = 0.0;
  for (std::size_t i = 0; i < q21.size(); ++i) {
    chain = std::max(chain, std::abs(q32[i] * q21[i] - q31[i]) / q31[i]);
    inv = std::max(inv, std::abs(q21[i] * q12[i] - 1.0));
  }
  out.at_most("boolean.rn_chain_rule", chain, 1e-14);
  out.at_most("boolean.rn_inversion", inv, 1e-14);

  const double gamma = rng.uniform(0.1, 1.0);
  const CanonicalLpElement cx(random_function(atoms, rng), m1, gamma);
  const CanonicalLpElement cy(random_function(atoms, rng), m2, gamma);
  const auto nu = random_measure(atoms, rng);
  const auto rx = cx.rereferenced(nu);
  const auto ry = cy.rereferenced(random_measure(atoms, rng));
  out.at_most("boolean.canonical_norm_independent", rel(std::abs(rx.norm() - cx.norm()), cx.norm()), 1e-12);
  const auto sum_a = canonical::add(cx, cy);
  const auto sum_b = canonical::add(rx, ry, nu);
  out.at_most("boolean.canonical_sum_independent", sum_a.equivalent(sum_b, 1e-12) ? 0.0 : 1.0, 0.0);
  out.at_most("boolean.canonical_sum_norm_independent", rel(std::abs(sum_a.norm() - sum_b.norm()), sum_a.norm()),
              1e-12);
  const CanonicalLpElement c1(random_function(atoms, rng), m1, 1.0);
  const double i1 = canonical_integral(c1);
  out.at_most("boolean.canonical_integral_independent",
              rel(std::abs(canonical_integral(c1.rereferenced(nu)) - i1), std::max(1.0, std::abs(i1))), 1e-12);

  // Disjoint supports add in p-th powers.
  auto f = random_function(atoms, rng), g = random_function(atoms, rng);
  for (int i = 0; i < atoms; ++i) (i % 2 ? f : g)[static_cast<std::size_t>(i)] = 0.0;
  std::vector<double> fg(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) fg[i] = f[i] + g[i];
  const double p = 1.0 / gamma;
  const double lhs = std::pow(lp_b_norm(fg, p, m1), p);
  const double rhs = std::pow(lp_b_norm(f, p, m1), p) + std::pow(lp_b_norm(g, p, m1), p);
  out.at_most("boolean.disjoint_additivity", rel(std::abs(lhs - rhs), rhs), 1e-13);

  // Commutative bridge through the diagonal embedding.
  const auto emb = embed_diagonal(b);
  const auto sphi = emb.state(m1), spsi = emb.state(m2);
  const auto q = rn_quotient(m2, m1);
  for (double t : {-2.0, -1.0, 0.5, 1.0, 2.0}) {
    const auto u = connes_cocycle(spsi, sphi, t);
    double err = 0.0;
    for (int i = 0; i < atoms; ++i)
      err = std::max(err, std::abs(u.block(static_cast<std::size_t>(i))(0, 0) - std::pow(q[static_cast<std::size_t>(i)], kI * t)));
    out.at_most("bridge.cocycle_is_rn_power", err, 1e-12);
  }
  const auto pt = pedersen_takesaki(spsi, sphi);
  double pt_err = kInf;
  if (const auto* h = std::get_if<AlgebraElement>(&pt)) {
    pt_err = 0.0;
    for (int i = 0; i < atoms; ++i)
      pt_err = std::max(pt_err, std::abs(h->block(static_cast<std::size_t>(i))(0, 0) - q[static_cast<std::size_t>(i)]));
  }
  out.at_most("bridge.pt_density_is_rn_quotient", pt_err, 1e-13);

  auto w = m1.weights();
  if (atoms > 1) w[static_cast<std::size_t>(rng.integer(0, atoms - 1))] = 0.0;
  const MeasureVector mz(w);
  const auto back = emb.measure(emb.state(mz));
  double rt = 0.0;
  for (int i = 0; i < atoms; ++i)
    rt = std::max(rt, std::abs(back.weights()[static_cast<std::size_t>(i)] - w[static_cast<std::size_t>(i)]));
  out.at_most("bridge.measure_roundtrip", rt, 0.0);
  out.at_most("bridge.faithful_iff_strictly_positive", emb.state(mz).is_faithful() == mz.strictly_positive() ? 0.0 : 1.0,
              0.0);
}

}  // namespace suites

/// Runs every suite for each algebra and trial. Trial seeds are derived from
/// (seed, algebra index, trial, suite) so results do not depend on scheduling.
inline VerifyReport run_verify(const VerifyOptions& opt) {
  VerifyReport rep;
  rep.seed = opt.seed;
  rep.trials = opt.trials;
  rep.algebras = opt.algebras;
  if (opt.trials < 0) throw Error(ErrorKind::InvalidInput, "trials must be nonnegative");
  if (opt.algebras.empty()) throw Error(ErrorKind::InvalidInput, "verify needs at least one algebra");
  if (opt.trials == 0) {
    rep.warnings.push_back("trials = 0: no identity was exercised, pass is vacuous");
    return rep;
  }

  using Suite = void (*)(const suites::Context&, Rng&);
  static constexpr Suite kSuites[] = {suites::algebra_core,      suites::states_suite, suites::modular_suite,
                                      suites::cocycle_suite,     suites::kms_suite,    suites::pedersen_takesaki_suite,
                                      suites::liouvillean_suite, suites::lp_suite,     suites::orlicz_suite};

  const std::size_t na = opt.algebras.size();
  // One job per (algebra, trial) plus one boolean job per trial.
  const std::size_t jobs = (na + 1) * static_cast<std::size_t>(opt.trials);
  const int nthreads = std::max(1, std::min<int>(thread_budget(opt.threads), static_cast<int>(jobs)));

  std::atomic<std::size_t> next{0};
  std::mutex merge_mutex;
  std::exception_ptr failure;
  auto worker = [&]() {
    Ledger local;
    try {
      for (std::size_t j = next++; j < jobs; j = next++) {
        const std::size_t ai = j % (na + 1);
        const auto trial = static_cast<std::uint64_t>(j / (na + 1));
        if (ai == na) {
          Rng rng{opt.seed, ai, trial, 0};
          suites::boolean_suite(local, rng);
          continue;
        }
        const suites::Context ctx{opt.algebras[ai], opt.tol, opt.poison, local};
        for (std::size_t s = 0; s < std::size(kSuites); ++s) {
          Rng rng{opt.seed, ai, trial, s + 1};
          kSuites[s](ctx, rng);
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(merge_mutex);
      if (!failure) failure = std::current_exception();
      next = jobs;
    }
    std::lock_guard<std::mutex> lock(merge_mutex);
    rep.ledger.merge(local);
  };

  std::vector<std::thread> pool;
  for (int i = 1; i < nthreads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  for (const auto& [name, r] : rep.ledger.items()) rep.pass = rep.pass && r.pass();
  return rep;
}

}  // namespace nckit
