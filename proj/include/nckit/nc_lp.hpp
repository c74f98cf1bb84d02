#pragma once

// Trace Lp theory. At finite dimension Lp(N, τ) is N with the norm
// ‖x‖_p = τ(|x|^p)^{1/p}; elements are plain AlgebraElements.

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "nckit/algebra.hpp"
#include "nckit/trace.hpp"

namespace nckit {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Right-continuous nonincreasing step function on [0, ∞), zero after the
/// last step.
class StepFunction {
 public:
  struct Step {
    double width;
    double value;
  };

  StepFunction() = default;
  explicit StepFunction(std::vector<Step> steps) : steps_(std::move(steps)) {
    for (std::size_t i = 0; i < steps_.size(); ++i) {
      if (!(steps_[i].width > 0.0)) throw Error(ErrorKind::InvalidInput, "step widths must be positive");
      if (i > 0 && steps_[i].value > steps_[i - 1].value)
        throw Error(ErrorKind::InvalidInput, "step values must be nonincreasing");
    }
  }

  const std::vector<Step>& steps() const noexcept { return steps_; }

  double operator()(double t) const {
    double edge = 0.0;
    for (const auto& s : steps_) {
      edge += s.width;
      if (t < edge) return s.value;
    }
    return 0.0;
  }

  /// ∫_0^∞ f(μ_t) dt for f with f(0) = 0.
  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (const auto& st : steps_) s += st.width * f(st.value);
    return s;
  }

  double support_length() const {
    double s = 0.0;
    for (const auto& st : steps_) s += st.width;
    return s;
  }

 private:
  std::vector<Step> steps_;
};

inline void require_exponent(double p) {
  if (std::isnan(p) || p < 1.0) throw Error(ErrorKind::BadExponent, "exponent must satisfy p >= 1");
}

/// ‖x‖_p = (Σ_k w_k Σ_i s_{k,i}^p)^{1/p}; p = ∞ gives the operator norm.
inline double lp_norm(const AlgebraElement& x, double p, const TraceSpec& tau) {
  require_exponent(p);
  tau.check(x.algebra());
  if (std::isinf(p)) return operator_norm(x);
  const auto sv = singular_values(x);
  // Scale by the largest singular value to keep s^p in range.
  double top = 0.0;
  for (const auto& s : sv)
    if (s.size() > 0) top = std::max(top, s.maxCoeff());
  if (top == 0.0) return 0.0;
  double sum = 0.0;
  for (std::size_t k = 0; k < sv.size(); ++k)
    for (Eigen::Index i = 0; i < sv[k].size(); ++i) sum += tau.weight(k) * std::pow(sv[k](i) / top, p);
  return top * std::pow(sum, 1.0 / p);
}

/// τ(xy).
inline Complex duality_pair(const AlgebraElement& x, const AlgebraElement& y, const TraceSpec& tau) {
  require_same_algebra(x.algebra(), y.algebra());
  return tau(x * y);
}

/// Conjugate exponent q with 1/p + 1/q = 1.
inline double conjugate_exponent(double p) {
  require_exponent(p);
  if (p == 1.0) return kInf;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

/// The norming element y with ‖y‖_q = 1 and τ(xy) = ‖x‖_p:
/// y = |x|^{p-1} v* / ‖x‖_p^{p-1} for x = v|x|, and for p = ∞ a rank-one
/// element on the top singular pair.
inline AlgebraElement extremal_dual(const AlgebraElement& x, double p, const TraceSpec& tau,
                                    const Tolerances& tol = {}) {
  require_exponent(p);
  tau.check(x.algebra());
  AlgebraElement y(x.algebra());
  if (operator_norm(x) == 0.0) return y;
  if (std::isinf(p)) {
    std::size_t best_k = 0;
    double best = -1.0;
    for (std::size_t k = 0; k < x.blocks().size(); ++k) {
      Eigen::JacobiSVD<Matrix> svd(x.block(k));
      if (svd.singularValues().size() > 0 && svd.singularValues()(0) > best) {
        best = svd.singularValues()(0);
        best_k = k;
      }
    }
    Eigen::JacobiSVD<Matrix> svd(x.block(best_k), Eigen::ComputeFullU | Eigen::ComputeFullV);
    y.block(best_k) = svd.matrixV().col(0) * svd.matrixU().col(0).adjoint() / tau.weight(best_k);
    return y;
  }
  const auto pd = polar_decompose(x, tol);
  const double nrm = lp_norm(x, p, tau);
  const auto absp = pseudo_power(pd.abs, p - 1.0, tol);
  return (1.0 / std::pow(nrm, p - 1.0)) * (absp * pd.v.adjoint());
}

/// x^p for positive x by spectral calculus (p > 0).
inline AlgebraElement mazur(const AlgebraElement& x, double p, const Tolerances& tol = {}) {
  if (!(p > 0.0) || std::isinf(p)) throw Error(ErrorKind::BadExponent, "mazur exponent must be positive and finite");
  if (!is_positive(x, tol)) throw Error(ErrorKind::NotPositive, "mazur map needs a positive element");
  return hermitian_function(x, [&](double lam) -> Complex { return lam > 0.0 ? std::pow(lam, p) : 0.0; });
}

/// Generalised singular value function μ_t(x): singular values of all blocks
/// in descending order, each of width w_k. Zero singular values are dropped
/// and equal values (to 1e-13 relative) are merged.
inline StepFunction rearrangement(const AlgebraElement& x, const TraceSpec& tau) {
  tau.check(x.algebra());
  std::vector<StepFunction::Step> raw;
  const auto sv = singular_values(x);
  double top = 0.0;
  for (std::size_t k = 0; k < sv.size(); ++k)
    for (Eigen::Index i = 0; i < sv[k].size(); ++i) {
      raw.push_back({tau.weight(k), sv[k](i)});
      top = std::max(top, sv[k](i));
    }
  std::stable_sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) { return a.value > b.value; });
  std::vector<StepFunction::Step> merged;
  const double eps = 1e-13 * top;
  for (const auto& s : raw) {
    if (s.value <= eps) break;
    if (!merged.empty() && merged.back().value - s.value <= eps) {
      auto& m = merged.back();
      m.value = (m.value * m.width + s.value * s.width) / (m.width + s.width);
      m.width += s.width;
    } else {
      merged.push_back(s);
    }
  }
  return StepFunction(std::move(merged));
}

}  // namespace nckit
