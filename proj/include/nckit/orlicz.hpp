#pragma once

// Orlicz functions, Young conjugates and noncommutative Orlicz (Luxemburg)
// norms. Everything is evaluated on the finite singular-value multiset, so
// modulars are finite sums. The space L_Υ(N) is N with the Luxemburg norm.

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nckit/algebra.hpp"
#include "nckit/nc_lp.hpp"
#include "nckit/trace.hpp"

namespace nckit {

class OrliczFunction {
 public:
  /// Υ(t) = scale · t^p, p ≥ 1.
  struct Power {
    double p;
    double scale;
  };
  /// Υ(t) = cosh(scale · t) − 1.
  struct CoshMinusOne {
    double scale;
  };
  /// Υ(t) = exp(scale · t) − 1.
  struct ExpMinusOne {
    double scale;
  };
  /// Convex piecewise-linear interpolation of (x_i, y_i), x_0 = 0 = y_0.
  /// Past the last breakpoint: linear with `tail_slope`, or +∞ when `cutoff`.
  struct Tabulated {
    std::vector<double> xs;
    std::vector<double> ys;
    double tail_slope = 0.0;
    bool cutoff = false;
  };
  /// y ↦ sup_{x≥0} {x y − f(x)} evaluated numerically by grid refinement.
  struct Conjugate {
    std::shared_ptr<const OrliczFunction> primal;
  };

  using Family = std::variant<Power, CoshMinusOne, ExpMinusOne, Tabulated, Conjugate>;

  static OrliczFunction power(double p, double scale = 1.0) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw Error(ErrorKind::BadExponent, "power Orlicz function needs 1 <= p < inf");
    if (!(scale > 0.0) || !std::isfinite(scale)) throw Error(ErrorKind::InvalidInput, "scale must be positive");
    return OrliczFunction(Power{p, scale});
  }

  static OrliczFunction cosh_minus_one(double scale = 1.0) {
    if (!(scale > 0.0) || !std::isfinite(scale)) throw Error(ErrorKind::InvalidInput, "scale must be positive");
    return OrliczFunction(CoshMinusOne{scale});
  }

  static OrliczFunction exp_minus_one(double scale = 1.0) {
    if (!(scale > 0.0) || !std::isfinite(scale)) throw Error(ErrorKind::InvalidInput, "scale must be positive");
    return OrliczFunction(ExpMinusOne{scale});
  }

  /// Validated tabulated function. Points must start at (0, 0), have
  /// strictly increasing abscissae, and describe a convex, nondecreasing
  /// function that is positive away from 0.
  static OrliczFunction tabulated(std::vector<double> xs, std::vector<double> ys, double tail_slope, bool cutoff) {
    auto f = tabulated_unchecked(std::move(xs), std::move(ys), tail_slope, cutoff);
    const auto& t = std::get<Tabulated>(f.family_);
    if (t.xs.size() < 2) throw Error(ErrorKind::InvalidInput, "tabulated function needs at least two points");
    if (t.xs[0] != 0.0 || t.ys[0] != 0.0) throw Error(ErrorKind::InvalidInput, "tabulated function must start at (0, 0)");
    for (std::size_t i = 1; i < t.xs.size(); ++i) {
      if (!(t.xs[i] > t.xs[i - 1])) throw Error(ErrorKind::InvalidInput, "breakpoints must be strictly increasing");
      if (!(t.ys[i] > 0.0)) throw Error(ErrorKind::InvalidInput, "tabulated values must be positive away from 0");
      if (!(t.ys[i] >= t.ys[i - 1])) throw Error(ErrorKind::InvalidInput, "tabulated function must be nondecreasing");
    }
    if (!cutoff && !(tail_slope > 0.0 && std::isfinite(tail_slope)))
      throw Error(ErrorKind::InvalidInput, "tail slope must be positive and finite (or use a cutoff)");
    if (!f.is_convex_on_grid(t.xs.back() * (cutoff ? 1.0 : 2.0)))
      throw Error(ErrorKind::InvalidInput, "tabulated function is not convex");
    return f;
  }

  /// Unvalidated tabulated function; used for conjugates, which may vanish on
  /// an initial interval.
  static OrliczFunction tabulated_unchecked(std::vector<double> xs, std::vector<double> ys, double tail_slope,
                                            bool cutoff) {
    if (xs.size() != ys.size() || xs.empty())
      throw Error(ErrorKind::InvalidInput, "tabulated function needs matching nonempty x and y lists");
    return OrliczFunction(Tabulated{std::move(xs), std::move(ys), tail_slope, cutoff});
  }

  static OrliczFunction conjugate_of(const OrliczFunction& f) {
    return OrliczFunction(Conjugate{std::make_shared<const OrliczFunction>(f)});
  }

  const Family& family() const noexcept { return family_; }

  std::string name() const {
    return std::visit(
        [](const auto& f) -> std::string {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, Power>) return "power";
          else if constexpr (std::is_same_v<T, CoshMinusOne>) return "coshm1";
          else if constexpr (std::is_same_v<T, ExpMinusOne>) return "expm1";
          else if constexpr (std::is_same_v<T, Tabulated>) return "tabulated";
          else return "conjugate";
        },
        family_);
  }

  /// Υ(t) for t ≥ 0 (negative arguments are reflected).
  double operator()(double t) const {
    t = std::abs(t);
    return std::visit([t](const auto& f) { return eval(f, t); }, family_);
  }

  /// Midpoint convexity on a dyadic grid of [0, upper].
  bool is_convex_on_grid(double upper, int levels = 10, double tol = 1e-12) const {
    const int n = 1 << levels;
    const double h = upper / n;
    for (int i = 1; i < n; ++i) {
      const double a = (*this)((i - 1) * h);
      const double b = (*this)((i + 1) * h);
      const double m = (*this)(i * h);
      if (!std::isfinite(a) || !std::isfinite(b)) continue;
      if (m > 0.5 * (a + b) + tol * std::max(1.0, std::abs(m))) return false;
    }
    return true;
  }

 private:
  explicit OrliczFunction(Family f) : family_(std::move(f)) {}

  static double eval(const Power& f, double t) { return f.scale * std::pow(t, f.p); }
  static double eval(const CoshMinusOne& f, double t) {
    // cosh(u) − 1 = 2 sinh²(u/2), without cancellation near 0.
    const double s = std::sinh(0.5 * f.scale * t);
    return 2.0 * s * s;
  }
  static double eval(const ExpMinusOne& f, double t) { return std::expm1(f.scale * t); }
  static double eval(const Tabulated& f, double t) {
    const auto& xs = f.xs;
    if (t > xs.back()) return f.cutoff ? kInf : f.ys.back() + f.tail_slope * (t - xs.back());
    auto it = std::upper_bound(xs.begin(), xs.end(), t);
    if (it == xs.begin()) return f.ys.front();
    if (it == xs.end()) return f.ys.back();
    const auto i = static_cast<std::size_t>(it - xs.begin());
    const double w = (t - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return f.ys[i - 1] + w * (f.ys[i] - f.ys[i - 1]);
  }
  static double eval(const Conjugate& f, double y);

  Family family_;
};

/// sup_{x ≥ 0} {x y − f(x)} for convex f with f(0) = 0, by repeated grid
/// refinement around the best grid point until successive estimates agree to
/// `rel_tol` and the bracket has collapsed. Returns +∞ when the objective is
/// still increasing at x = 2^1000.
inline double numeric_conjugate(const OrliczFunction& f, double y, double rel_tol = 1e-8) {
  y = std::abs(y);
  auto g = [&](double x) {
    const double fx = f(x);
    if (!std::isfinite(fx)) return -kInf;
    return x * y - fx;
  };
  double x_hi = 1.0;
  int doublings = 0;
  while (g(2.0 * x_hi) > g(x_hi)) {
    x_hi *= 2.0;
    if (++doublings > 1000) return kInf;
  }
  double lo = 0.0;
  double hi = 2.0 * x_hi;
  constexpr int kGrid = 32;
  double best = g(0.0);
  double prev = -kInf;
  for (int iter = 0; iter < 200; ++iter) {
    const double h = (hi - lo) / kGrid;
    int arg = 0;
    double val = -kInf;
    for (int i = 0; i <= kGrid; ++i) {
      const double gi = g(lo + i * h);
      if (gi > val) {
        val = gi;
        arg = i;
      }
    }
    best = std::max(best, val);
    const double new_lo = lo + std::max(arg - 1, 0) * h;
    const double new_hi = lo + std::min(arg + 1, kGrid) * h;
    lo = new_lo;
    hi = new_hi;
    const bool settled = std::abs(best - prev) <= rel_tol * std::max(std::abs(best), 1e-300);
    if (settled && (hi - lo) <= 1e-13 * std::max(1.0, hi)) break;
    prev = best;
  }
  return std::max(best, 0.0);
}

inline double OrliczFunction::eval(const Conjugate& f, double y) { return numeric_conjugate(*f.primal, y); }

/// Young conjugate Υ^Y(y) = sup_{x≥0} {x|y| − Υ(x)}.
/// Power: closed form (t^p/p ↦ t^q/q). Tabulated: exact vertex maximum,
/// again piecewise linear. Other families: numerical supremum.
inline OrliczFunction young_conjugate(const OrliczFunction& f) {
  if (const auto* pw = std::get_if<OrliczFunction::Power>(&f.family())) {
    if (pw->p == 1.0) {
      // sup_x x(y − a) is 0 for y ≤ a and +∞ beyond.
      return OrliczFunction::tabulated_unchecked({0.0, pw->scale}, {0.0, 0.0}, 0.0, true);
    }
    const double q = pw->p / (pw->p - 1.0);
    return OrliczFunction::power(q, (1.0 / q) * std::pow(pw->scale * pw->p, 1.0 - q));
  }
  if (const auto* tab = std::get_if<OrliczFunction::Tabulated>(&f.family())) {
    const auto& xs = tab->xs;
    const auto& ys = tab->ys;
    std::vector<double> sx{0.0};
    std::vector<double> sy{-ys.front()};
    auto push = [&](double s, double v) {
      if (s > sx.back()) {
        sx.push_back(s);
        sy.push_back(v);
      }
    };
    // On [s_i, s_{i+1}] the conjugate is s x_i − y_i, s_i the segment slopes.
    for (std::size_t i = 1; i < xs.size(); ++i) {
      const double s = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]);
      push(s, s * xs[i - 1] - ys[i - 1]);
    }
    if (tab->cutoff) {
      return OrliczFunction::tabulated_unchecked(std::move(sx), std::move(sy), xs.back(), false);
    }
    push(tab->tail_slope, tab->tail_slope * xs.back() - ys.back());
    return OrliczFunction::tabulated_unchecked(std::move(sx), std::move(sy), 0.0, true);
  }
  return OrliczFunction::conjugate_of(f);
}

struct YoungReport {
  bool pass = true;
  double worst_slack = kInf;
  double worst_x = 0.0;
  double worst_y = 0.0;
};

/// Checks x y ≤ Υ(x) + Υ^Y(y) on sample pairs, reporting the worst slack.
inline YoungReport young_inequality_check(const OrliczFunction& f, const std::vector<std::pair<double, double>>& samples,
                                          double tol = 1e-10) {
  const auto conj = young_conjugate(f);
  YoungReport r;
  for (const auto& [x, y] : samples) {
    const double slack = f(x) + conj(y) - std::abs(x) * std::abs(y);
    if (slack < r.worst_slack) {
      r.worst_slack = slack;
      r.worst_x = x;
      r.worst_y = y;
    }
  }
  r.pass = samples.empty() || r.worst_slack >= -tol;
  return r;
}

struct Delta2Result {
  bool holds = false;
  double lambda = kInf;
  bool closed_form = false;
};

/// Δ₂ condition Υ(2x) ≤ λ Υ(x), globally on [1e-6, 1e6] or locally on
/// [x0, 1e6]. Named families use closed forms; tabulated and conjugate
/// functions use a dyadic scan, which is a heuristic: the scan reports
/// (true, 2·max ratio) unless a ratio is infinite or the ratios keep growing.
inline Delta2Result delta2_check(const OrliczFunction& f, std::optional<double> local_from = std::nullopt) {
  if (const auto* pw = std::get_if<OrliczFunction::Power>(&f.family())) return {true, std::pow(2.0, pw->p), true};
  if (std::holds_alternative<OrliczFunction::ExpMinusOne>(f.family()) ||
      std::holds_alternative<OrliczFunction::CoshMinusOne>(f.family()))
    return {false, kInf, true};  // Υ(2x)/Υ(x) is unbounded as x → ∞

  const double start = local_from.value_or(1e-6);
  std::vector<double> ratios;
  for (double x = start; x <= 1e6; x *= 2.0) {
    const double a = f(x);
    const double b = f(2.0 * x);
    if (a == 0.0 && b == 0.0) continue;
    const double r = b / a;
    if (!std::isfinite(r)) return {false, kInf, false};
    ratios.push_back(r);
  }
  if (ratios.empty()) return {false, kInf, false};
  const double max_ratio = *std::max_element(ratios.begin(), ratios.end());
  const std::size_t tail = std::min<std::size_t>(4, ratios.size());
  const double head_max =
      ratios.size() > tail ? *std::max_element(ratios.begin(), ratios.end() - static_cast<long>(tail)) : ratios.front();
  const double tail_max = *std::max_element(ratios.end() - static_cast<long>(tail), ratios.end());
  if (tail_max > 2.0 * head_max) return {false, kInf, false};
  return {true, 2.0 * max_ratio, false};
}

/// τ(Υ(|x|)) = Σ_k w_k Σ_i Υ(s_{k,i}).
inline double orlicz_modular(const AlgebraElement& x, const OrliczFunction& f, const TraceSpec& tau) {
  tau.check(x.algebra());
  const auto sv = singular_values(x);
  double s = 0.0;
  for (std::size_t k = 0; k < sv.size(); ++k)
    for (Eigen::Index i = 0; i < sv[k].size(); ++i) s += tau.weight(k) * f(sv[k](i));
  return s;
}

/// The same modular through the rearrangement: ∫_0^∞ Υ(μ_t(x)) dt.
inline double orlicz_modular_rearranged(const AlgebraElement& x, const OrliczFunction& f, const TraceSpec& tau) {
  return rearrangement(x, tau).integrate([&](double v) { return f(v); });
}

struct LuxemburgOptions {
  double rel_tol = 1e-12;  // absolute tolerance is rel_tol · ‖x‖_∞
  int max_iter = 200;
};

/// inf{λ > 0 : τ(Υ(|x|/λ)) ≤ 1} by bisection on the monotone map λ ↦ modular(x/λ).
/// Returns the upper end of the final bracket, so modular(x/result) ≤ 1.
inline double luxemburg_norm(const AlgebraElement& x, const OrliczFunction& f, const TraceSpec& tau,
                             const LuxemburgOptions& opt = {}) {
  tau.check(x.algebra());
  const auto sv = singular_values(x);
  double top = 0.0;
  for (const auto& s : sv)
    if (s.size() > 0) top = std::max(top, s.maxCoeff());
  if (top == 0.0) return 0.0;

  auto modular_at = [&](double lambda) {
    double s = 0.0;
    for (std::size_t k = 0; k < sv.size(); ++k)
      for (Eigen::Index i = 0; i < sv[k].size(); ++i) {
        s += tau.weight(k) * f(sv[k](i) / lambda);
        if (!std::isfinite(s)) return kInf;
      }
    return s;
  };

  double hi = top;
  int guard = 0;
  while (modular_at(hi) > 1.0) {
    hi *= 2.0;
    if (++guard > 2000) throw Error(ErrorKind::NoConvergence, "luxemburg_norm: no upper bracket");
  }
  double lo = 0.5 * hi;
  guard = 0;
  while (modular_at(lo) <= 1.0) {
    hi = lo;
    lo *= 0.5;
    if (++guard > 2000) throw Error(ErrorKind::NoConvergence, "luxemburg_norm: no lower bracket");
  }
  const double tol = opt.rel_tol * top;
  int iter = 0;
  while (hi - lo > tol) {
    if (++iter > opt.max_iter) throw Error(ErrorKind::NoConvergence, "luxemburg_norm: bisection did not converge");
    const double mid = 0.5 * (lo + hi);
    if (modular_at(mid) <= 1.0) hi = mid;
    else lo = mid;
  }
  return hi;
}

}  // namespace nckit
