#pragma once

#include <string>
#include <vector>

#include "nckit/algebra.hpp"

namespace nckit {

enum class TraceFlavor { Can, Rep, Weighted };

inline std::string to_string(TraceFlavor f) {
  switch (f) {
    case TraceFlavor::Can: return "can";
    case TraceFlavor::Rep: return "rep";
    case TraceFlavor::Weighted: return "weighted";
  }
  return "?";
}

/// A faithful normal trace τ(x) = Σ_k w_k tr(x_k) with positive block weights.
/// τ_can has w_k = 1; τ_rep has w_k = m_k (the ambient trace restricted to N).
class TraceSpec {
 public:
  static TraceSpec can(const MatrixAlgebra& a) {
    return TraceSpec(TraceFlavor::Can, std::vector<double>(a.block_count(), 1.0));
  }

  static TraceSpec rep(const MatrixAlgebra& a) {
    std::vector<double> w;
    for (const auto& b : a.blocks()) w.push_back(static_cast<double>(b.mult));
    return TraceSpec(TraceFlavor::Rep, std::move(w));
  }

  static TraceSpec weighted(const MatrixAlgebra& a, std::vector<double> weights) {
    if (weights.size() != a.block_count())
      throw Error(ErrorKind::DimensionMismatch, "one trace weight per block required");
    for (double w : weights)
      if (!(w > 0.0) || !std::isfinite(w))
        throw Error(ErrorKind::InvalidInput, "trace weights must be positive and finite");
    return TraceSpec(TraceFlavor::Weighted, std::move(weights));
  }

  static TraceSpec of(TraceFlavor f, const MatrixAlgebra& a) {
    if (f == TraceFlavor::Rep) return rep(a);
    if (f == TraceFlavor::Can) return can(a);
    throw Error(ErrorKind::InvalidInput, "weighted traces need explicit weights");
  }

  TraceFlavor flavor() const noexcept { return flavor_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double weight(std::size_t k) const { return weights_.at(k); }

  Complex operator()(const AlgebraElement& x) const {
    check(x.algebra());
    Complex s = 0.0;
    for (std::size_t k = 0; k < weights_.size(); ++k) s += weights_[k] * x.block(k).trace();
    return s;
  }

  void check(const MatrixAlgebra& a) const {
    if (a.block_count() != weights_.size())
      throw Error(ErrorKind::AlgebraMismatch, "trace does not belong to this algebra");
  }

 private:
  TraceSpec(TraceFlavor f, std::vector<double> w) : flavor_(f), weights_(std::move(w)) {}

  TraceFlavor flavor_;
  std::vector<double> weights_;
};

}  // namespace nckit
