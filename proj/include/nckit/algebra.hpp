#pragma once

// Finite-dimensional W*-algebras N = M_{n_1}(C) ⊕ ... ⊕ M_{n_K}(C), represented
// on ⊕_k C^{n_k} ⊗ C^{m_k} by x ↦ ⊕_k x_k ⊗ I_{m_k}.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "nckit/core.hpp"

namespace nckit {

struct Block {
  int dim = 1;
  int mult = 1;

  friend bool operator==(const Block&, const Block&) = default;
};

class MatrixAlgebra {
 public:
  MatrixAlgebra() : MatrixAlgebra(std::vector<Block>{{1, 1}}) {}

  explicit MatrixAlgebra(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
    if (blocks_.empty()) throw Error(ErrorKind::InvalidInput, "algebra needs at least one block");
    for (const auto& b : blocks_) {
      if (b.dim < 1 || b.mult < 1)
        throw Error(ErrorKind::InvalidInput, "block dim and mult must be positive");
    }
  }

  /// M_n with multiplicity 1.
  static MatrixAlgebra full(int n) { return MatrixAlgebra({{n, 1}}); }

  /// The commutative algebra C^atoms.
  static MatrixAlgebra diagonal(int atoms, int mult = 1) {
    return MatrixAlgebra(std::vector<Block>(static_cast<std::size_t>(atoms), Block{1, mult}));
  }

  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  std::size_t block_count() const noexcept { return blocks_.size(); }
  int dim(std::size_t k) const { return blocks_.at(k).dim; }
  int mult(std::size_t k) const { return blocks_.at(k).mult; }

  /// Σ n_k m_k, the dimension of the represented Hilbert space.
  int hilbert_dim() const {
    return std::accumulate(blocks_.begin(), blocks_.end(), 0,
                           [](int acc, const Block& b) { return acc + b.dim * b.mult; });
  }

  /// Σ n_k², the linear dimension of the algebra (and of its Hilbert–Schmidt space).
  int linear_dim() const {
    return std::accumulate(blocks_.begin(), blocks_.end(), 0,
                           [](int acc, const Block& b) { return acc + b.dim * b.dim; });
  }

  bool is_commutative() const {
    return std::all_of(blocks_.begin(), blocks_.end(), [](const Block& b) { return b.dim == 1; });
  }

  friend bool operator==(const MatrixAlgebra&, const MatrixAlgebra&) = default;

 private:
  std::vector<Block> blocks_;
};

inline void require_same_algebra(const MatrixAlgebra& a, const MatrixAlgebra& b) {
  if (!(a == b)) throw Error(ErrorKind::AlgebraMismatch, "operands live in different algebras");
}

class AlgebraElement {
 public:
  AlgebraElement() : AlgebraElement(MatrixAlgebra{}) {}

  explicit AlgebraElement(MatrixAlgebra algebra) : algebra_(std::move(algebra)) {
    blocks_.reserve(algebra_.block_count());
    for (const auto& b : algebra_.blocks()) blocks_.push_back(Matrix::Zero(b.dim, b.dim));
  }

  AlgebraElement(MatrixAlgebra algebra, std::vector<Matrix> blocks)
      : algebra_(std::move(algebra)), blocks_(std::move(blocks)) {
    if (blocks_.size() != algebra_.block_count())
      throw Error(ErrorKind::DimensionMismatch, "block count does not match the algebra");
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      const auto n = algebra_.dim(k);
      if (blocks_[k].rows() != n || blocks_[k].cols() != n)
        throw Error(ErrorKind::DimensionMismatch,
                    "block " + std::to_string(k) + " must be " + std::to_string(n) + "x" +
                        std::to_string(n));
    }
  }

  static AlgebraElement zero(const MatrixAlgebra& a) { return AlgebraElement(a); }

  static AlgebraElement identity(const MatrixAlgebra& a) {
    AlgebraElement e(a);
    for (auto& b : e.blocks_) b.setIdentity();
    return e;
  }

  static AlgebraElement matrix_unit(const MatrixAlgebra& a, std::size_t k, int i, int j) {
    AlgebraElement e(a);
    e.blocks_.at(k)(i, j) = 1.0;
    return e;
  }

  /// Matrix units e^{(k)}_{ij}, ordered by block, then column, then row
  /// (the column-major order used for Hilbert–Schmidt coordinates).
  static std::vector<AlgebraElement> basis(const MatrixAlgebra& a) {
    std::vector<AlgebraElement> out;
    out.reserve(static_cast<std::size_t>(a.linear_dim()));
    for (std::size_t k = 0; k < a.block_count(); ++k)
      for (int j = 0; j < a.dim(k); ++j)
        for (int i = 0; i < a.dim(k); ++i) out.push_back(matrix_unit(a, k, i, j));
    return out;
  }

  /// Block-diagonal element from a single matrix, for single-block algebras.
  static AlgebraElement from_matrix(const Matrix& m) {
    return AlgebraElement(MatrixAlgebra::full(static_cast<int>(m.rows())), {m});
  }

  const MatrixAlgebra& algebra() const noexcept { return algebra_; }
  const std::vector<Matrix>& blocks() const noexcept { return blocks_; }
  const Matrix& block(std::size_t k) const { return blocks_.at(k); }
  Matrix& block(std::size_t k) { return blocks_.at(k); }

  AlgebraElement adjoint() const {
    AlgebraElement r(algebra_);
    for (std::size_t k = 0; k < blocks_.size(); ++k) r.blocks_[k] = blocks_[k].adjoint();
    return r;
  }

  /// Entrywise complex conjugate of every block.
  AlgebraElement conjugate() const {
    AlgebraElement r(algebra_);
    for (std::size_t k = 0; k < blocks_.size(); ++k) r.blocks_[k] = blocks_[k].conjugate();
    return r;
  }

  /// Canonical trace Σ_k tr(x_k).
  Complex trace_can() const {
    Complex s = 0.0;
    for (const auto& b : blocks_) s += b.trace();
    return s;
  }

  /// Restriction of the ambient trace: Σ_k m_k tr(x_k).
  Complex trace_rep() const {
    Complex s = 0.0;
    for (std::size_t k = 0; k < blocks_.size(); ++k)
      s += static_cast<double>(algebra_.mult(k)) * blocks_[k].trace();
    return s;
  }

  /// Hilbert–Schmidt inner product ⟨this, other⟩ = Σ tr(this_k* other_k).
  Complex hs_inner(const AlgebraElement& other) const {
    require_same_algebra(algebra_, other.algebra_);
    Complex s = 0.0;
    for (std::size_t k = 0; k < blocks_.size(); ++k)
      s += (blocks_[k].adjoint() * other.blocks_[k]).trace();
    return s;
  }

  double hs_norm() const {
    double s = 0.0;
    for (const auto& b : blocks_) s += b.squaredNorm();
    return std::sqrt(s);
  }

  /// The operator π(x) = ⊕_k x_k ⊗ I_{m_k} on the represented Hilbert space.
  Matrix represented() const {
    const int d = algebra_.hilbert_dim();
    Matrix out = Matrix::Zero(d, d);
    int off = 0;
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      const int n = algebra_.dim(k);
      const int m = algebra_.mult(k);
      out.block(off, off, n * m, n * m) =
          Eigen::kroneckerProduct(blocks_[k], Matrix::Identity(m, m)).eval();
      off += n * m;
    }
    return out;
  }

  /// Concatenated column-major vectorisation of the blocks.
  Vector hs_vector() const {
    Vector v(algebra_.linear_dim());
    Eigen::Index off = 0;
    for (const auto& b : blocks_) {
      v.segment(off, b.size()) = Eigen::Map<const Vector>(b.data(), b.size());
      off += b.size();
    }
    return v;
  }

  static AlgebraElement from_hs_vector(const MatrixAlgebra& a, const Vector& v) {
    if (v.size() != a.linear_dim())
      throw Error(ErrorKind::DimensionMismatch, "HS vector length does not match the algebra");
    AlgebraElement e(a);
    Eigen::Index off = 0;
    for (auto& b : e.blocks_) {
      b = Eigen::Map<const Matrix>(v.data() + off, b.rows(), b.cols());
      off += b.size();
    }
    return e;
  }

  AlgebraElement& operator+=(const AlgebraElement& o) {
    require_same_algebra(algebra_, o.algebra_);
    for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] += o.blocks_[k];
    return *this;
  }
  AlgebraElement& operator-=(const AlgebraElement& o) {
    require_same_algebra(algebra_, o.algebra_);
    for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] -= o.blocks_[k];
    return *this;
  }
  AlgebraElement& operator*=(Complex s) {
    for (auto& b : blocks_) b *= s;
    return *this;
  }

  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
  friend AlgebraElement operator-(AlgebraElement a) { return a *= -1.0; }
  friend AlgebraElement operator*(AlgebraElement a, Complex s) { return a *= s; }
  friend AlgebraElement operator*(Complex s, AlgebraElement a) { return a *= s; }
  friend AlgebraElement operator*(double s, AlgebraElement a) { return a *= s; }

  friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
    require_same_algebra(a.algebra_, b.algebra_);
    AlgebraElement r(a.algebra_);
    for (std::size_t k = 0; k < a.blocks_.size(); ++k) r.blocks_[k] = a.blocks_[k] * b.blocks_[k];
    return r;
  }

 private:
  MatrixAlgebra algebra_;
  std::vector<Matrix> blocks_;
};

inline AlgebraElement commutator(const AlgebraElement& a, const AlgebraElement& b) {
  return a * b - b * a;
}

/// ‖x‖ = sqrt of the largest eigenvalue of x*x, maximised over blocks.
inline double operator_norm(const AlgebraElement& x) {
  double best = 0.0;
  for (const auto& b : x.blocks()) {
    if (b.size() == 0) continue;
    Eigen::JacobiSVD<Matrix> svd(b);
    best = std::max(best, svd.singularValues()(0));
  }
  return best;
}

/// Singular values of each block, descending within each block.
inline std::vector<RealVector> singular_values(const AlgebraElement& x) {
  std::vector<RealVector> out;
  out.reserve(x.blocks().size());
  for (const auto& b : x.blocks()) out.push_back(Eigen::JacobiSVD<Matrix>(b).singularValues());
  return out;
}

inline double hermiticity_defect(const AlgebraElement& a) {
  return operator_norm(a - a.adjoint());
}

inline bool is_self_adjoint(const AlgebraElement& a, const Tolerances& tol = {}) {
  return hermiticity_defect(a) <= tol.spec * std::max(operator_norm(a), 1e-300);
}

inline void require_hermitian(const AlgebraElement& a, const Tolerances& tol = {}) {
  const double nrm = operator_norm(a);
  const double defect = hermiticity_defect(a);
  if (defect > tol.spec * nrm)
    throw Error(ErrorKind::NotHermitian,
                "‖a - a*‖ = " + std::to_string(defect) + " exceeds tolerance");
}

/// Per-block eigenvalues (ascending, Eigen's order) of the Hermitian part.
inline std::vector<RealVector> hermitian_eigenvalues(const AlgebraElement& a) {
  std::vector<RealVector> out;
  for (const auto& b : a.blocks()) {
    Matrix h = 0.5 * (b + b.adjoint());
    out.push_back(Eigen::SelfAdjointEigenSolver<Matrix>(h, Eigen::EigenvaluesOnly).eigenvalues());
  }
  return out;
}

inline bool is_positive(const AlgebraElement& a, const Tolerances& tol = {}) {
  if (!is_self_adjoint(a, tol)) return false;
  const double floor = -tol.spec * operator_norm(a);
  for (const auto& ev : hermitian_eigenvalues(a))
    if (ev.size() > 0 && ev.minCoeff() < floor) return false;
  return true;
}

inline bool is_projection(const AlgebraElement& p, const Tolerances& tol = {}) {
  const double scale = std::max(1.0, operator_norm(p));
  return hermiticity_defect(p) <= tol.spec * scale && operator_norm(p * p - p) <= tol.spec * scale;
}

inline bool is_partial_isometry(const AlgebraElement& v, const Tolerances& tol = {}) {
  return is_projection(v.adjoint() * v, tol);
}

/// f(a) for Hermitian a, block by block: Σ f(λ) |e_λ⟩⟨e_λ|.
/// The Hermitian part of `a` is used, so callers validate Hermiticity first.
template <class F>
AlgebraElement hermitian_function(const AlgebraElement& a, F&& f) {
  AlgebraElement out(a.algebra());
  for (std::size_t k = 0; k < a.blocks().size(); ++k) {
    Matrix h = 0.5 * (a.block(k) + a.block(k).adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const auto& ev = es.eigenvalues();
    Vector fv(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) fv(i) = Complex(f(ev(i)));
    out.block(k) = es.eigenvectors() * fv.asDiagonal() * es.eigenvectors().adjoint();
  }
  return out;
}

/// Complex power h^z of a positive element on its support, zero elsewhere.
/// Eigenvalues at or below supp·‖h‖ count as zero. z = 0 gives supp(h).
inline AlgebraElement pseudo_power(const AlgebraElement& h, Complex z, const Tolerances& tol = {}) {
  const double cut = tol.supp * operator_norm(h);
  return hermitian_function(h, [&](double lam) -> Complex {
    if (lam <= cut || lam <= 0.0) return 0.0;
    return std::exp(z * std::log(lam));
  });
}

/// log h on the support of a positive h, zero elsewhere.
inline AlgebraElement pseudo_log(const AlgebraElement& h, const Tolerances& tol = {}) {
  const double cut = tol.supp * operator_norm(h);
  return hermitian_function(h, [&](double lam) -> Complex {
    if (lam <= cut || lam <= 0.0) return 0.0;
    return std::log(lam);
  });
}

/// exp(z a) for Hermitian a.
inline AlgebraElement hermitian_exp(const AlgebraElement& a, Complex z) {
  return hermitian_function(a, [&](double lam) -> Complex { return std::exp(z * lam); });
}

struct SpectralData {
  std::vector<double> eigenvalues;  // descending, distinct up to clustering
  std::vector<AlgebraElement> projectors;
  std::vector<int> multiplicities;

  AlgebraElement reconstruct() const {
    AlgebraElement out = AlgebraElement::zero(projectors.front().algebra());
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) out += eigenvalues[i] * projectors[i];
    return out;
  }
};

/// Spectral resolution a = Σ λ_i P_i of a self-adjoint element. Eigenvalues
/// whose normalised gap is below tol.cluster are merged into one projector.
inline SpectralData spectral_decompose(const AlgebraElement& a, const Tolerances& tol = {}) {
  require_hermitian(a, tol);
  const double nrm = operator_norm(a);
  const double scale = nrm > 0.0 ? nrm : 1.0;

  struct Eig {
    double value;
    std::size_t block;
    Eigen::Index column;
    std::size_t order;  // first-occurrence basis order, for tie breaking
  };
  std::vector<Eig> all;
  std::vector<Matrix> vecs;
  std::size_t order = 0;
  for (std::size_t k = 0; k < a.blocks().size(); ++k) {
    Matrix h = 0.5 * (a.block(k) + a.block(k).adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    vecs.push_back(es.eigenvectors());
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
      all.push_back({es.eigenvalues()(i), k, i, order++});
  }
  std::stable_sort(all.begin(), all.end(), [](const Eig& l, const Eig& r) {
    if (l.value != r.value) return l.value > r.value;
    return l.order < r.order;
  });

  SpectralData out;
  std::size_t i = 0;
  while (i < all.size()) {
    std::size_t j = i + 1;
    while (j < all.size() && (all[j - 1].value - all[j].value) / scale < tol.cluster) ++j;
    AlgebraElement proj(a.algebra());
    double sum = 0.0;
    for (std::size_t m = i; m < j; ++m) {
      const auto& col = vecs[all[m].block].col(all[m].column);
      proj.block(all[m].block) += col * col.adjoint();
      sum += all[m].value;
    }
    out.eigenvalues.push_back(sum / static_cast<double>(j - i));
    out.projectors.push_back(std::move(proj));
    out.multiplicities.push_back(static_cast<int>(j - i));
    i = j;
  }
  return out;
}

/// Projection onto the span of eigenvectors with |λ| > supp·‖a‖.
inline AlgebraElement support_projection(const AlgebraElement& a, const Tolerances& tol = {}) {
  require_hermitian(a, tol);
  const double cut = tol.supp * operator_norm(a);
  return hermitian_function(a, [&](double lam) -> Complex {
    return std::abs(lam) > cut ? 1.0 : 0.0;
  });
}

struct PolarDecomposition {
  AlgebraElement v;    // partial isometry
  AlgebraElement abs;  // |x| = (x*x)^{1/2}
};

/// x = v|x| with v*v = supp(|x|) and vv* = supp(|x*|).
inline PolarDecomposition polar_decompose(const AlgebraElement& x, const Tolerances& tol = {}) {
  const double cut = tol.supp * operator_norm(x);
  PolarDecomposition pd{AlgebraElement(x.algebra()), AlgebraElement(x.algebra())};
  for (std::size_t k = 0; k < x.blocks().size(); ++k) {
    Eigen::JacobiSVD<Matrix> svd(x.block(k), Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    Eigen::Index r = 0;
    while (r < s.size() && s(r) > cut && s(r) > 0.0) ++r;
    const Matrix& u = svd.matrixU();
    const Matrix& w = svd.matrixV();
    pd.abs.block(k) = w.leftCols(r) * s.head(r).cast<Complex>().asDiagonal() * w.leftCols(r).adjoint();
    pd.v.block(k) = u.leftCols(r) * w.leftCols(r).adjoint();
  }
  return pd;
}

/// |x| = (x*x)^{1/2}.
inline AlgebraElement absolute_value(const AlgebraElement& x, const Tolerances& tol = {}) {
  return polar_decompose(x, tol).abs;
}

// ---------------------------------------------------------------------------
// Commutants

/// Orthonormal (Hilbert–Schmidt) basis of the commutant of a set of d×d
/// operators. The set is closed under adjoints before the nullspace of the
/// stacked commutator map Y ↦ (AY - YA)_A is taken.
inline std::vector<Matrix> commutant(const std::vector<Matrix>& generators, double rel_tol = 1e-9) {
  if (generators.empty()) throw Error(ErrorKind::InvalidInput, "commutant of an empty set");
  const Eigen::Index d = generators.front().rows();
  for (const auto& g : generators)
    if (g.rows() != d || g.cols() != d)
      throw Error(ErrorKind::DimensionMismatch, "generators must be square and of equal size");

  std::vector<Matrix> gens;
  for (const auto& g : generators) {
    gens.push_back(g);
    if ((g - g.adjoint()).norm() > 1e-14 * std::max(1.0, g.norm())) gens.push_back(g.adjoint());
  }

  const Eigen::Index d2 = d * d;
  const Matrix id = Matrix::Identity(d, d);
  // vec(AY - YA) = (I ⊗ A - Aᵀ ⊗ I) vec(Y), column-major vec.
  Matrix gram = Matrix::Zero(d2, d2);
  for (const auto& a : gens) {
    Matrix c = Eigen::kroneckerProduct(id, a).eval() - Eigen::kroneckerProduct(a.transpose(), id).eval();
    gram += c.adjoint() * c;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  const double top = std::max(es.eigenvalues().maxCoeff(), 1.0);
  std::vector<Matrix> basis;
  for (Eigen::Index i = 0; i < d2; ++i) {
    if (es.eigenvalues()(i) > rel_tol * top) break;
    Vector col = es.eigenvectors().col(i);
    basis.emplace_back(Eigen::Map<Matrix>(col.data(), d, d));
  }
  return basis;
}

/// Commutant of π(N) on the represented Hilbert space.
inline std::vector<Matrix> commutant(const MatrixAlgebra& a, double rel_tol = 1e-9) {
  std::vector<Matrix> gens;
  for (const auto& e : AlgebraElement::basis(a)) gens.push_back(e.represented());
  return commutant(gens, rel_tol);
}

/// Distance from x to the span of an orthonormal (HS) basis.
inline double span_residual(const std::vector<Matrix>& orthonormal_basis, const Matrix& x) {
  Matrix r = x;
  for (const auto& b : orthonormal_basis) r -= (b.adjoint() * x).trace() * b;
  return r.norm();
}

// ---------------------------------------------------------------------------
// Center and type classification

struct FactorSummand {
  AlgebraElement central_projection;
  int dim;            // n_k; the summand is a type I_{n_k} factor
  std::string label;  // "I_n"
};

/// Minimal central projections (the block identities) with type labels.
inline std::vector<FactorSummand> center_and_classify(const MatrixAlgebra& a) {
  std::vector<FactorSummand> out;
  for (std::size_t k = 0; k < a.block_count(); ++k) {
    AlgebraElement p(a);
    p.block(k).setIdentity();
    out.push_back({std::move(p), a.dim(k), "I_" + std::to_string(a.dim(k))});
  }
  return out;
}

/// Linear basis of the center Z(N) = span of the block identities.
inline std::vector<AlgebraElement> center_basis(const MatrixAlgebra& a) {
  std::vector<AlgebraElement> out;
  for (auto& f : center_and_classify(a)) out.push_back(std::move(f.central_projection));
  return out;
}

// ---------------------------------------------------------------------------
// Pinching conditional expectations

/// E(x) = Σ_i P_i x P_i for a partition of unity by orthogonal projections.
inline AlgebraElement pinch_expectation(const AlgebraElement& x,
                                        const std::vector<AlgebraElement>& partition,
                                        const Tolerances& tol = {}) {
  if (partition.empty()) throw Error(ErrorKind::BadPartition, "empty partition");
  AlgebraElement sum(x.algebra());
  for (std::size_t i = 0; i < partition.size(); ++i) {
    const auto& p = partition[i];
    require_same_algebra(x.algebra(), p.algebra());
    if (!is_projection(p, tol))
      throw Error(ErrorKind::BadPartition, "partition member " + std::to_string(i) + " is not a projection");
    for (std::size_t j = 0; j < i; ++j)
      if (operator_norm(p * partition[j]) > tol.spec)
        throw Error(ErrorKind::BadPartition, "partition members are not mutually orthogonal");
    sum += p;
  }
  if (operator_norm(sum - AlgebraElement::identity(x.algebra())) > tol.spec)
    throw Error(ErrorKind::BadPartition, "partition does not sum to the identity");

  AlgebraElement out(x.algebra());
  for (const auto& p : partition) out += p * x * p;
  return out;
}

}  // namespace nckit
