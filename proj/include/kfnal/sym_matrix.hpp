#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <utility>

namespace kfnal {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Dense real symmetric matrix. The stored upper triangle always mirrors
/// the lower one entry by entry, so (i,j) == (j,i) holds exactly.
class SymMatrix {
 public:
  SymMatrix() = default;

  explicit SymMatrix(int n) {
    if (n < 1) throw std::invalid_argument("SymMatrix: order must be >= 1");
    m_ = MatrixXd::Zero(n, n);
  }

  /// Takes any square matrix and mirrors its lower triangle upward.
  explicit SymMatrix(MatrixXd m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() < 1)
      throw std::invalid_argument("SymMatrix: matrix must be square, order >= 1");
    mirror_lower();
  }

  static SymMatrix identity(int n) { return SymMatrix(MatrixXd::Identity(n, n)); }

  static SymMatrix diagonal(const VectorXd& v) {
    SymMatrix s(static_cast<int>(v.size()));
    s.m_.diagonal() = v;
    return s;
  }

  static SymMatrix zero(int n) { return SymMatrix(n); }

  int order() const { return static_cast<int>(m_.rows()); }

  double operator()(int i, int j) const { return m_(i, j); }

  /// Sets entry (i,j) and its mirror (j,i).
  void set(int i, int j, double v) {
    m_(i, j) = v;
    m_(j, i) = v;
  }

  const MatrixXd& mat() const { return m_; }

  double norm() const { return m_.norm(); }
  double trace() const { return m_.trace(); }
  bool all_finite() const { return m_.allFinite(); }

 private:
  void mirror_lower() {
    const int n = order();
    for (int j = 1; j < n; ++j)
      for (int i = 0; i < j; ++i) m_(i, j) = m_(j, i);
  }

  MatrixXd m_;
};

inline SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
  if (a.order() != b.order()) throw std::invalid_argument("SymMatrix: order mismatch");
  return SymMatrix(a.mat() + b.mat());
}

inline SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
  if (a.order() != b.order()) throw std::invalid_argument("SymMatrix: order mismatch");
  return SymMatrix(a.mat() - b.mat());
}

inline SymMatrix operator*(double s, const SymMatrix& a) { return SymMatrix(s * a.mat()); }

inline SymMatrix operator-(const SymMatrix& a) { return SymMatrix(-a.mat()); }

/// Frobenius inner product.
inline double inner(const SymMatrix& a, const SymMatrix& b) {
  if (a.order() != b.order()) throw std::invalid_argument("SymMatrix: order mismatch");
  return a.mat().cwiseProduct(b.mat()).sum();
}

/// Eigendecomposition with eigenvalues sorted non-increasing and columns of
/// Q sign-fixed so the first non-negligible entry of each eigenvector is
/// positive. Output is deterministic for a fixed input.
struct EigenPair {
  VectorXd values;
  MatrixXd vectors;
};

inline EigenPair eig_sym(const SymMatrix& M) {
  if (!M.all_finite()) throw std::invalid_argument("eig_sym: non-finite entries");
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(M.mat());
  if (es.info() != Eigen::Success) throw std::runtime_error("eig_sym: eigensolver failed");
  const int n = M.order();
  EigenPair ep;
  ep.values = es.eigenvalues().reverse();
  ep.vectors = es.eigenvectors().rowwise().reverse();
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double v = ep.vectors(i, j);
      if (std::abs(v) > 1e-12) {
        if (v < 0) ep.vectors.col(j) = -ep.vectors.col(j);
        break;
      }
    }
  }
  return ep;
}

}  // namespace kfnal
