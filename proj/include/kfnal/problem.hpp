#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kfnal/graph.hpp"
#include "kfnal/sym_matrix.hpp"

namespace kfnal {

/// Orientation of the stacked bound map. In corrected mode the slack
/// equation z = ebar - Bbar*y encodes {y >= 0, B y <= 1}; as-printed keeps
/// the opposite block signs, under which y = 0 is already optimal.
enum class SignMode { corrected, as_printed };

/// A*y = sum_l y_l E(l), where E(l) of edge (i,j) carries +1 at the two
/// off-diagonal positions and -1 at the two diagonal ones.
inline SymMatrix apply_Astar(const Graph& g, const VectorXd& y) {
  if (y.size() != g.d()) throw std::invalid_argument("apply_Astar: length mismatch");
  MatrixXd m = MatrixXd::Zero(g.n, g.n);
  for (int l = 0; l < g.d(); ++l) {
    const auto [i, j] = g.edges[l];
    const double v = y[l];
    m(i - 1, j - 1) += v;
    m(j - 1, i - 1) += v;
    m(i - 1, i - 1) -= v;
    m(j - 1, j - 1) -= v;
  }
  return SymMatrix(std::move(m));
}

/// Adjoint of apply_Astar: component l is <E(l), X> = 2 X_ij - X_ii - X_jj.
inline VectorXd apply_A(const Graph& g, const SymMatrix& X) {
  if (X.order() != g.n) throw std::invalid_argument("apply_A: order mismatch");
  VectorXd v(g.d());
  for (int l = 0; l < g.d(); ++l) {
    const auto [i, j] = g.edges[l];
    v[l] = 2.0 * X(i - 1, j - 1) - X(i - 1, i - 1) - X(j - 1, j - 1);
  }
  return v;
}

struct OpNormEstimate {
  double value = 0;
  bool converged = false;
};

/// Largest singular value of a linear operator by power iteration on
/// adjoint(apply(.)), started from a seeded random direction.
template <class Apply, class ApplyAdjoint>
OpNormEstimate op_norm(Apply&& apply, ApplyAdjoint&& adjoint, int domain_dim,
                       double rel_tol = 1e-6, int max_iters = 500,
                       std::uint64_t seed = 0x6b666e616c6f70ULL) {
  if (domain_dim < 1) throw std::invalid_argument("op_norm: domain dimension must be >= 1");
  std::mt19937_64 rng(seed ^ static_cast<std::uint64_t>(domain_dim));
  std::normal_distribution<double> gauss(0.0, 1.0);
  VectorXd x(domain_dim);
  for (int i = 0; i < domain_dim; ++i) x[i] = gauss(rng);
  x.normalize();

  double sigma = 0;
  for (int it = 0; it < max_iters; ++it) {
    VectorXd tx = adjoint(apply(x));
    const double lam = x.dot(tx);  // Rayleigh quotient, x has unit norm
    const double next = std::sqrt(std::max(lam, 0.0));
    const double tn = tx.norm();
    if (tn <= 1e-300) return {next, true};  // operator annihilates the iterate
    const bool settled = std::abs(next - sigma) <= rel_tol * std::max(1.0, next);
    sigma = next;
    if (settled) return {sigma, true};
    x = tx / tn;
  }
  return {sigma, false};
}

/// One FMMC-class instance: the graph, Ky Fan order, stacked bound map with
/// its right-hand side, and cached operator norms.
struct ProblemData {
  Graph graph;
  int k = 2;
  SignMode sign_mode = SignMode::corrected;
  Eigen::SparseMatrix<double> bbar;  // (n+d) x d
  VectorXd ebar;                     // (0_d, 1_n)
  double norm_A = 0;
  double norm_Bbar = 0;
  bool norm_warning = false;

  int n() const { return graph.n; }
  int d() const { return graph.d(); }
  int m() const { return n() + d(); }
};

inline VectorXd apply_Bbar(const ProblemData& pd, const VectorXd& y) {
  if (y.size() != pd.d()) throw std::invalid_argument("apply_Bbar: length mismatch");
  return pd.bbar * y;
}

inline VectorXd apply_Bbar_t(const ProblemData& pd, const VectorXd& w) {
  if (w.size() != pd.m()) throw std::invalid_argument("apply_Bbar_t: length mismatch");
  return pd.bbar.transpose() * w;
}

inline ProblemData build_fmmc(const Graph& g, int k = 2, SignMode mode = SignMode::corrected) {
  if (k < 1 || k > g.n) throw std::invalid_argument("build_fmmc: k must satisfy 1 <= k <= n");
  ProblemData pd;
  pd.graph = g;
  pd.k = k;
  pd.sign_mode = mode;

  const int n = g.n, d = g.d();
  const double diag_sign = mode == SignMode::corrected ? -1.0 : 1.0;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(3 * d);
  for (int l = 0; l < d; ++l) {
    trips.emplace_back(l, l, diag_sign);
    const auto [i, j] = g.edges[l];
    trips.emplace_back(d + i - 1, l, -diag_sign);
    trips.emplace_back(d + j - 1, l, -diag_sign);
  }
  pd.bbar.resize(n + d, d);
  pd.bbar.setFromTriplets(trips.begin(), trips.end());

  pd.ebar = VectorXd::Zero(n + d);
  pd.ebar.tail(n).setOnes();

  const auto na = op_norm([&g](const VectorXd& y) { return apply_Astar(g, y); },
                          [&g](const SymMatrix& X) { return apply_A(g, X); }, d);
  const auto nb = op_norm([&pd](const VectorXd& y) { return VectorXd(pd.bbar * y); },
                          [&pd](const VectorXd& w) { return VectorXd(pd.bbar.transpose() * w); },
                          d);
  pd.norm_A = na.value;
  pd.norm_Bbar = nb.value;
  pd.norm_warning = !na.converged || !nb.converged;
  return pd;
}

}  // namespace kfnal
