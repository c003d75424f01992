#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "kfnal/sym_matrix.hpp"

namespace kfnal {

namespace detail {

inline void check_kyfan_order(int k, Eigen::Index n) {
  if (k < 1 || k > n) throw std::invalid_argument("Ky Fan order k must satisfy 1 <= k <= n");
}

/// Eigenvalue pairs closer than this are treated as coincident.
inline bool eig_tie(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace detail

/// Sum of the k largest absolute eigenvalues, given the spectrum.
inline double kyfan_value(const VectorXd& eigenvalues, int k) {
  detail::check_kyfan_order(k, eigenvalues.size());
  std::vector<double> a(eigenvalues.size());
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) a[i] = std::abs(eigenvalues[i]);
  std::partial_sort(a.begin(), a.begin() + k, a.end(), std::greater<double>());
  double s = 0;
  for (int i = 0; i < k; ++i) s += a[i];
  return s;
}

inline double kyfan_value(const SymMatrix& M, int k) {
  detail::check_kyfan_order(k, M.order());
  if (!M.all_finite()) throw std::invalid_argument("kyfan_value: non-finite entries");
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(M.mat(), Eigen::EigenvaluesOnly);
  return kyfan_value(VectorXd(es.eigenvalues()), k);
}

/// Euclidean projection of a vector onto {v : |v_i| <= 1, sum |v_i| <= k},
/// together with the data needed to apply a generalized Jacobian:
/// the multiplier tau of the l1 budget and the set of components strictly
/// between their clip bounds.
struct DualBallProjection {
  VectorXd value;
  double tau = 0.0;
  bool l1_active = false;
  std::vector<bool> free_mask;
};

inline DualBallProjection project_dual_ball_vec_info(const VectorXd& u, int k) {
  detail::check_kyfan_order(k, u.size());
  if (!u.allFinite()) throw std::invalid_argument("project_dual_ball_vec: non-finite input");
  const int n = static_cast<int>(u.size());
  const VectorXd a = u.cwiseAbs();

  DualBallProjection out;
  out.free_mask.assign(n, false);
  out.value.resize(n);

  const VectorXd clamped = a.cwiseMin(1.0);
  if (clamped.sum() <= static_cast<double>(k)) {
    // l1 budget already met after clamping to the box.
    for (int i = 0; i < n; ++i) {
      out.value[i] = u[i] >= 0 ? clamped[i] : -clamped[i];
      out.free_mask[i] = a[i] < 1.0;
    }
    return out;
  }

  // Find tau > 0 with sum_i clip(a_i - tau, 0, 1) = k. The map is piecewise
  // linear and non-increasing in tau, with breakpoints at a_i and a_i - 1.
  std::vector<double> bps;
  bps.reserve(2 * n + 1);
  bps.push_back(0.0);
  for (int i = 0; i < n; ++i) {
    if (a[i] > 0) bps.push_back(a[i]);
    if (a[i] > 1) bps.push_back(a[i] - 1.0);
  }
  std::sort(bps.begin(), bps.end());

  double tau = -1.0;
  for (size_t s = 0; s + 1 < bps.size() && tau < 0; ++s) {
    const double lo = bps[s], hi = bps[s + 1];
    if (hi <= lo) continue;
    const double mid = 0.5 * (lo + hi);
    int ones = 0, nfree = 0;
    double free_sum = 0;
    for (int i = 0; i < n; ++i) {
      const double r = a[i] - mid;
      if (r >= 1.0) {
        ++ones;
      } else if (r > 0.0) {
        ++nfree;
        free_sum += a[i];
      }
    }
    if (nfree > 0) {
      const double t = (free_sum + ones - k) / nfree;
      if (t >= lo - 1e-15 && t <= hi + 1e-15) tau = std::min(std::max(t, lo), hi);
    } else if (ones == k) {
      // Flat segment with the budget met exactly; the interior point keeps
      // the face classification strict.
      tau = mid;
    }
  }
  if (tau < 0) {
    // Bisection fallback on the same piecewise-linear equation.
    double lo = 0.0, hi = a.maxCoeff();
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
      const double mid = 0.5 * (lo + hi);
      double s = 0;
      for (int i = 0; i < n; ++i) s += std::min(1.0, std::max(a[i] - mid, 0.0));
      (s > k ? lo : hi) = mid;
    }
    tau = 0.5 * (lo + hi);
  }

  out.tau = tau;
  out.l1_active = true;
  for (int i = 0; i < n; ++i) {
    const double r = std::min(1.0, std::max(a[i] - tau, 0.0));
    out.value[i] = u[i] >= 0 ? r : -r;
    out.free_mask[i] = (a[i] - tau > 0.0) && (a[i] - tau < 1.0);
  }
  return out;
}

inline VectorXd project_dual_ball_vec(const VectorXd& u, int k) {
  return project_dual_ball_vec_info(u, k).value;
}

/// Projection onto the dual-norm ball {X : ||X||_2 <= 1, ||X||_* <= k},
/// transferred through the eigendecomposition. The input sign is
/// canonicalized first so that projecting X and -X gives exactly
/// opposite results.
inline SymMatrix project_dual_ball(const SymMatrix& M, int k) {
  detail::check_kyfan_order(k, M.order());
  const int n = M.order();
  int lead = 0;  // sign of the first nonzero entry, scanning the lower triangle
  for (int j = 0; j < n && lead == 0; ++j)
    for (int i = j; i < n && lead == 0; ++i)
      if (M(i, j) != 0.0) lead = M(i, j) > 0 ? 1 : -1;
  if (lead == 0) return SymMatrix::zero(n);
  if (lead < 0) return -project_dual_ball(-M, k);
  const EigenPair ep = eig_sym(M);
  const DualBallProjection pr = project_dual_ball_vec_info(ep.values, k);
  return SymMatrix(ep.vectors * pr.value.asDiagonal() * ep.vectors.transpose());
}

/// Proximal map of t * (Ky Fan k-norm), via the Moreau decomposition
/// P = Y - t * Pi(Y / t). The decomposition identity therefore holds
/// exactly for the returned value.
inline SymMatrix prox_kyfan(const SymMatrix& Y, double t, int k) {
  if (!(t > 0)) throw std::invalid_argument("prox_kyfan: t must be positive");
  return Y - t * project_dual_ball((1.0 / t) * Y, k);
}

/// Subgradient membership test W in d||.||_(k)(X) through the Fenchel
/// characterization: W in the dual ball and <X, W> = ||X||_(k).
inline bool subdiff_member(const SymMatrix& X, const SymMatrix& W, int k, double tol) {
  if (X.order() != W.order()) throw std::invalid_argument("subdiff_member: order mismatch");
  if (!(tol > 0)) throw std::invalid_argument("subdiff_member: tol must be positive");
  const double dist = (W - project_dual_ball(W, k)).norm();
  if (dist > tol) return false;
  const double kf = kyfan_value(X, k);
  return std::abs(inner(X, W) - kf) <= tol * (1.0 + kf);
}

/// Applies one generalized Jacobian element of the dual-ball projection,
/// given a prepared eigendecomposition of the base point and the vector
/// projection data at its spectrum. Off-diagonal entries in the eigenbasis
/// use first divided differences of the projected spectrum; the diagonal
/// uses the vector-space Jacobian, whose rank-one term couples the
/// eigenvalues whenever the l1 budget is tight.
inline SymMatrix dual_ball_djac_apply_prepared(const EigenPair& ep, const DualBallProjection& pr,
                                               const SymMatrix& H) {
  const int n = static_cast<int>(ep.values.size());
  if (H.order() != n) throw std::invalid_argument("dual_ball_djac_apply: order mismatch");
  const VectorXd& lam = ep.values;
  const VectorXd& pi = pr.value;
  MatrixXd Ht = ep.vectors.transpose() * H.mat() * ep.vectors;

  MatrixXd G(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      double g;
      if (detail::eig_tie(lam[i], lam[j])) {
        g = pr.free_mask[i] ? 1.0 : 0.0;
      } else {
        g = (pi[i] - pi[j]) / (lam[i] - lam[j]);
      }
      G(i, j) = g * Ht(i, j);
      G(j, i) = g * Ht(j, i);
    }
  }

  const VectorXd dv = Ht.diagonal();
  VectorXd gd = VectorXd::Zero(n);
  if (!pr.l1_active) {
    for (int i = 0; i < n; ++i) gd[i] = pr.free_mask[i] ? dv[i] : 0.0;
  } else {
    int nfree = 0;
    double proj = 0;
    for (int i = 0; i < n; ++i) {
      if (pr.free_mask[i]) {
        ++nfree;
        proj += (lam[i] >= 0 ? dv[i] : -dv[i]);
      }
    }
    if (nfree > 0) {
      proj /= nfree;
      for (int i = 0; i < n; ++i) {
        if (pr.free_mask[i]) gd[i] = dv[i] - (lam[i] >= 0 ? proj : -proj);
      }
    }
  }
  G.diagonal() = gd;

  return SymMatrix(ep.vectors * G * ep.vectors.transpose());
}

inline SymMatrix dual_ball_djac_apply(const SymMatrix& M, const SymMatrix& H, int k) {
  if (M.order() != H.order()) throw std::invalid_argument("dual_ball_djac_apply: order mismatch");
  detail::check_kyfan_order(k, M.order());
  const EigenPair ep = eig_sym(M);
  const DualBallProjection pr = project_dual_ball_vec_info(ep.values, k);
  return dual_ball_djac_apply_prepared(ep, pr, H);
}

}  // namespace kfnal
