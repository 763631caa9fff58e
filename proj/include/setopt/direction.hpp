#pragma once

#include "setopt/cone.hpp"
#include "setopt/minimal.hpp"
#include "setopt/nelder_mead.hpp"
#include "setopt/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace setopt {

/// q(u) = c.u + 1/2 u^T Q u for one (class j, cone row i) pair.
template <typename Scalar>
struct QuadraticPiece {
  Vector<Scalar> linear;
  Matrix<Scalar> curvature;
  Index class_index = 0;
  Index cone_row = 0;

  Scalar operator()(const VectorArg<Scalar>& u) const {
    return linear.dot(u) + Scalar(0.5) * u.dot(curvature * u);
  }
  Vector<Scalar> gradient(const VectorArg<Scalar>& u) const {
    return linear + curvature * u;
  }
};

template <typename Scalar>
struct InnerOptions {
  Scalar gap_tol = Scalar(1e-10);
  int max_iter = 500;
};

template <typename Scalar>
struct DirectionOutcome {
  Vector<Scalar> u;
  Scalar xi = 0;
  Vector<Scalar> weights;  // one per piece, on the simplex
  Scalar gap = 0;
  int inner_iters = 0;
};

template <typename Scalar>
struct TupleDirection {
  std::vector<Index> tuple;
  DirectionOutcome<Scalar> outcome;
  Scalar phi = 0;
};

namespace detail {

template <typename Scalar>
void check_tuple(const ProblemInstance<Scalar>& P,
                 const std::vector<Index>& a) {
  require(!a.empty(), "direction: empty tuple");
  for (Index i : a) {
    require(i >= 0 && i < P.p,
            "direction: tuple entry " + std::to_string(i) + " out of range");
  }
}

// Cholesky with jitter escalation: 1e-12 * trace/n * I, then x10 up to three
// more times.
template <typename Scalar>
std::optional<Eigen::LLT<Matrix<Scalar>>> factor_pd(const Matrix<Scalar>& Q) {
  const Index n = Q.rows();
  Eigen::LLT<Matrix<Scalar>> llt(Q);
  if (llt.info() == Eigen::Success) return llt;
  const Scalar base = Scalar(1e-12) * std::abs(Q.trace()) / Scalar(n);
  Scalar jitter = base;
  for (int k = 0; k < 4 && jitter > Scalar(0); ++k, jitter *= Scalar(10)) {
    llt.compute(Q + jitter * Matrix<Scalar>::Identity(n, n));
    if (llt.info() == Eigen::Success) return llt;
  }
  return std::nullopt;
}

template <typename Scalar>
bool is_constant_piece(const QuadraticPiece<Scalar>& q, Scalar scale) {
  const Scalar tiny = std::numeric_limits<Scalar>::epsilon() * scale;
  return q.linear.cwiseAbs().maxCoeff() <= tiny &&
         q.curvature.cwiseAbs().maxCoeff() <= tiny;
}

// Dual state at weights mu over a set of PD pieces.
template <typename Scalar>
struct DualPoint {
  Vector<Scalar> mu;
  Vector<Scalar> u;
  Vector<Scalar> values;  // q_k(u): the gradient of theta at mu
  Eigen::LLT<Matrix<Scalar>> llt;
  Scalar theta = 0;
  Scalar gap = 0;
};

template <typename Scalar>
std::optional<DualPoint<Scalar>> dual_eval(
    const std::vector<const QuadraticPiece<Scalar>*>& pieces,
    const Vector<Scalar>& mu) {
  const Index n = pieces.front()->linear.size();
  Matrix<Scalar> Q = Matrix<Scalar>::Zero(n, n);
  Vector<Scalar> c = Vector<Scalar>::Zero(n);
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    if (mu(k) == Scalar(0)) continue;
    Q += mu(k) * pieces[k]->curvature;
    c += mu(k) * pieces[k]->linear;
  }
  auto llt = factor_pd(Q);
  if (!llt) return std::nullopt;
  DualPoint<Scalar> d;
  d.mu = mu;
  d.u = -llt->solve(c);
  d.values.resize(static_cast<Index>(pieces.size()));
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    d.values(k) = (*pieces[k])(d.u);
  }
  d.theta = mu.dot(d.values);
  d.gap = std::max(Scalar(0), d.values.maxCoeff() - d.theta);
  d.llt = std::move(*llt);
  return d;
}

// Columns g_k = c_k + Q_k u; the dual Hessian is -G^T Q(mu)^{-1} G.
template <typename Scalar>
Matrix<Scalar> piece_gradients(
    const std::vector<const QuadraticPiece<Scalar>*>& pieces,
    const VectorArg<Scalar>& u) {
  Matrix<Scalar> G(u.size(), static_cast<Index>(pieces.size()));
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    G.col(static_cast<Index>(k)) = pieces[k]->gradient(u);
  }
  return G;
}

template <typename Scalar>
Vector<Scalar> project_simplex_support(Vector<Scalar> mu) {
  mu = mu.cwiseMax(Scalar(0));
  const Scalar s = mu.sum();
  return mu / s;
}

// Newton step for max theta on the face spanned by the current support.
template <typename Scalar>
std::optional<DualPoint<Scalar>> face_newton_step(
    const std::vector<const QuadraticPiece<Scalar>*>& pieces,
    const DualPoint<Scalar>& cur) {
  std::vector<Index> support;
  for (Index k = 0; k < cur.mu.size(); ++k) {
    if (cur.mu(k) > Scalar(0)) support.push_back(k);
  }
  const Index s = static_cast<Index>(support.size());
  if (s < 2) return std::nullopt;

  const Matrix<Scalar> G = piece_gradients(pieces, cur.u);
  Matrix<Scalar> GS(G.rows(), s);
  Vector<Scalar> grad(s);
  for (Index a = 0; a < s; ++a) {
    GS.col(a) = G.col(support[a]);
    grad(a) = cur.values(support[a]);
  }
  const Matrix<Scalar> H = -GS.transpose() * cur.llt.solve(GS);

  // [H  -1][d]   [-grad]
  // [1^T 0][l] = [  0  ]
  Matrix<Scalar> kkt = Matrix<Scalar>::Zero(s + 1, s + 1);
  kkt.topLeftCorner(s, s) = H;
  kkt.topRightCorner(s, 1).setConstant(Scalar(-1));
  kkt.bottomLeftCorner(1, s).setConstant(Scalar(1));
  Vector<Scalar> rhs = Vector<Scalar>::Zero(s + 1);
  rhs.head(s) = -grad;
  const Vector<Scalar> sol = kkt.completeOrthogonalDecomposition().solve(rhs);
  const Vector<Scalar> dS = sol.head(s);
  if (!dS.allFinite()) return std::nullopt;

  Scalar alpha = 1;
  for (Index a = 0; a < s; ++a) {
    if (dS(a) < Scalar(0)) {
      alpha = std::min(alpha, cur.mu(support[a]) / -dS(a));
    }
  }
  Vector<Scalar> mu = cur.mu;
  for (Index a = 0; a < s; ++a) mu(support[a]) += alpha * dS(a);
  // Weights that hit the boundary leave the support exactly.
  for (Index a = 0; a < s; ++a) {
    if (mu(support[a]) <= Scalar(1e-15)) mu(support[a]) = 0;
  }
  auto next = dual_eval(pieces, project_simplex_support(mu));
  if (!next || next->theta < cur.theta) return std::nullopt;
  if (next->theta == cur.theta && next->gap >= cur.gap) return std::nullopt;
  return next;
}

// Away-step Frank-Wolfe step with a second-order line search.
template <typename Scalar>
DualPoint<Scalar> frank_wolfe_step(
    const std::vector<const QuadraticPiece<Scalar>*>& pieces,
    const DualPoint<Scalar>& cur) {
  const Index K = cur.mu.size();
  Index fw = 0;
  cur.values.maxCoeff(&fw);
  Index away = -1;
  for (Index k = 0; k < K; ++k) {
    if (cur.mu(k) > Scalar(0) &&
        (away < 0 || cur.values(k) < cur.values(away))) {
      away = k;
    }
  }
  const Scalar fw_slope = cur.values(fw) - cur.theta;
  const Scalar away_slope = cur.theta - cur.values(away);

  Vector<Scalar> d;
  Scalar gamma_max;
  Scalar slope;
  if (fw_slope >= away_slope || cur.mu(away) >= Scalar(1)) {
    d = -cur.mu;
    d(fw) += 1;
    gamma_max = 1;
    slope = fw_slope;
  } else {
    d = cur.mu;
    d(away) -= 1;
    gamma_max = cur.mu(away) / (Scalar(1) - cur.mu(away));
    slope = away_slope;
  }
  const Vector<Scalar> Gd = piece_gradients(pieces, cur.u) * d;
  const Scalar curv = -Gd.dot(cur.llt.solve(Gd));
  Scalar gamma = curv < Scalar(0) ? std::min(gamma_max, slope / -curv)
                                  : gamma_max;
  for (int k = 0; k < 60; ++k, gamma *= Scalar(0.5)) {
    Vector<Scalar> mu = cur.mu + gamma * d;
    if (gamma == gamma_max && d(away) < Scalar(0) && mu(away) < Scalar(1e-15)) {
      mu(away) = 0;
    }
    auto next = dual_eval(pieces, project_simplex_support(mu));
    if (next && next->theta >= cur.theta) return *next;
  }
  return cur;
}

}  // namespace detail

/// Minimizes max_k q_k(u) over u for pieces with positive definite curvature
/// by ascending the concave dual theta(mu) = min_u sum_k mu_k q_k(u) on the
/// simplex. Pieces that are identically zero in u act as the constant 0 and
/// do not steer the returned minimizer.
///
/// The certificate is gap = max_k q_k(u) - theta(mu) >= 0 with
/// u = -Q(mu)^{-1} c(mu).
template <typename Scalar>
DirectionOutcome<Scalar> minimize_max_quadratics(
    const std::vector<QuadraticPiece<Scalar>>& pieces,
    const InnerOptions<Scalar>& opt = {}) {
  detail::require(!pieces.empty(), "minimize_max_quadratics: no pieces");
  const Index n = pieces.front().linear.size();
  const Index K = static_cast<Index>(pieces.size());

  Scalar scale = 1;
  for (const auto& q : pieces) {
    scale = std::max({scale, q.linear.cwiseAbs().maxCoeff(),
                      q.curvature.cwiseAbs().maxCoeff()});
  }
  std::vector<const QuadraticPiece<Scalar>*> active;
  std::vector<Index> active_ids;
  Index first_constant = -1;
  for (Index k = 0; k < K; ++k) {
    const auto& q = pieces[k];
    if (detail::is_constant_piece(q, scale)) {
      if (first_constant < 0) first_constant = k;
      continue;
    }
    if (!detail::factor_pd(q.curvature)) {
      throw StrongConvexityViolated(
          "strong convexity violated: piece (class " +
              std::to_string(q.class_index) + ", cone row " +
              std::to_string(q.cone_row) + ") has non-PD curvature",
          q.class_index, q.cone_row);
    }
    active.push_back(&q);
    active_ids.push_back(k);
  }

  DirectionOutcome<Scalar> out;
  out.weights = Vector<Scalar>::Zero(K);
  if (active.empty()) {
    out.u = Vector<Scalar>::Zero(n);
    out.weights(first_constant) = 1;
    return out;
  }

  // Start at the vertex with the best single-piece bound -1/2 c^T Q^{-1} c.
  const Index A = static_cast<Index>(active.size());
  Index start = 0;
  Scalar best_bound = -std::numeric_limits<Scalar>::infinity();
  for (Index k = 0; k < A; ++k) {
    const auto llt = detail::factor_pd(active[k]->curvature);
    const Scalar bound =
        Scalar(-0.5) * active[k]->linear.dot(llt->solve(active[k]->linear));
    if (bound > best_bound) {
      best_bound = bound;
      start = k;
    }
  }
  auto first = detail::dual_eval(active, Vector<Scalar>(Vector<Scalar>::Unit(A, start)));
  detail::DualPoint<Scalar> cur = std::move(*first);

  int it = 0;
  for (; it < opt.max_iter && cur.gap > opt.gap_tol; ++it) {
    if (auto next = detail::face_newton_step(active, cur)) {
      cur = std::move(*next);
    } else {
      cur = detail::frank_wolfe_step(active, cur);
    }
  }
  if (cur.gap > opt.gap_tol) {
    throw InnerSolverFailure("inner solver hit the iteration cap with gap " +
                                 std::to_string(double(cur.gap)),
                             double(cur.gap));
  }

  out.inner_iters = it;
  out.u = cur.u;
  out.gap = cur.gap;
  const Scalar xi_active = cur.values.maxCoeff();
  if (first_constant >= 0 && xi_active <= Scalar(0)) {
    // The constant piece binds: theta = 0 = xi, all dual weight on it.
    out.xi = 0;
    out.gap = 0;
    out.weights(first_constant) = 1;
  } else {
    out.xi = xi_active;
    for (Index k = 0; k < A; ++k) out.weights(active_ids[k]) = cur.mu(k);
  }
  if (out.xi > Scalar(0)) {
    // u = 0 is always feasible with value 0.
    out.u.setZero();
    out.xi = 0;
  }
  return out;
}

/// Pieces of xi_x(a, .): for class j and cone row i,
///   q_{j,i}(u) = [a_i.(J_j u) + 1/2 u^T (sum_l a_{i,l} H_{j,l}) u] / (a_i.e).
template <typename Scalar>
std::vector<QuadraticPiece<Scalar>> newton_pieces(
    const ProblemInstance<Scalar>& P, const Cone<Scalar>& cone,
    const VectorArg<Scalar>& x, const std::vector<Index>& a) {
  detail::check_tuple(P, a);
  detail::require(cone.dim() == P.m, "newton_pieces: cone dimension != m");
  std::vector<QuadraticPiece<Scalar>> pieces;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const Matrix<Scalar> J = jacobian(P, a[j], x);
    const HessianStack<Scalar> H = hessian_stack(P, a[j], x);
    for (Index i = 0; i < cone.num_rows(); ++i) {
      const Scalar denom = cone.row_dot_e()(i);
      QuadraticPiece<Scalar> q;
      q.linear = J.transpose() * cone.rows().row(i).transpose() / denom;
      q.curvature = Matrix<Scalar>::Zero(P.n, P.n);
      for (Index l = 0; l < P.m; ++l) {
        q.curvature += cone.rows()(i, l) * H[l];
      }
      q.curvature /= denom;
      q.class_index = static_cast<Index>(j);
      q.cone_row = i;
      pieces.push_back(std::move(q));
    }
  }
  return pieces;
}

/// Steepest-descent pieces: linear parts as in newton_pieces, curvature I.
template <typename Scalar>
std::vector<QuadraticPiece<Scalar>> sd_pieces(const ProblemInstance<Scalar>& P,
                                              const Cone<Scalar>& cone,
                                              const VectorArg<Scalar>& x,
                                              const std::vector<Index>& a) {
  detail::check_tuple(P, a);
  detail::require(cone.dim() == P.m, "sd_pieces: cone dimension != m");
  std::vector<QuadraticPiece<Scalar>> pieces;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const Matrix<Scalar> J = jacobian(P, a[j], x);
    for (Index i = 0; i < cone.num_rows(); ++i) {
      QuadraticPiece<Scalar> q;
      q.linear =
          J.transpose() * cone.rows().row(i).transpose() / cone.row_dot_e()(i);
      q.curvature = Matrix<Scalar>::Identity(P.n, P.n);
      q.class_index = static_cast<Index>(j);
      q.cone_row = i;
      pieces.push_back(std::move(q));
    }
  }
  return pieces;
}

/// xi_x(a, u) = max_j Psi_e(grad f^{a_j}(x) u + 1/2 u^T hess f^{a_j}(x) u),
/// evaluated straight from the oracles and the Gerstewitz functional.
template <typename Scalar>
Scalar xi(const ProblemInstance<Scalar>& P, const Cone<Scalar>& cone,
          const VectorArg<Scalar>& x, const std::vector<Index>& a,
          const VectorArg<Scalar>& u) {
  detail::check_tuple(P, a);
  detail::require(u.size() == P.n, "xi: direction has wrong dimension");
  Scalar best = -std::numeric_limits<Scalar>::infinity();
  for (Index i : a) {
    const Matrix<Scalar> J = jacobian(P, i, x);
    const HessianStack<Scalar> H = hessian_stack(P, i, x);
    Vector<Scalar> model = J * u;
    for (Index l = 0; l < P.m; ++l) {
      model(l) += Scalar(0.5) * u.dot(H[l] * u);
    }
    best = std::max(best, cone.gerstewitz(model));
  }
  return best;
}

template <typename Scalar>
DirectionOutcome<Scalar> direction_for_tuple(
    const ProblemInstance<Scalar>& P, const Cone<Scalar>& cone,
    const VectorArg<Scalar>& x, const std::vector<Index>& a,
    const InnerOptions<Scalar>& opt = {}) {
  return minimize_max_quadratics(newton_pieces(P, cone, x, a), opt);
}

/// Derivative-free reference for direction_for_tuple: Nelder-Mead on
/// xi_x(a, .) from u = 0 and the 2n points +-e_k, keeping the best.
/// Weights are left empty and gap is zero; compare xi against the dual result.
template <typename Scalar>
DirectionOutcome<Scalar> direction_oracle(const ProblemInstance<Scalar>& P,
                                          const Cone<Scalar>& cone,
                                          const VectorArg<Scalar>& x,
                                          const std::vector<Index>& a,
                                          Index max_dim = 6) {
  detail::require(P.n <= max_dim,
                  "direction_oracle: dimension above oracle limit");
  // Cache derivatives once; the oracle objective is then cheap.
  std::vector<Matrix<Scalar>> Js;
  std::vector<HessianStack<Scalar>> Hs;
  for (Index i : a) {
    Js.push_back(jacobian(P, i, x));
    Hs.push_back(hessian_stack(P, i, x));
  }
  auto objective = [&](const VectorArg<Scalar>& u) {
    Scalar best = -std::numeric_limits<Scalar>::infinity();
    for (std::size_t j = 0; j < Js.size(); ++j) {
      Vector<Scalar> model = Js[j] * u;
      for (Index l = 0; l < P.m; ++l) {
        model(l) += Scalar(0.5) * u.dot(Hs[j][l] * u);
      }
      best = std::max(best, cone.gerstewitz(model));
    }
    return best;
  };

  std::vector<Vector<Scalar>> starts{Vector<Scalar>::Zero(P.n)};
  for (Index k = 0; k < P.n; ++k) {
    starts.push_back(Vector<Scalar>::Unit(P.n, k));
    starts.push_back(-Vector<Scalar>::Unit(P.n, k));
  }
  DirectionOutcome<Scalar> out;
  out.u = starts.front();
  out.xi = objective(out.u);
  for (const auto& s : starts) {
    const auto r = nelder_mead<Scalar>(objective, s);
    out.inner_iters += r.evals;
    if (r.fx < out.xi) {
      out.xi = r.fx;
      out.u = r.x;
    }
  }
  return out;
}

namespace detail {

template <typename Scalar, typename PieceFn>
TupleDirection<Scalar> best_over_tuples(const MinimalDecomposition<Scalar>& dec,
                                        std::size_t cap, PieceFn&& make_pieces,
                                        const InnerOptions<Scalar>& opt) {
  PartitionTuples<Scalar> walk(dec, cap);
  std::optional<TupleDirection<Scalar>> best;
  while (auto a = walk.next()) {
    DirectionOutcome<Scalar> o = minimize_max_quadratics(make_pieces(*a), opt);
    // Ties within 1e-12 keep the earlier tuple.
    if (!best || o.xi < best->phi - Scalar(1e-12)) {
      const Scalar phi = o.xi;
      best = TupleDirection<Scalar>{std::move(*a), std::move(o), phi};
    }
  }
  require(best.has_value(), "direction: empty partition set");
  return *best;
}

}  // namespace detail

/// Phi(x) = min over (a, u) in P_x x R^n of xi_x(a, u), with its minimizer.
template <typename Scalar>
TupleDirection<Scalar> newton_direction(
    const ProblemInstance<Scalar>& P, const Cone<Scalar>& cone,
    const VectorArg<Scalar>& x, const MinimalDecomposition<Scalar>& dec,
    const InnerOptions<Scalar>& opt = {},
    std::size_t cap = kDefaultPartitionCap) {
  return detail::best_over_tuples(
      dec, cap,
      [&](const std::vector<Index>& a) { return newton_pieces(P, cone, x, a); },
      opt);
}

/// Baseline direction: min over (a, u) of
///   max_j Psi_e(grad f^{a_j}(x) u) + 1/2 |u|^2.
template <typename Scalar>
TupleDirection<Scalar> sd_direction(const ProblemInstance<Scalar>& P,
                                    const Cone<Scalar>& cone,
                                    const VectorArg<Scalar>& x,
                                    const MinimalDecomposition<Scalar>& dec,
                                    const InnerOptions<Scalar>& opt = {},
                                    std::size_t cap = kDefaultPartitionCap) {
  return detail::best_over_tuples(
      dec, cap,
      [&](const std::vector<Index>& a) { return sd_pieces(P, cone, x, a); },
      opt);
}

}  // namespace setopt
