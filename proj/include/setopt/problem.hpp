#pragma once

#include "setopt/types.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>

namespace setopt {

/// Axis-aligned box used to draw random starting points.
template <typename Scalar>
struct Box {
  Vector<Scalar> lower;
  Vector<Scalar> upper;

  bool contains(const VectorArg<Scalar>& x) const {
    return (x.array() >= lower.array()).all() &&
           (x.array() <= upper.array()).all();
  }
};

/// Set-valued objective F(x) = {f^1(x), ..., f^p(x)}, each f^i : R^n -> R^m
/// twice continuously differentiable, with analytic derivative oracles.
///
/// Members are indexed 0..p-1. The Jacobian oracle returns an m x n matrix whose
/// row l is the gradient of component l; the Hessian oracle returns m symmetric
/// n x n matrices.
template <typename Scalar>
struct ProblemInstance {
  using ValueFn = std::function<Vector<Scalar>(Index, const Vector<Scalar>&)>;
  using JacobianFn =
      std::function<Matrix<Scalar>(Index, const Vector<Scalar>&)>;
  using HessianFn =
      std::function<HessianStack<Scalar>(Index, const Vector<Scalar>&)>;

  std::string name;
  Index n = 0;
  Index m = 0;
  Index p = 0;
  ValueFn value;
  JacobianFn jacobian;
  HessianFn hessian;
  Box<Scalar> sample_box;
  std::optional<Scalar> rho_hint;
};

namespace detail {

template <typename Scalar>
void check_point(const ProblemInstance<Scalar>& P, const VectorArg<Scalar>& x) {
  if (x.size() != P.n) {
    throw InvalidInput(P.name + ": expected x of dimension " +
                       std::to_string(P.n) + ", got " +
                       std::to_string(x.size()));
  }
}

template <typename Scalar>
void check_member(const ProblemInstance<Scalar>& P, Index i) {
  if (i < 0 || i >= P.p) {
    throw InvalidInput(P.name + ": member index " + std::to_string(i) +
                       " outside [0, " + std::to_string(P.p) + ")");
  }
}

}  // namespace detail

template <typename Scalar>
Vector<Scalar> member_value(const ProblemInstance<Scalar>& P, Index i,
                            const VectorArg<Scalar>& x) {
  detail::check_member(P, i);
  detail::check_point(P, x);
  Vector<Scalar> v = P.value(i, x);
  if (v.size() != P.m || !v.allFinite()) {
    throw OracleFailure(P.name + ": value oracle failed for member " +
                            std::to_string(i),
                        i);
  }
  return v;
}

/// F(x) in member order.
template <typename Scalar>
PointSet<Scalar> evaluate_family(const ProblemInstance<Scalar>& P,
                                 const VectorArg<Scalar>& x) {
  detail::check_point(P, x);
  PointSet<Scalar> out;
  out.reserve(static_cast<std::size_t>(P.p));
  for (Index i = 0; i < P.p; ++i) out.push_back(member_value(P, i, x));
  return out;
}

template <typename Scalar>
Matrix<Scalar> jacobian(const ProblemInstance<Scalar>& P, Index i,
                        const VectorArg<Scalar>& x) {
  detail::check_member(P, i);
  detail::check_point(P, x);
  Matrix<Scalar> J = P.jacobian(i, x);
  if (J.rows() != P.m || J.cols() != P.n || !J.allFinite()) {
    throw OracleFailure(P.name + ": Jacobian oracle failed for member " +
                            std::to_string(i),
                        i);
  }
  return J;
}

template <typename Scalar>
HessianStack<Scalar> hessian_stack(const ProblemInstance<Scalar>& P, Index i,
                                   const VectorArg<Scalar>& x) {
  detail::check_member(P, i);
  detail::check_point(P, x);
  HessianStack<Scalar> H = P.hessian(i, x);
  bool ok = static_cast<Index>(H.size()) == P.m;
  for (const auto& h : H) {
    ok = ok && h.rows() == P.n && h.cols() == P.n && h.allFinite();
  }
  if (!ok) {
    throw OracleFailure(P.name + ": Hessian oracle failed for member " +
                            std::to_string(i),
                        i);
  }
  return H;
}

template <typename Scalar>
struct FdReport {
  Scalar max_rel_err_jac = 0;
  Scalar max_rel_err_hess = 0;
  bool finite = true;
};

/// Central-difference check of both derivative oracles at x.
///
/// Jacobians are compared against differences of the value oracle and Hessians
/// against differences of the Jacobian oracle. Relative error is
/// |analytic - fd| / max(1, |analytic|), so near-zero entries are judged
/// absolutely.
template <typename Scalar>
FdReport<Scalar> fd_check(const ProblemInstance<Scalar>& P,
                          const VectorArg<Scalar>& x, Scalar h = Scalar(1e-5)) {
  detail::check_point(P, x);
  detail::require(h > Scalar(0), "fd_check: step must be positive");
  FdReport<Scalar> rep;
  auto rel = [](Scalar analytic, Scalar approx) {
    return std::abs(analytic - approx) /
           std::max(Scalar(1), std::abs(analytic));
  };
  for (Index i = 0; i < P.p; ++i) {
    const Matrix<Scalar> J = jacobian(P, i, x);
    const HessianStack<Scalar> H = hessian_stack(P, i, x);
    for (Index k = 0; k < P.n; ++k) {
      Vector<Scalar> xp = x, xm = x;
      xp(k) += h;
      xm(k) -= h;
      const Vector<Scalar> dv =
          (P.value(i, xp) - P.value(i, xm)) / (Scalar(2) * h);
      const Matrix<Scalar> dJ =
          (P.jacobian(i, xp) - P.jacobian(i, xm)) / (Scalar(2) * h);
      if (!dv.allFinite() || !dJ.allFinite()) {
        rep.finite = false;
        continue;
      }
      for (Index l = 0; l < P.m; ++l) {
        rep.max_rel_err_jac = std::max(rep.max_rel_err_jac, rel(J(l, k), dv(l)));
        for (Index c = 0; c < P.n; ++c) {
          // dJ(l, c) approximates d^2 f_l / dx_c dx_k.
          rep.max_rel_err_hess =
              std::max(rep.max_rel_err_hess, rel(H[l](c, k), dJ(l, c)));
        }
      }
    }
  }
  return rep;
}

/// Largest |H - H^T| entry over every member and component at x.
template <typename Scalar>
Scalar hessian_asymmetry(const ProblemInstance<Scalar>& P,
                         const VectorArg<Scalar>& x) {
  Scalar worst = 0;
  for (Index i = 0; i < P.p; ++i) {
    for (const auto& h : hessian_stack(P, i, x)) {
      worst = std::max(worst, (h - h.transpose()).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

using ProblemD = ProblemInstance<double>;

}  // namespace setopt
