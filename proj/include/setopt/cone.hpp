#pragma once

#include "setopt/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace setopt {

/// Polyhedral ordering cone K = {y : A y >= 0} with an interior direction e.
///
/// Rows of A are the generators of the dual cone. They are stored as given;
/// every quantity derived here is invariant under positive row scaling.
/// The order is y <= z iff z - y in K, and the strict order uses int(K).
template <typename Scalar>
class Cone {
 public:
  static constexpr Scalar kDefaultTolerance = Scalar(1e-10);

  Cone(Matrix<Scalar> rows, Vector<Scalar> e,
       Scalar tol_membership = kDefaultTolerance)
      : rows_(std::move(rows)), e_(std::move(e)), tol_(tol_membership) {
    detail::require(rows_.rows() >= 1, "cone: need at least one row");
    detail::require(rows_.cols() >= 1, "cone: ambient dimension must be >= 1");
    detail::require(e_.size() == rows_.cols(),
                    "cone: interior direction has wrong dimension");
    detail::require(tol_ >= Scalar(0), "cone: tolerance must be nonnegative");
    detail::require(rows_.allFinite() && e_.allFinite(),
                    "cone: non-finite data");
    for (Index i = 0; i < rows_.rows(); ++i) {
      detail::require(rows_.row(i).cwiseAbs().maxCoeff() > Scalar(0),
                      "cone: row " + std::to_string(i) + " is zero");
    }
    row_dot_e_ = rows_ * e_;
    for (Index i = 0; i < rows_.rows(); ++i) {
      detail::require(row_dot_e_(i) > Scalar(0),
                      "cone: e is not interior (row " + std::to_string(i) +
                          " gives a_i.e <= 0)");
    }
  }

  /// The standard cone R^m_+ with e = (1, ..., 1).
  static Cone orthant(Index m, Scalar tol = kDefaultTolerance) {
    return Cone(Matrix<Scalar>::Identity(m, m), Vector<Scalar>::Ones(m), tol);
  }

  Index dim() const { return rows_.cols(); }
  Index num_rows() const { return rows_.rows(); }
  const Matrix<Scalar>& rows() const { return rows_; }
  const Vector<Scalar>& e() const { return e_; }
  Scalar tolerance() const { return tol_; }
  /// a_i . e for every row; strictly positive.
  const Vector<Scalar>& row_dot_e() const { return row_dot_e_; }

  bool contains(const Vector<Scalar>& z, bool strict = false) const {
    check_dim(z);
    const Vector<Scalar> slack = rows_ * z;
    return strict ? (slack.array() > tol_).all()
                  : (slack.array() >= -tol_).all();
  }

  bool leq(const Vector<Scalar>& y, const Vector<Scalar>& z,
           bool strict = false) const {
    check_dim(y);
    return contains(z - y, strict);
  }

  /// Smallest row slack min_i a_i.z. Negative means z lies outside K.
  Scalar margin(const Vector<Scalar>& z) const {
    check_dim(z);
    return (rows_ * z).minCoeff();
  }

  /// Gerstewitz functional min{t : t e in z + K}, in its closed polyhedral
  /// form max_i (a_i.z)/(a_i.e).
  Scalar gerstewitz(const Vector<Scalar>& z) const {
    check_dim(z);
    return ((rows_ * z).array() / row_dot_e_.array()).maxCoeff();
  }

  /// Lipschitz constant of gerstewitz() w.r.t. the Euclidean norm.
  Scalar gerstewitz_lipschitz() const {
    return (rows_.rowwise().norm().array() / row_dot_e_.array()).maxCoeff();
  }

 private:
  void check_dim(const Vector<Scalar>& z) const {
    if (z.size() != dim()) {
      throw InvalidInput("cone: expected vector of dimension " +
                         std::to_string(dim()) + ", got " +
                         std::to_string(z.size()));
    }
  }

  Matrix<Scalar> rows_;
  Vector<Scalar> e_;
  Scalar tol_;
  Vector<Scalar> row_dot_e_;
};

/// A <=^l B  iff  B is contained in A + K (or A + int K when strict).
template <typename Scalar>
bool lower_set_less(const Cone<Scalar>& cone, const PointSet<Scalar>& a,
                    const PointSet<Scalar>& b, bool strict = false) {
  detail::require(!a.empty() && !b.empty(),
                  "lower_set_less: sets must be nonempty");
  return std::all_of(b.begin(), b.end(), [&](const Vector<Scalar>& bv) {
    return std::any_of(a.begin(), a.end(), [&](const Vector<Scalar>& av) {
      return cone.leq(av, bv, strict);
    });
  });
}

/// Merit value: smallest Gerstewitz value over a finite set.
template <typename Scalar>
Scalar varsigma(const Cone<Scalar>& cone, const PointSet<Scalar>& a) {
  detail::require(!a.empty(), "varsigma: set must be nonempty");
  Scalar best = std::numeric_limits<Scalar>::infinity();
  for (const auto& z : a) best = std::min(best, cone.gerstewitz(z));
  return best;
}

/// Interior direction maximizing min_i a_i.e over the box ||e||_inf = 1, for
/// two-dimensional cones. The optimum of this small LP sits at a box corner or
/// at a point on a box edge where two rows give equal slack, so enumerating
/// those candidates is exact.
template <typename Scalar>
Vector<Scalar> max_slack_direction_2d(const Matrix<Scalar>& rows) {
  detail::require(rows.cols() == 2, "max_slack_direction_2d: need m = 2");
  std::vector<Vector<Scalar>> candidates;
  for (Scalar s0 : {Scalar(-1), Scalar(1)}) {
    for (Scalar s1 : {Scalar(-1), Scalar(1)}) {
      candidates.push_back((Vector<Scalar>(2) << s0, s1).finished());
    }
  }
  // Crossings on the edges e_k = +-1 between rows i and j.
  for (Index i = 0; i < rows.rows(); ++i) {
    for (Index j = i + 1; j < rows.rows(); ++j) {
      const Vector<Scalar> d = (rows.row(i) - rows.row(j)).transpose();
      for (Index fixed = 0; fixed < 2; ++fixed) {
        const Index free = 1 - fixed;
        if (d(free) == Scalar(0)) continue;
        for (Scalar s : {Scalar(-1), Scalar(1)}) {
          const Scalar v = -d(fixed) * s / d(free);
          if (std::abs(v) > Scalar(1)) continue;
          Vector<Scalar> c(2);
          c(fixed) = s;
          c(free) = v;
          candidates.push_back(c);
        }
      }
    }
  }
  Vector<Scalar> best = candidates.front();
  Scalar best_val = (rows * best).minCoeff();
  for (const auto& c : candidates) {
    const Scalar v = (rows * c).minCoeff();
    if (v > best_val) {
      best_val = v;
      best = c;
    }
  }
  detail::require(best_val > Scalar(0),
                  "max_slack_direction_2d: cone has empty interior");
  return best;
}

using ConeD = Cone<double>;

}  // namespace setopt
