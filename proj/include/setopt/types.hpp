#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace setopt {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// A finite set of points in R^m, kept in index order.
template <typename Scalar>
using PointSet = std::vector<Vector<Scalar>>;

/// One symmetric n x n Hessian per objective component.
template <typename Scalar>
using HessianStack = std::vector<Matrix<Scalar>>;

/// Vector parameter that takes Scalar from elsewhere, so Eigen expressions
/// such as Vector<double>::Zero(n) convert on the way in.
template <typename Scalar>
using VectorArg = std::type_identity_t<Vector<Scalar>>;

using Index = std::ptrdiff_t;

// Error hierarchy. Everything derives from std::runtime_error so callers that
// only care about "it failed" can catch one type.

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidInput : Error {
  using Error::Error;
};

struct OracleFailure : Error {
  OracleFailure(const std::string& what, Index member)
      : Error(what), member(member) {}
  Index member;
};

struct PartitionBlowUp : Error {
  explicit PartitionBlowUp(std::size_t cardinality)
      : Error("partition blow-up: |P_x| = " + std::to_string(cardinality)),
        cardinality(cardinality) {}
  std::size_t cardinality;
};

struct StrongConvexityViolated : Error {
  StrongConvexityViolated(const std::string& what, Index cls, Index row)
      : Error(what), class_index(cls), cone_row(row) {}
  Index class_index;
  Index cone_row;
};

struct InnerSolverFailure : Error {
  InnerSolverFailure(const std::string& what, double best_gap)
      : Error(what), best_gap(best_gap) {}
  double best_gap;
};

struct LineSearchFailure : Error {
  LineSearchFailure(const std::string& what, double worst_margin)
      : Error(what), worst_margin(worst_margin) {}
  double worst_margin;
};

namespace detail {

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw InvalidInput(msg);
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

}  // namespace detail
}  // namespace setopt
