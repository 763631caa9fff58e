#pragma once

#include "setopt/cone.hpp"
#include "setopt/problem.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

namespace setopt {

inline constexpr std::size_t kDefaultPartitionCap = 4096;

/// Values are "equal" when ||y - z||_inf <= tol * (1 + ||z||_inf).
template <typename Scalar>
bool same_value(const Vector<Scalar>& y, const Vector<Scalar>& z,
                Scalar tie_tol = Scalar(1e-9)) {
  const Scalar scale = Scalar(1) + std::max(y.template lpNorm<Eigen::Infinity>(),
                                            z.template lpNorm<Eigen::Infinity>());
  return (y - z).template lpNorm<Eigen::Infinity>() <= tie_tol * scale;
}

/// Indices of Min(values, K): i is kept unless some value different from
/// values[i] is <= values[i]. Duplicates of a minimal value are all kept.
template <typename Scalar>
std::vector<Index> minimal_indices(const PointSet<Scalar>& values,
                                   const Cone<Scalar>& cone,
                                   Scalar tie_tol = Scalar(1e-9)) {
  detail::require(!values.empty(), "minimal_indices: empty input");
  const Index p = static_cast<Index>(values.size());
  std::vector<Index> out;
  for (Index i = 0; i < p; ++i) {
    bool dominated = false;
    for (Index j = 0; j < p && !dominated; ++j) {
      if (j == i) continue;
      dominated = cone.leq(values[j], values[i], false) &&
                  !same_value(values[j], values[i], tie_tol);
    }
    if (!dominated) out.push_back(i);
  }
  return out;
}

/// Indices of WMin(values, K): no value lies in values[i] - int(K).
template <typename Scalar>
std::vector<Index> weakly_minimal_indices(const PointSet<Scalar>& values,
                                          const Cone<Scalar>& cone) {
  detail::require(!values.empty(), "weakly_minimal_indices: empty input");
  const Index p = static_cast<Index>(values.size());
  std::vector<Index> out;
  for (Index i = 0; i < p; ++i) {
    bool dominated = false;
    for (Index j = 0; j < p && !dominated; ++j) {
      dominated = j != i && cone.leq(values[j], values[i], true);
    }
    if (!dominated) out.push_back(i);
  }
  return out;
}

template <typename Scalar>
struct ValueClass {
  Vector<Scalar> representative;
  std::vector<Index> members;  // ascending
};

/// Minimal elements of F(x), grouped into classes of equal value.
template <typename Scalar>
struct MinimalDecomposition {
  PointSet<Scalar> values;
  std::vector<Index> min_indices;
  std::vector<Index> wmin_indices;
  std::vector<ValueClass<Scalar>> classes;

  Index w() const { return static_cast<Index>(classes.size()); }

  std::size_t partition_cardinality() const {
    std::size_t card = 1;
    for (const auto& c : classes) card *= c.members.size();
    return card;
  }

  /// Min(F(x),K) = WMin(F(x),K); a diagnostic only.
  bool regular() const { return min_indices == wmin_indices; }
};

/// Groups minimal indices by value. Classes are ordered by their smallest
/// member, which fixes the enumeration r_1, ..., r_w.
template <typename Scalar>
std::vector<ValueClass<Scalar>> group_classes(const PointSet<Scalar>& values,
                                              const std::vector<Index>& mins,
                                              Scalar tie_tol = Scalar(1e-9)) {
  std::vector<ValueClass<Scalar>> classes;
  for (Index i : mins) {
    auto it = std::find_if(classes.begin(), classes.end(), [&](const auto& c) {
      return same_value(c.representative, values[i], tie_tol);
    });
    if (it == classes.end()) {
      classes.push_back({values[i], {i}});
    } else {
      it->members.push_back(i);
    }
  }
  return classes;
}

template <typename Scalar>
MinimalDecomposition<Scalar> decompose_values(PointSet<Scalar> values,
                                              const Cone<Scalar>& cone,
                                              Scalar tie_tol = Scalar(1e-9)) {
  MinimalDecomposition<Scalar> dec;
  dec.min_indices = minimal_indices(values, cone, tie_tol);
  dec.wmin_indices = weakly_minimal_indices(values, cone);
  dec.classes = group_classes(values, dec.min_indices, tie_tol);
  dec.values = std::move(values);
  return dec;
}

template <typename Scalar>
MinimalDecomposition<Scalar> decompose(const ProblemInstance<Scalar>& P,
                                       const Cone<Scalar>& cone,
                                       const VectorArg<Scalar>& x,
                                       Scalar tie_tol = Scalar(1e-9)) {
  detail::require(cone.dim() == P.m, "decompose: cone dimension != m");
  return decompose_values(evaluate_family(P, x), cone, tie_tol);
}

/// Lazy lexicographic walk over P_x = I_{r_1} x ... x I_{r_w}.
///
///   PartitionTuples tuples(dec, cap);
///   while (auto a = tuples.next()) use(*a);
///
/// Construction throws PartitionBlowUp when |P_x| exceeds cap.
template <typename Scalar>
class PartitionTuples {
 public:
  PartitionTuples(const MinimalDecomposition<Scalar>& dec,
                  std::size_t cap = kDefaultPartitionCap)
      : dec_(&dec), cursor_(dec.classes.size(), 0) {
    detail::require(cap >= 1, "partition_tuples: cap must be >= 1");
    const std::size_t card = dec.partition_cardinality();
    if (card > cap) throw PartitionBlowUp(card);
    done_ = dec.classes.empty();
  }

  std::optional<std::vector<Index>> next() {
    if (done_) return std::nullopt;
    std::vector<Index> tuple(cursor_.size());
    for (std::size_t j = 0; j < cursor_.size(); ++j) {
      tuple[j] = dec_->classes[j].members[cursor_[j]];
    }
    advance();
    return tuple;
  }

 private:
  void advance() {
    for (std::size_t j = cursor_.size(); j-- > 0;) {
      if (++cursor_[j] < dec_->classes[j].members.size()) return;
      cursor_[j] = 0;
    }
    done_ = true;
  }

  const MinimalDecomposition<Scalar>* dec_;
  std::vector<std::size_t> cursor_;
  bool done_ = false;
};

template <typename Scalar>
std::vector<std::vector<Index>> partition_tuples(
    const MinimalDecomposition<Scalar>& dec,
    std::size_t cap = kDefaultPartitionCap) {
  PartitionTuples<Scalar> walk(dec, cap);
  std::vector<std::vector<Index>> out;
  while (auto a = walk.next()) out.push_back(std::move(*a));
  return out;
}

}  // namespace setopt
