#pragma once

#include "setopt/setopt.hpp"

#include <random>

namespace testing {

using setopt::Index;
using Vec = setopt::Vector<double>;
using Mat = setopt::Matrix<double>;

inline Vec uniform_vec(std::mt19937_64& rng, Index n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  Vec v(n);
  for (Index i = 0; i < n; ++i) v(i) = d(rng);
  return v;
}

inline setopt::ConeD cone_5_6() {
  Mat rows(2, 2);
  rows << 5, -1, -9, 10;
  return setopt::ConeD(rows, Vec::Ones(2));
}

/// min{t : t e - z in K} by bisection on membership alone.
inline double gerstewitz_bisect(const setopt::ConeD& K, const Vec& z) {
  auto inside = [&](double t) {
    return ((K.rows() * (t * K.e() - z)).array() >= 0).all();
  };
  double lo = -1, hi = 1;
  while (inside(lo)) lo *= 2;
  while (!inside(hi)) hi *= 2;
  for (int k = 0; k < 200 && hi - lo > 1e-14 * (1 + std::abs(hi)); ++k) {
    const double mid = 0.5 * (lo + hi);
    (inside(mid) ? hi : lo) = mid;
  }
  return hi;
}

/// Same quadratic pieces seen through a closed form, for oracle comparisons.
inline double max_pieces(const std::vector<setopt::QuadraticPiece<double>>& q,
                         const Vec& u) {
  double best = -1e300;
  for (const auto& p : q) {
    best = std::max(best, p.linear.dot(u) + 0.5 * u.dot(p.curvature * u));
  }
  return best;
}

}  // namespace testing
