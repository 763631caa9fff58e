#pragma once

#include "setopt/types.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <vector>

namespace setopt {

template <typename Scalar>
struct NelderMeadOptions {
  Scalar initial_step = Scalar(1);
  Scalar x_tol = Scalar(1e-10);
  Scalar f_tol = Scalar(1e-14);
  int max_evals = 20000;
  int max_restarts = 20;
};

template <typename Scalar>
struct NelderMeadResult {
  Vector<Scalar> x;
  Scalar fx;
  int evals = 0;
};

namespace detail {

// One Nelder-Mead run with reflection 1, expansion 2, contraction 1/2,
// shrink 1/2, from an axis-aligned simplex of the given size.
template <typename Scalar, typename F>
NelderMeadResult<Scalar> nelder_mead_once(F&& f, const Vector<Scalar>& x0,
                                          Scalar step,
                                          const NelderMeadOptions<Scalar>& opt,
                                          int eval_budget) {
  const Index n = x0.size();
  std::vector<Vector<Scalar>> pts(n + 1, x0);
  std::vector<Scalar> vals(n + 1);
  for (Index k = 0; k < n; ++k) pts[k + 1](k) += step;
  int evals = 0;
  for (Index k = 0; k <= n; ++k, ++evals) vals[k] = f(pts[k]);

  std::vector<Index> order(n + 1);
  while (evals < eval_budget) {
    std::iota(order.begin(), order.end(), Index(0));
    std::sort(order.begin(), order.end(),
              [&](Index a, Index b) { return vals[a] < vals[b]; });
    const Index best = order.front(), worst = order.back(),
                second = order[n - 1];

    Scalar spread = 0;
    for (Index k = 0; k <= n; ++k) {
      spread = std::max(spread, (pts[k] - pts[best]).cwiseAbs().maxCoeff());
    }
    if (spread <= opt.x_tol && vals[worst] - vals[best] <= opt.f_tol) break;

    Vector<Scalar> centroid = Vector<Scalar>::Zero(n);
    for (Index k = 0; k <= n; ++k) {
      if (k != worst) centroid += pts[k];
    }
    centroid /= Scalar(n);

    const Vector<Scalar> xr = centroid + (centroid - pts[worst]);
    const Scalar fr = f(xr);
    ++evals;
    if (fr < vals[best]) {
      const Vector<Scalar> xe = centroid + Scalar(2) * (centroid - pts[worst]);
      const Scalar fe = f(xe);
      ++evals;
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    const Vector<Scalar> xc =
        outside ? Vector<Scalar>(centroid + Scalar(0.5) * (xr - centroid))
                : Vector<Scalar>(centroid + Scalar(0.5) * (pts[worst] - centroid));
    const Scalar fc = f(xc);
    ++evals;
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = xc;
      vals[worst] = fc;
      continue;
    }
    for (Index k = 0; k <= n; ++k) {
      if (k == best) continue;
      pts[k] = pts[best] + Scalar(0.5) * (pts[k] - pts[best]);
      vals[k] = f(pts[k]);
      ++evals;
    }
  }
  const Index best = static_cast<Index>(
      std::min_element(vals.begin(), vals.end()) - vals.begin());
  return {pts[best], vals[best], evals};
}

}  // namespace detail

/// Derivative-free minimization. Restarts from the incumbent with a fresh
/// simplex until a restart no longer improves, which gets Nelder-Mead past the
/// kinks of nonsmooth objectives.
template <typename Scalar, typename F>
NelderMeadResult<Scalar> nelder_mead(F&& f, const Vector<Scalar>& x0,
                                     const NelderMeadOptions<Scalar>& opt = {}) {
  int budget = opt.max_evals;
  NelderMeadResult<Scalar> best =
      detail::nelder_mead_once<Scalar>(f, x0, opt.initial_step, opt, budget);
  budget -= best.evals;
  Scalar step = opt.initial_step;
  for (int r = 0; r < opt.max_restarts && budget > 0; ++r) {
    step = std::max(step * Scalar(0.5), Scalar(1e3) * opt.x_tol);
    auto next = detail::nelder_mead_once<Scalar>(f, best.x, step, opt, budget);
    budget -= next.evals;
    const int total = best.evals + next.evals;
    const bool improved = next.fx < best.fx - opt.f_tol;
    if (next.fx < best.fx) best = next;
    best.evals = total;
    if (!improved && step <= Scalar(1e3) * opt.x_tol) break;
  }
  return best;
}

}  // namespace setopt
