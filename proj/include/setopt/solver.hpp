#pragma once

#include "setopt/cone.hpp"
#include "setopt/direction.hpp"
#include "setopt/minimal.hpp"
#include "setopt/problem.hpp"

#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace setopt {

enum class Algorithm { Newton, NewtonFullStep, SteepestDescent };

enum class RunStatus {
  Converged,
  MaxIterations,
  LineSearchFailure,
  InnerFailure,
  PartitionBlowUp,
};

inline std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return "Converged";
    case RunStatus::MaxIterations: return "MaxIterations";
    case RunStatus::LineSearchFailure: return "LineSearchFailure";
    case RunStatus::InnerFailure: return "InnerFailure";
    case RunStatus::PartitionBlowUp: return "PartitionBlowUp";
  }
  return "?";
}

inline std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Newton: return "NM";
    case Algorithm::NewtonFullStep: return "NM_fullstep";
    case Algorithm::SteepestDescent: return "SD";
  }
  return "?";
}

template <typename Scalar>
struct SolverConfig {
  Scalar beta = Scalar(0.5);   // Armijo slope fraction
  Scalar nu = Scalar(0.54);    // backtracking ratio
  Scalar eps = Scalar(1e-3);   // stop when |u_k| < eps
  int max_iter = 100;          // cap on trace length
  bool full_step = false;      // t_k = 1, no line search
  int q_max = 60;
  InnerOptions<Scalar> inner;
  std::size_t partition_cap = kDefaultPartitionCap;
  Scalar tie_tol = Scalar(1e-9);

  void validate() const {
    detail::require(beta > 0 && beta < 1, "config: beta must lie in (0,1)");
    detail::require(nu > 0 && nu < 1, "config: nu must lie in (0,1)");
    detail::require(eps > 0, "config: eps must be positive");
    detail::require(max_iter >= 1, "config: max_iter must be >= 1");
    detail::require(q_max >= 1, "config: q_max must be >= 1");
    detail::require(partition_cap >= 1, "config: partition cap must be >= 1");
  }
};

template <typename Scalar>
struct IterateRecord {
  Index k = 0;
  Vector<Scalar> x;
  Index w = 0;
  std::vector<Index> tuple;
  Vector<Scalar> u;
  Scalar u_norm = 0;
  Scalar phi = 0;
  std::optional<Scalar> t;  // empty on the terminal record
  Scalar varsigma = 0;
  double elapsed = 0;  // seconds since the run started
};

template <typename Scalar>
struct RunRecord {
  SolverConfig<Scalar> config;
  Algorithm algorithm = Algorithm::Newton;
  std::string problem;
  Vector<Scalar> x0;
  std::vector<IterateRecord<Scalar>> trace;
  RunStatus status = RunStatus::MaxIterations;
  bool terminal_regular = false;
  std::string message;

  /// Iteration count as reported in tables: the terminal check counts.
  Index iterations() const { return static_cast<Index>(trace.size()); }
  Index updates() const {
    Index n = 0;
    for (const auto& r : trace) n += r.t.has_value() ? 1 : 0;
    return n;
  }
  Vector<Scalar> final_x() const {
    if (trace.empty()) return x0;
    const auto& last = trace.back();
    return last.t ? Vector<Scalar>(last.x + *last.t * last.u) : last.x;
  }
};

/// Largest nu^q, q = 0..q_max, with
///   f^{a_j}(x + nu^q u) <= f^{a_j}(x) + beta nu^q grad f^{a_j}(x) u
/// in the cone order for every j in the tuple.
template <typename Scalar>
Scalar armijo_step(const ProblemInstance<Scalar>& P, const Cone<Scalar>& cone,
                   const VectorArg<Scalar>& x, const std::vector<Index>& tuple,
                   const VectorArg<Scalar>& u, const SolverConfig<Scalar>& cfg) {
  std::vector<Vector<Scalar>> base, slope;
  for (Index i : tuple) {
    base.push_back(member_value(P, i, x));
    slope.push_back(jacobian(P, i, x) * u);
  }
  Scalar t = 1;
  Scalar worst = -std::numeric_limits<Scalar>::infinity();
  for (int q = 0; q <= cfg.q_max; ++q, t *= cfg.nu) {
    const Vector<Scalar> y = x + t * u;
    bool ok = true;
    Scalar margin = std::numeric_limits<Scalar>::infinity();
    for (std::size_t j = 0; j < tuple.size(); ++j) {
      const Vector<Scalar> lhs = member_value(P, tuple[j], y);
      const Vector<Scalar> rhs = base[j] + cfg.beta * t * slope[j];
      margin = std::min(margin, cone.margin(rhs - lhs));
      ok = ok && cone.leq(lhs, rhs, false);
    }
    if (ok) return t;
    worst = std::max(worst, margin);
  }
  throw LineSearchFailure("Armijo search exhausted q_max = " +
                              std::to_string(cfg.q_max) +
                              "; best violated margin " +
                              std::to_string(double(worst)),
                          double(worst));
}

namespace detail {

template <typename Scalar, typename DirectionFn>
RunRecord<Scalar> run_descent(const ProblemInstance<Scalar>& P,
                              const Cone<Scalar>& cone,
                              const SolverConfig<Scalar>& cfg,
                              const VectorArg<Scalar>& x0, Algorithm algo,
                              DirectionFn&& direction) {
  cfg.validate();
  require(x0.size() == P.n && x0.allFinite(), "solve: bad starting point");
  require(cone.dim() == P.m, "solve: cone dimension != m");
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto seconds = [&] {
    return std::chrono::duration<double>(Clock::now() - start).count();
  };

  RunRecord<Scalar> run;
  run.config = cfg;
  run.algorithm = algo;
  run.problem = P.name;
  run.x0 = x0;
  Vector<Scalar> x = x0;
  for (Index k = 0;; ++k) {
    IterateRecord<Scalar> rec;
    rec.k = k;
    rec.x = x;
    try {
      const auto dec = decompose(P, cone, x, cfg.tie_tol);
      rec.w = dec.w();
      rec.varsigma = varsigma(cone, dec.values);
      run.terminal_regular = dec.regular();
      TupleDirection<Scalar> dir = direction(x, dec);
      rec.tuple = std::move(dir.tuple);
      rec.u = std::move(dir.outcome.u);
      rec.u_norm = rec.u.norm();
      rec.phi = dir.phi;
      if (rec.u_norm < cfg.eps) {
        run.status = RunStatus::Converged;
      } else if (k + 1 >= cfg.max_iter) {
        run.status = RunStatus::MaxIterations;
      } else {
        rec.t = cfg.full_step
                    ? Scalar(1)
                    : armijo_step(P, cone, x, rec.tuple, rec.u, cfg);
      }
    } catch (const setopt::PartitionBlowUp& e) {
      run.status = RunStatus::PartitionBlowUp;
      run.message = e.what();
      break;
    } catch (const setopt::LineSearchFailure& e) {
      run.status = RunStatus::LineSearchFailure;
      run.message = e.what();
      rec.elapsed = seconds();
      run.trace.push_back(std::move(rec));
      break;
    } catch (const setopt::StrongConvexityViolated& e) {
      run.status = RunStatus::InnerFailure;
      run.message = e.what();
      break;
    } catch (const setopt::InnerSolverFailure& e) {
      run.status = RunStatus::InnerFailure;
      run.message = e.what();
      break;
    }
    rec.elapsed = seconds();
    const bool stop = !rec.t.has_value();
    if (!stop) x = x + *rec.t * rec.u;
    run.trace.push_back(std::move(rec));
    if (stop) break;
  }
  return run;
}

}  // namespace detail

/// Newton method for the set problem under the lower set less order.
template <typename Scalar>
RunRecord<Scalar> solve_newton(const ProblemInstance<Scalar>& P,
                               const Cone<Scalar>& cone,
                               const SolverConfig<Scalar>& cfg,
                               const VectorArg<Scalar>& x0) {
  return detail::run_descent(
      P, cone, cfg, x0,
      cfg.full_step ? Algorithm::NewtonFullStep : Algorithm::Newton,
      [&](const VectorArg<Scalar>& x, const MinimalDecomposition<Scalar>& dec) {
        return newton_direction(P, cone, x, dec, cfg.inner, cfg.partition_cap);
      });
}

/// Steepest-descent baseline with the same Armijo rule.
template <typename Scalar>
RunRecord<Scalar> solve_sd(const ProblemInstance<Scalar>& P,
                           const Cone<Scalar>& cone,
                           const SolverConfig<Scalar>& cfg,
                           const VectorArg<Scalar>& x0) {
  return detail::run_descent(
      P, cone, cfg, x0, Algorithm::SteepestDescent,
      [&](const VectorArg<Scalar>& x, const MinimalDecomposition<Scalar>& dec) {
        return sd_direction(P, cone, x, dec, cfg.inner, cfg.partition_cap);
      });
}

template <typename Scalar>
RunRecord<Scalar> solve(const ProblemInstance<Scalar>& P,
                        const Cone<Scalar>& cone, Algorithm algo,
                        SolverConfig<Scalar> cfg, const VectorArg<Scalar>& x0) {
  if (algo == Algorithm::SteepestDescent) return solve_sd(P, cone, cfg, x0);
  cfg.full_step = algo == Algorithm::NewtonFullStep;
  return solve_newton(P, cone, cfg, x0);
}

template <typename Scalar>
struct StepAudit {
  Index k = 0;
  bool strict_descent = false;  // F(x_{k+1}) <^l F(x_k)
  bool merit_ok = false;        // varsigma recursion
  Scalar merit_slack = 0;       // rhs - lhs; >= -1e-9 passes
};

template <typename Scalar>
struct DescentAudit {
  std::vector<StepAudit<Scalar>> steps;

  bool passed() const {
    for (const auto& s : steps) {
      if (!s.strict_descent || !s.merit_ok) return false;
    }
    return true;
  }
  Index failures() const {
    Index n = 0;
    for (const auto& s : steps) n += (!s.strict_descent || !s.merit_ok);
    return n;
  }
};

/// Re-checks every accepted step of a run: strict set descent and
///   varsigma(F(x_{k+1})) <= varsigma(F(x_k)) + beta t_k Phi(x_k) + 1e-9.
template <typename Scalar>
DescentAudit<Scalar> descent_audit(const ProblemInstance<Scalar>& P,
                                   const Cone<Scalar>& cone,
                                   const RunRecord<Scalar>& run,
                                   Scalar slack = Scalar(1e-9)) {
  DescentAudit<Scalar> audit;
  for (const auto& rec : run.trace) {
    if (!rec.t) continue;
    const Vector<Scalar> next = rec.x + *rec.t * rec.u;
    const PointSet<Scalar> before = evaluate_family(P, rec.x);
    const PointSet<Scalar> after = evaluate_family(P, next);
    StepAudit<Scalar> s;
    s.k = rec.k;
    s.strict_descent = lower_set_less(cone, after, before, true);
    const Scalar lhs = varsigma(cone, after);
    const Scalar rhs =
        varsigma(cone, before) + run.config.beta * *rec.t * rec.phi;
    s.merit_slack = rhs - lhs;
    s.merit_ok = s.merit_slack >= -slack;
    audit.steps.push_back(s);
  }
  return audit;
}

template <typename Scalar>
struct ConvergenceRatios {
  std::vector<Scalar> linear;     // e_{k+1} / e_k
  std::vector<Scalar> quadratic;  // e_{k+1} / e_k^2
};

/// Error ratios against xbar (default: the final iterate). Terms with
/// e_k < 1e-12 are dropped; runs with fewer than three iterates give nothing.
template <typename Scalar>
ConvergenceRatios<Scalar> convergence_order(
    const RunRecord<Scalar>& run,
    const std::optional<VectorArg<Scalar>>& xbar = std::nullopt) {
  std::vector<Vector<Scalar>> xs;
  for (const auto& r : run.trace) xs.push_back(r.x);
  ConvergenceRatios<Scalar> out;
  if (xs.size() < 3) return out;
  const Vector<Scalar> ref = xbar.value_or(xs.back());
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    const Scalar ek = (xs[k] - ref).norm();
    if (ek < Scalar(1e-12)) continue;
    const Scalar ek1 = (xs[k + 1] - ref).norm();
    out.linear.push_back(ek1 / ek);
    out.quadratic.push_back(ek1 / (ek * ek));
  }
  return out;
}

using SolverConfigD = SolverConfig<double>;
using RunRecordD = RunRecord<double>;

}  // namespace setopt
