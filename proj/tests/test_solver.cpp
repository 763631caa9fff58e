#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace setopt;
using testing::Mat;
using testing::Vec;

namespace {

ProblemD square() {
  ProblemD P;
  P.name = "square";
  P.n = P.m = P.p = 1;
  P.value = [](Index, const Vec& x) { return Vec::Constant(1, x(0) * x(0)); };
  P.jacobian = [](Index, const Vec& x) { return Mat::Constant(1, 1, 2 * x(0)); };
  P.hessian = [](Index, const Vec&) {
    return HessianStack<double>{Mat::Constant(1, 1, 2.0)};
  };
  P.sample_box = {Vec::Constant(1, -2), Vec::Constant(1, 2)};
  return P;
}

void check_trace_shape(const RunRecordD& run, const SolverConfigD& cfg) {
  REQUIRE_FALSE(run.trace.empty());
  for (std::size_t k = 0; k + 1 < run.trace.size(); ++k) {
    const auto& r = run.trace[k];
    CHECK(r.k == Index(k));
    CHECK(r.t.has_value());
    CHECK(r.u_norm >= cfg.eps);
    CHECK(r.phi <= 0);
    CHECK((run.trace[k + 1].x - (r.x + *r.t * r.u)).norm() == 0);
  }
  CHECK_FALSE(run.trace.back().t.has_value());
  CHECK((run.status == RunStatus::Converged) == (run.trace.back().u_norm < cfg.eps));
}

}  // namespace

TEST_CASE("config validation") {
  SolverConfigD c;
  CHECK_NOTHROW(c.validate());
  c.beta = 1;
  CHECK_THROWS_AS(c.validate(), InvalidInput);
  c = {};
  c.nu = 0;
  CHECK_THROWS_AS(c.validate(), InvalidInput);
  c = {};
  c.q_max = 0;
  CHECK_THROWS_AS(c.validate(), InvalidInput);
}

TEST_CASE("armijo step") {
  const auto P = square();
  const auto K = ConeD::orthant(1);
  const SolverConfigD cfg;
  const Vec x = Vec::Ones(1);
  CHECK(armijo_step(P, K, x, {0}, Vec::Zero(1), cfg) == 1);
  CHECK(armijo_step(P, K, x, {0}, Vec::Constant(1, -1.0), cfg) == 1);
  // u = -2 overshoots; the first two trials are rejected.
  CHECK(armijo_step(P, K, x, {0}, Vec::Constant(1, -2.0), cfg) ==
        doctest::Approx(0.54 * 0.54));

  SolverConfigD tight = cfg;
  tight.q_max = 5;
  try {
    armijo_step(P, K, x, {0}, Vec::Constant(1, 1.0), tight);
    FAIL("expected LineSearchFailure");
  } catch (const LineSearchFailure& e) {
    CHECK(e.worst_margin < 0);
  }

  const auto ex = make_example<double>("ex5_5");
  CHECK(armijo_step(ex.problem, ex.cone, Vec{{-5.0, -5.0}}, {0}, Vec{{4.0, 4.0}},
                    cfg) == 1);
}

TEST_CASE("ex5_5 full-step run") {
  const auto ex = make_example<double>("ex5_5");
  SolverConfigD cfg;
  cfg.full_step = true;
  const auto run = solve_newton(ex.problem, ex.cone, cfg, Vec{{-5.0, -5.0}});
  CHECK(run.status == RunStatus::Converged);
  CHECK(run.algorithm == Algorithm::NewtonFullStep);
  REQUIRE(run.iterations() == 2);
  CHECK(run.updates() == 1);
  CHECK((run.trace[1].x - Vec{{-1.0, -1.0}}).norm() < 1e-12);
  CHECK(run.trace[1].u_norm < 1e-4);
  CHECK(run.terminal_regular);
  check_trace_shape(run, cfg);
  CHECK(descent_audit(ex.problem, ex.cone, run).passed());
  CHECK(convergence_order(run).linear.empty());
}

TEST_CASE("ex5_1 backtracking runs") {
  const auto ex = make_example<double>("ex5_1");
  const SolverConfigD cfg;
  const Vec x0{{0.5102, 1.0}};
  for (auto algo : {Algorithm::Newton, Algorithm::SteepestDescent}) {
    CAPTURE(to_string(algo));
    const auto run = solve(ex.problem, ex.cone, algo, cfg, x0);
    CHECK(run.status == RunStatus::Converged);
    CHECK(run.algorithm == algo);
    CHECK(run.final_x().norm() < 2e-2);
    check_trace_shape(run, cfg);
    CHECK(descent_audit(ex.problem, ex.cone, run).passed());
  }
  const auto sd = solve_sd(ex.problem, ex.cone, cfg, x0);
  const auto ratios = convergence_order(sd);
  REQUIRE(ratios.linear.size() >= 3);
  CHECK(ratios.linear.back() < 1);
}

TEST_CASE("ex5_4 Newton moves, steepest descent stalls") {
  const auto ex = make_example<double>("ex5_4");
  const SolverConfigD cfg;
  const Vec x0 = Vec::Constant(1, 2.13);
  const auto nm = solve_newton(ex.problem, ex.cone, cfg, x0);
  CHECK(nm.status == RunStatus::Converged);
  CHECK(std::abs(nm.final_x()(0) - 1.9957) < 5e-2);
  CHECK(nm.updates() <= 19);

  const auto sd = solve_sd(ex.problem, ex.cone, cfg, x0);
  CHECK(sd.status == RunStatus::Converged);
  CHECK(sd.updates() == 0);
  CHECK((sd.final_x() - x0).norm() < 1e-6);
}

TEST_CASE("iteration cap") {
  const auto ex = make_example<double>("ex5_1");
  SolverConfigD cfg;
  cfg.max_iter = 3;
  const auto run = solve_sd(ex.problem, ex.cone, cfg, Vec{{3.0, -2.0}});
  CHECK(run.status == RunStatus::MaxIterations);
  CHECK(run.iterations() == 3);
  CHECK(run.updates() == 2);
  check_trace_shape(run, cfg);
}

TEST_CASE("stationary start") {
  const auto P = square();
  const auto run = solve_newton(P, ConeD::orthant(1), SolverConfigD{}, Vec::Zero(1));
  CHECK(run.status == RunStatus::Converged);
  CHECK(run.updates() == 0);
  CHECK(run.iterations() == 1);
}

TEST_CASE("failure statuses") {
  auto P = square();
  const auto K = ConeD::orthant(1);
  P.hessian = [](Index, const Vec&) {
    return HessianStack<double>{Mat::Constant(1, 1, -2.0)};
  };
  const auto inner = solve_newton(P, K, SolverConfigD{}, Vec::Ones(1));
  CHECK(inner.status == RunStatus::InnerFailure);
  CHECK(inner.message.find("strong convexity") != std::string::npos);

  // p copies of the same value: the single class has p members.
  auto Q = square();
  Q.p = 5;
  SolverConfigD cfg;
  cfg.partition_cap = 4;
  const auto blow = solve_newton(Q, K, cfg, Vec::Ones(1));
  CHECK(blow.status == RunStatus::PartitionBlowUp);
  CHECK(blow.trace.empty());

  // Ascent direction: Armijo can never succeed.
  auto R = square();
  R.jacobian = [](Index, const Vec& x) { return Mat::Constant(1, 1, -2 * x(0)); };
  cfg = {};
  cfg.q_max = 8;
  const auto ls = solve_sd(R, K, cfg, Vec::Ones(1));
  CHECK(ls.status == RunStatus::LineSearchFailure);
  REQUIRE(ls.trace.size() == 1);
  CHECK_FALSE(ls.trace.back().t.has_value());
}

TEST_CASE("descent audit") {
  const auto ex = make_example<double>("ex5_1");
  const SolverConfigD cfg;
  auto run = solve_newton(ex.problem, ex.cone, cfg, Vec{{0.5102, 1.0}});
  REQUIRE(descent_audit(ex.problem, ex.cone, run).passed());

  RunRecordD empty;
  CHECK(descent_audit(ex.problem, ex.cone, empty).passed());

  for (auto& r : run.trace) {
    if (r.t) *r.t *= 2;
  }
  const auto audit = descent_audit(ex.problem, ex.cone, run);
  CHECK_FALSE(audit.passed());
  CHECK(audit.failures() >= 1);
}

TEST_CASE("convergence ratios") {
  RunRecordD run;
  for (int k = 0; k < 4; ++k) {
    IterateRecord<double> r;
    r.x = Vec::Constant(1, 3.0);
    run.trace.push_back(r);
  }
  auto c = convergence_order(run);
  for (double v : c.linear) CHECK(v == 0);

  run.trace[0].x(0) = 1;
  run.trace[1].x(0) = 0.5;
  run.trace[2].x(0) = 0;
  run.trace[3].x(0) = 0;
  c = convergence_order(run, Vec::Zero(1));
  REQUIRE(c.linear.size() == 2);
  CHECK(c.linear[0] == doctest::Approx(0.5));
  CHECK(c.linear[1] == 0);
  CHECK(c.quadratic[0] == doctest::Approx(0.5));

  run.trace.resize(2);
  CHECK(convergence_order(run).linear.empty());
}

TEST_CASE("runs are reproducible") {
  const auto ex = make_example<double>("ex5_3");
  const Vec x0{{2.5, -1.75}};
  const auto a = solve_sd(ex.problem, ex.cone, SolverConfigD{}, x0);
  const auto b = solve_sd(ex.problem, ex.cone, SolverConfigD{}, x0);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t k = 0; k < a.trace.size(); ++k) {
    CHECK(a.trace[k].x == b.trace[k].x);
    CHECK(a.trace[k].u == b.trace[k].u);
  }
}
