// setopt: solve, benchmark and check the built-in set optimization instances.
//
//   setopt list
//   setopt solve --problem ex5_5 --algo nm-full --x0 -5 -5 --format csv
//   setopt bench --problem ex5_1 --algo sd --starts 100 --seed 7 --out sd.json
//   setopt check --points 20

#include "setopt/bench.hpp"
#include "setopt/report.hpp"
#include "setopt/setopt.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <random>

namespace {

using namespace setopt;

struct Common {
  std::string problem = "ex5_1";
  std::string algo = "nm";
  std::string cone_path;
  std::string out = "-";
  std::string format = "json";
  std::optional<Index> p;
  std::optional<double> grid;
  SolverConfigD cfg;
};

Algorithm parse_algo(const std::string& s) {
  static const std::map<std::string, Algorithm> table{
      {"nm", Algorithm::Newton},
      {"nm-full", Algorithm::NewtonFullStep},
      {"sd", Algorithm::SteepestDescent}};
  auto it = table.find(s);
  if (it == table.end()) throw InvalidInput("unknown --algo '" + s + "'");
  return it->second;
}

Example<double> load(const Common& c) {
  Example<double> ex = make_example<double>(c.problem, {c.p, c.grid});
  if (!c.cone_path.empty()) {
    ConeD cone = load_cone(c.cone_path);
    detail::require(cone.dim() == ex.problem.m,
                    "cone file dimension does not match the problem");
    ex.cone = std::move(cone);
  }
  return ex;
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("--problem", c.problem, "registry name (see `list`)");
  app->add_option("--algo", c.algo, "nm | nm-full | sd")
      ->check(CLI::IsMember({"nm", "nm-full", "sd"}));
  app->add_option("--beta", c.cfg.beta, "Armijo fraction in (0,1)");
  app->add_option("--nu", c.cfg.nu, "backtracking ratio in (0,1)");
  app->add_option("--eps", c.cfg.eps, "stop when |u| < eps");
  app->add_option("--max-iter", c.cfg.max_iter, "cap on recorded iterations");
  app->add_option("--cone", c.cone_path, "JSON cone {m, rows, e}");
  app->add_option("--p", c.p, "override the family size");
  app->add_option("--grid", c.grid, "override the ex5_5 grid parameter");
  app->add_option("--out", c.out, "output path, - for stdout");
  app->add_option("--format", c.format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
}

int run_solve(const Common& c, const std::vector<double>& x0_raw,
              std::uint64_t seed) {
  const auto ex = load(c);
  Vector<double> x0;
  if (x0_raw.empty()) {
    x0 = sample_start(ex.problem.sample_box, seed, 0);
  } else {
    detail::require(Index(x0_raw.size()) == ex.problem.n,
                    "--x0 needs " + std::to_string(ex.problem.n) + " values");
    x0 = Eigen::Map<const Vector<double>>(x0_raw.data(), ex.problem.n);
  }
  const auto run = solve(ex.problem, ex.cone, parse_algo(c.algo), c.cfg, x0);
  emit(run, parse_format(c.format), c.out);
  std::fprintf(stderr, "%s %s: %s after %td iterations (%td updates)\n",
               run.problem.c_str(), std::string(to_string(run.algorithm)).c_str(),
               std::string(to_string(run.status)).c_str(), run.iterations(),
               run.updates());
  return 0;
}

void print_summary(const char* label, const std::optional<Summary>& s) {
  if (!s) {
    std::fprintf(stderr, "  %-10s (no converged runs)\n", label);
    return;
  }
  std::fprintf(stderr, "  %-10s min %g  max %g  mean %.4f  median %g  mode %g  sd %.4f\n",
               label, s->min, s->max, s->mean, s->median, s->mode, s->sd);
}

int run_bench(const Common& c, const BenchOptions& opt) {
  const auto ex = load(c);
  const auto res = bench(ex, parse_algo(c.algo), c.cfg, opt);
  emit(res, parse_format(c.format), c.out);
  const auto& st = res.stats;
  std::fprintf(stderr, "%s %s: %td/%td converged\n", res.problem.c_str(),
               std::string(to_string(st.algorithm)).c_str(), st.successes,
               st.n_starts);
  print_summary("iterations", st.iterations);
  print_summary("time [s]", st.time_seconds);
  for (const auto& [status, count] : st.failures) {
    std::fprintf(stderr, "  %s: %td\n", status.c_str(), count);
  }
  return 0;
}

int run_check(Index points, std::uint64_t seed, double tol) {
  bool ok = true;
  std::printf("%-6s %12s %12s %12s %8s\n", "name", "jac_err", "hess_err",
              "asym", "result");
  for (const auto& entry : kRegistry) {
    const auto ex = make_example<double>(entry.name);
    double jac = 0, hess = 0, asym = 0;
    bool finite = true;
    for (Index k = 0; k < points; ++k) {
      const auto x = sample_start(ex.problem.sample_box, seed, std::uint64_t(k));
      const auto rep = fd_check(ex.problem, x);
      jac = std::max(jac, rep.max_rel_err_jac);
      hess = std::max(hess, rep.max_rel_err_hess);
      asym = std::max(asym, hessian_asymmetry(ex.problem, x));
      finite = finite && rep.finite;
    }
    const bool pass = finite && jac <= tol && hess <= tol && asym <= 1e-12;
    ok = ok && pass;
    std::printf("%-6s %12.3e %12.3e %12.3e %8s\n",
                std::string(entry.name).c_str(), jac, hess, asym,
                pass ? "ok" : "FAIL");
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Newton and steepest descent for set optimization"};
  app.require_subcommand(1);

  Common common;
  std::vector<double> x0;
  std::uint64_t seed = 1;
  BenchOptions bopt;
  Index points = 20;
  double tol = 1e-5;

  auto* list = app.add_subcommand("list", "show built-in instances");

  auto* solve_cmd = app.add_subcommand("solve", "one run with its full trace");
  add_common(solve_cmd, common);
  solve_cmd->add_option("--x0", x0, "starting point (default: random start 0)");
  solve_cmd->add_option("--seed", seed, "seed for the default start");

  auto* bench_cmd = app.add_subcommand("bench", "statistics over random starts");
  add_common(bench_cmd, common);
  bench_cmd->add_option("--starts", bopt.n_starts, "number of starts")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", bopt.seed, "start generator seed");
  bench_cmd->add_option("--threads", bopt.threads, "worker threads")
      ->check(CLI::PositiveNumber);

  auto* check_cmd = app.add_subcommand("check", "derivative checks on every instance");
  check_cmd->add_option("--points", points, "random points per instance")
      ->check(CLI::PositiveNumber);
  check_cmd->add_option("--seed", seed, "sampling seed");
  check_cmd->add_option("--tol", tol, "max relative error");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*list) {
      for (const auto& e : kRegistry) {
        std::printf("%-6s %s\n", std::string(e.name).c_str(),
                    std::string(e.summary).c_str());
      }
      return 0;
    }
    if (*solve_cmd) return run_solve(common, x0, seed);
    if (*bench_cmd) return run_bench(common, bopt);
    if (*check_cmd) return run_check(points, seed, tol);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
