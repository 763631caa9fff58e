#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

#include "setopt/bench.hpp"
#include "setopt/report.hpp"
#include "setopt/stats.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace setopt;
using testing::Vec;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("summarize") {
  auto s = summarize(std::vector<double>{1, 2, 2, 3}, true);
  CHECK(s.min == 1);
  CHECK(s.max == 3);
  CHECK(s.mean == 2);
  CHECK(s.median == 2);
  CHECK(s.mode == 2);
  CHECK(s.sd == doctest::Approx(std::sqrt(0.5)));

  s = summarize(std::vector<double>{5}, true);
  CHECK(s.min == 5);
  CHECK(s.max == 5);
  CHECK(s.median == 5);
  CHECK(s.mode == 5);
  CHECK(s.sd == 0);

  s = summarize(std::vector<double>{2, 2, 2}, false);
  CHECK(s.mean == 2);
  CHECK(s.sd == 0);

  // Even count: midpoint median. Tie in the mode goes to the smaller value.
  s = summarize(std::vector<double>{4, 1, 4, 1}, true);
  CHECK(s.median == 2.5);
  CHECK(s.mode == 1);

  // Integer mode rounds first.
  s = summarize(std::vector<double>{0.9, 1.2, 3.0}, true);
  CHECK(s.mode == 1);
  s = summarize(std::vector<double>{0.9, 1.2, 3.0}, false);
  CHECK(s.mode == 0.9);

  CHECK_THROWS_AS(summarize(std::vector<double>{}, true), InvalidInput);
}

TEST_CASE("summarize against a naive reference") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(1 + rng() % 30);
    for (auto& x : v) x = double(int(rng() % 9));
    const auto s = summarize(v, true);

    auto sorted = v;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = v.size();
    const double median = n % 2 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2;
    double best = 0;
    std::size_t best_count = 0;
    for (int val = 0; val < 9; ++val) {
      const auto c = std::size_t(std::count(v.begin(), v.end(), double(val)));
      if (c > best_count) {
        best_count = c;
        best = val;
      }
    }
    double mean = 0;
    for (double x : v) mean += x;
    mean /= double(n);
    double var = 0;
    for (double x : v) var += (x - mean) * (x - mean);

    CHECK(s.min == sorted.front());
    CHECK(s.max == sorted.back());
    CHECK(s.median == median);
    CHECK(s.mode == best);
    CHECK(s.mean == doctest::Approx(mean));
    CHECK(s.sd == doctest::Approx(std::sqrt(var / double(n))));
    CHECK(s.min <= s.median);
    CHECK(s.median <= s.max);
  }
}

TEST_CASE("start sampling") {
  const Box<double> box{Vec{{-4.0, 0.77}}, Vec{{4.0, 6.3}}};
  for (std::uint64_t i = 0; i < 200; ++i) {
    const Vec x = sample_start(box, 9, i);
    CHECK(box.contains(x));
    CHECK(x == sample_start(box, 9, i));
  }
  CHECK(sample_start(box, 9, 0) != sample_start(box, 9, 1));
  CHECK(sample_start(box, 9, 0) != sample_start(box, 10, 0));
}

TEST_CASE("bench statistics") {
  const auto ex = make_example<double>("ex5_1");
  SolverConfigD cfg;
  BenchOptions opt;
  opt.n_starts = 1;
  auto one = bench(ex, Algorithm::SteepestDescent, cfg, opt);
  REQUIRE(one.stats.iterations.has_value());
  const auto& it = *one.stats.iterations;
  CHECK(it.min == it.max);
  CHECK(it.mean == it.min);
  CHECK(it.median == it.min);
  CHECK(it.mode == it.min);
  CHECK(it.sd == 0);

  opt.n_starts = 100;
  const auto full = bench(ex, Algorithm::NewtonFullStep, cfg, opt);
  CHECK(full.stats.n_starts == 100);
  CHECK(full.stats.successes == 100);
  const auto& s = *full.stats.iterations;
  CHECK(s.min == 2);
  CHECK(s.max == 2);
  CHECK(s.sd == 0);

  const auto sd = bench(ex, Algorithm::SteepestDescent, cfg, opt);
  CHECK(sd.stats.iterations->mean == doctest::Approx(11.48).epsilon(0.3));
  CHECK(sd.stats.time_seconds->mode == std::ceil(sd.stats.time_seconds->mode));

  opt.n_starts = 0;
  CHECK_THROWS_AS(bench(ex, Algorithm::Newton, cfg, opt), InvalidInput);
}

TEST_CASE("failures are tallied separately") {
  const auto ex = make_example<double>("ex5_6");
  BenchOptions opt;
  opt.n_starts = 10;
  const auto res = bench(ex, Algorithm::Newton, SolverConfigD{}, opt);
  Index failed = 0;
  for (const auto& [status, count] : res.stats.failures) failed += count;
  CHECK(res.stats.successes + failed == 10);
}

TEST_CASE("run record json round trip") {
  const auto ex = make_example<double>("ex5_1");
  const auto run = solve_sd(ex.problem, ex.cone, SolverConfigD{}, Vec{{0.5102, 1.0}});
  const auto text = to_json(run).dump();
  const auto back = run_from_json(Json::parse(text));
  CHECK(to_json(back) == to_json(run));
  REQUIRE(back.trace.size() == run.trace.size());
  for (std::size_t k = 0; k < run.trace.size(); ++k) {
    CHECK(back.trace[k].x == run.trace[k].x);
    CHECK(back.trace[k].u == run.trace[k].u);
    CHECK(back.trace[k].t == run.trace[k].t);
    CHECK(back.trace[k].phi == run.trace[k].phi);
    CHECK(back.trace[k].tuple == run.trace[k].tuple);
  }
  CHECK(back.config.beta == run.config.beta);
  CHECK(back.status == run.status);
  CHECK_THROWS(run_from_json(Json::parse(R"({"problem":"x"})")));
}

TEST_CASE("trace csv") {
  const auto ex = make_example<double>("ex5_5");
  const auto run = solve(ex.problem, ex.cone, Algorithm::NewtonFullStep,
                         SolverConfigD{}, Vec{{-5.0, -5.0}});
  const auto rows = lines(trace_csv(run));
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == "k,x_1,x_2,u_norm,phi,t,varsigma,elapsed");
  CHECK(rows[1].rfind("0,-5,-5,", 0) == 0);
  CHECK(rows[2].rfind("1,-1,-1,", 0) == 0);
  // The terminal row has an empty step cell.
  CHECK(rows[2].find(",,") != std::string::npos);
  CHECK(lines(trace_csv(run, false))[0] == "k,x_1,x_2,u_norm,phi,t,varsigma");
}

TEST_CASE("bench csv and json") {
  const auto ex = make_example<double>("ex5_3");
  BenchOptions opt;
  opt.n_starts = 7;
  const auto res = bench(ex, Algorithm::SteepestDescent, SolverConfigD{}, opt);
  const auto rows = lines(bench_csv(res));
  REQUIRE(rows.size() == 8);
  CHECK(rows[0] == "start_index,x0_1,x0_2,status,iterations,time_s");
  CHECK(rows[3].rfind("2,", 0) == 0);
  const auto j = to_json(res);
  CHECK(j.at("rows").size() == 7);
  CHECK(j.at("stats").at("n_starts") == 7);
  CHECK(j.at("stats").at("iterations").at("min").get<double>() >= 1);
}

TEST_CASE("emit writes files and reports bad paths") {
  const auto ex = make_example<double>("ex5_5");
  const auto run = solve(ex.problem, ex.cone, Algorithm::NewtonFullStep,
                         SolverConfigD{}, Vec{{-5.0, -5.0}});
  const auto dir = std::filesystem::temp_directory_path();
  const std::string json_path = (dir / "setopt_emit_test.json").string();
  const std::string csv_path = (dir / "setopt_emit_test.csv").string();
  emit(run, Format::Json, json_path);
  emit(run, Format::Csv, csv_path);
  CHECK(to_json(run_from_json(Json::parse(slurp(json_path)))) == to_json(run));
  CHECK(slurp(csv_path) == trace_csv(run));
  std::remove(json_path.c_str());
  std::remove(csv_path.c_str());

  const std::string bad = "/nonexistent-dir/x.json";
  try {
    emit(run, Format::Json, bad);
    FAIL("expected an I/O error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find(bad) != std::string::npos);
  }
  CHECK(parse_format("csv") == Format::Csv);
  CHECK_THROWS_AS(parse_format("xml"), InvalidInput);
}

TEST_CASE("bench output does not depend on the thread count") {
  const auto ex = make_example<double>("ex5_1");
  BenchOptions opt;
  opt.n_starts = 24;
  opt.seed = 5;
  opt.threads = 1;
  const auto a = bench(ex, Algorithm::SteepestDescent, SolverConfigD{}, opt);
  opt.threads = 4;
  const auto b = bench(ex, Algorithm::SteepestDescent, SolverConfigD{}, opt);
  CHECK(bench_csv(a, false) == bench_csv(b, false));
  for (std::size_t i = 0; i < a.runs.size(); ++i) {
    CHECK(trace_csv(a.runs[i], false) == trace_csv(b.runs[i], false));
  }
}
