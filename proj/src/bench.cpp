#include "setopt/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

namespace setopt {

Vector<double> sample_start(const Box<double>& box, std::uint64_t seed,
                            std::uint64_t index) {
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32),
                    std::uint32_t(index), std::uint32_t(index >> 32)};
  std::mt19937_64 gen(seq);
  Vector<double> x(box.lower.size());
  for (Index k = 0; k < x.size(); ++k) {
    const double u = double(gen() >> 11) * 0x1.0p-53;
    x[k] = box.lower[k] + u * (box.upper[k] - box.lower[k]);
  }
  return x;
}

BenchStats aggregate(Algorithm algo, const std::vector<RunRecordD>& runs) {
  BenchStats st;
  st.algorithm = algo;
  st.n_starts = static_cast<Index>(runs.size());
  std::vector<double> iters, times;
  for (const auto& r : runs) {
    if (r.status == RunStatus::Converged) {
      iters.push_back(double(r.iterations()));
      times.push_back(r.trace.empty() ? 0.0 : r.trace.back().elapsed);
    } else {
      ++st.failures[std::string(to_string(r.status))];
    }
  }
  st.successes = static_cast<Index>(iters.size());
  if (!iters.empty()) {
    st.iterations = summarize(iters, true);
    Summary t = summarize(times, true);
    t.mode = std::ceil(t.mode);
    st.time_seconds = t;
  }
  return st;
}

BenchResult bench(const Example<double>& ex, Algorithm algo,
                  const SolverConfigD& cfg, const BenchOptions& opt) {
  detail::require(opt.n_starts >= 1, "bench: n_starts must be >= 1");
  cfg.validate();
  BenchResult out;
  out.problem = ex.problem.name;
  out.runs.resize(static_cast<std::size_t>(opt.n_starts));

  std::atomic<Index> next{0};
  auto worker = [&] {
    for (Index i = next++; i < opt.n_starts; i = next++) {
      const Vector<double> x0 =
          sample_start(ex.problem.sample_box, opt.seed, std::uint64_t(i));
      out.runs[std::size_t(i)] = solve(ex.problem, ex.cone, algo, cfg, x0);
    }
  };
  const unsigned threads =
      std::clamp<unsigned>(opt.threads, 1, unsigned(opt.n_starts));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  out.stats = aggregate(algo, out.runs);
  return out;
}

}  // namespace setopt
