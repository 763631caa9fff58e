#pragma once

#include "setopt/examples.hpp"
#include "setopt/solver.hpp"
#include "setopt/stats.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace setopt {

/// Starting point number `index` for a given seed, uniform in the box.
/// Depends only on (seed, index), so starts can be drawn in any order.
Vector<double> sample_start(const Box<double>& box, std::uint64_t seed,
                            std::uint64_t index);

struct BenchStats {
  Algorithm algorithm = Algorithm::Newton;
  Index n_starts = 0;
  Index successes = 0;
  std::optional<Summary> iterations;    // over converged runs
  std::optional<Summary> time_seconds;  // mode is the ceiling of the mode
  std::map<std::string, Index> failures;  // by status name
};

struct BenchResult {
  std::string problem;
  BenchStats stats;
  std::vector<RunRecordD> runs;  // one per start, in start order
};

struct BenchOptions {
  Index n_starts = 100;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

/// Runs one algorithm from n_starts random points. Runs are independent and
/// stored by start index, so the result does not depend on `threads`.
BenchResult bench(const Example<double>& ex, Algorithm algo,
                  const SolverConfigD& cfg, const BenchOptions& opt);

BenchStats aggregate(Algorithm algo, const std::vector<RunRecordD>& runs);

}  // namespace setopt
