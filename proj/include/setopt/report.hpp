#pragma once

#include "setopt/bench.hpp"
#include "setopt/cone.hpp"
#include "setopt/solver.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace setopt {

using Json = nlohmann::json;

enum class Format { Csv, Json };

Format parse_format(std::string_view s);

Json to_json(const SolverConfigD& cfg);
SolverConfigD config_from_json(const Json& j);

/// Config plus one object per IterateRecord; t is null on the terminal record.
Json to_json(const RunRecordD& run);
RunRecordD run_from_json(const Json& j);

Json to_json(const BenchStats& st);
/// Stats plus one row per start.
Json to_json(const BenchResult& res);

/// {"m": int, "rows": [[...]], "e": [...]}
Json to_json(const ConeD& cone);
ConeD cone_from_json(const Json& j);
ConeD load_cone(const std::string& path);

/// k, x_1.., u_norm, phi, t, varsigma, elapsed. An empty t cell means no step.
std::string trace_csv(const RunRecordD& run, bool with_time = true);

/// start_index, x0_1.., status, iterations, time_s
std::string bench_csv(const BenchResult& res, bool with_time = true);

/// Writes to `path`, or stdout when path is "-". Throws Error naming the
/// path on I/O failure.
void write_text(const std::string& path, const std::string& text);
void emit(const RunRecordD& run, Format format, const std::string& path);
void emit(const BenchResult& res, Format format, const std::string& path);

}  // namespace setopt
