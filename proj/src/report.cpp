#include "setopt/report.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace setopt {
namespace {

Json vec(const Vector<double>& v) {
  return Json(std::vector<double>(v.data(), v.data() + v.size()));
}

Vector<double> vec_from(const Json& j) {
  const auto raw = j.get<std::vector<double>>();
  return Eigen::Map<const Vector<double>>(raw.data(), Index(raw.size()));
}

Json summary(const Summary& s) {
  return {{"min", s.min},       {"max", s.max},   {"mean", s.mean},
          {"median", s.median}, {"mode", s.mode}, {"sd", s.sd}};
}

Algorithm algorithm_from(std::string_view s) {
  for (auto a : {Algorithm::Newton, Algorithm::NewtonFullStep,
                 Algorithm::SteepestDescent}) {
    if (to_string(a) == s) return a;
  }
  throw InvalidInput("unknown algorithm '" + std::string(s) + "'");
}

RunStatus status_from(std::string_view s) {
  for (auto st : {RunStatus::Converged, RunStatus::MaxIterations,
                  RunStatus::LineSearchFailure, RunStatus::InnerFailure,
                  RunStatus::PartitionBlowUp}) {
    if (to_string(st) == s) return st;
  }
  throw InvalidInput("unknown status '" + std::string(s) + "'");
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0 ? 0.0 : v);
  return buf;
}

}  // namespace

Format parse_format(std::string_view s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  throw InvalidInput("unknown format '" + std::string(s) + "' (csv|json)");
}

Json to_json(const SolverConfigD& c) {
  return {{"beta", c.beta},
          {"nu", c.nu},
          {"eps", c.eps},
          {"max_iter", c.max_iter},
          {"full_step", c.full_step},
          {"q_max", c.q_max},
          {"inner", {{"gap_tol", c.inner.gap_tol}, {"max_iter", c.inner.max_iter}}},
          {"partition_cap", c.partition_cap},
          {"tie_tol", c.tie_tol}};
}

SolverConfigD config_from_json(const Json& j) {
  SolverConfigD c;
  c.beta = j.at("beta").get<double>();
  c.nu = j.at("nu").get<double>();
  c.eps = j.at("eps").get<double>();
  c.max_iter = j.at("max_iter").get<int>();
  c.full_step = j.at("full_step").get<bool>();
  c.q_max = j.at("q_max").get<int>();
  c.inner.gap_tol = j.at("inner").at("gap_tol").get<double>();
  c.inner.max_iter = j.at("inner").at("max_iter").get<int>();
  c.partition_cap = j.at("partition_cap").get<std::size_t>();
  c.tie_tol = j.at("tie_tol").get<double>();
  return c;
}

Json to_json(const RunRecordD& run) {
  Json trace = Json::array();
  for (const auto& r : run.trace) {
    trace.push_back({{"k", r.k},
                     {"x", vec(r.x)},
                     {"w", r.w},
                     {"tuple", r.tuple},
                     {"u", vec(r.u)},
                     {"u_norm", r.u_norm},
                     {"phi", r.phi},
                     {"t", r.t ? Json(*r.t) : Json(nullptr)},
                     {"varsigma", r.varsigma},
                     {"elapsed", r.elapsed}});
  }
  return {{"problem", run.problem},
          {"algorithm", std::string(to_string(run.algorithm))},
          {"config", to_json(run.config)},
          {"x0", vec(run.x0)},
          {"status", std::string(to_string(run.status))},
          {"terminal_regular", run.terminal_regular},
          {"message", run.message},
          {"trace", trace}};
}

RunRecordD run_from_json(const Json& j) {
  RunRecordD run;
  run.problem = j.at("problem").get<std::string>();
  run.algorithm = algorithm_from(j.at("algorithm").get<std::string>());
  run.config = config_from_json(j.at("config"));
  run.x0 = vec_from(j.at("x0"));
  run.status = status_from(j.at("status").get<std::string>());
  run.terminal_regular = j.at("terminal_regular").get<bool>();
  run.message = j.at("message").get<std::string>();
  for (const auto& o : j.at("trace")) {
    IterateRecord<double> r;
    r.k = o.at("k").get<Index>();
    r.x = vec_from(o.at("x"));
    r.w = o.at("w").get<Index>();
    r.tuple = o.at("tuple").get<std::vector<Index>>();
    r.u = vec_from(o.at("u"));
    r.u_norm = o.at("u_norm").get<double>();
    r.phi = o.at("phi").get<double>();
    if (!o.at("t").is_null()) r.t = o.at("t").get<double>();
    r.varsigma = o.at("varsigma").get<double>();
    r.elapsed = o.at("elapsed").get<double>();
    run.trace.push_back(std::move(r));
  }
  return run;
}

Json to_json(const BenchStats& st) {
  Json j = {{"algorithm", std::string(to_string(st.algorithm))},
            {"n_starts", st.n_starts},
            {"successes", st.successes},
            {"failures", st.failures}};
  j["iterations"] = st.iterations ? summary(*st.iterations) : Json(nullptr);
  j["time_seconds"] = st.time_seconds ? summary(*st.time_seconds) : Json(nullptr);
  return j;
}

Json to_json(const BenchResult& res) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < res.runs.size(); ++i) {
    const auto& r = res.runs[i];
    rows.push_back({{"start_index", i},
                    {"x0", vec(r.x0)},
                    {"status", std::string(to_string(r.status))},
                    {"iterations", r.iterations()},
                    {"final_x", vec(r.final_x())},
                    {"time_s", r.trace.empty() ? 0.0 : r.trace.back().elapsed}});
  }
  return {{"problem", res.problem}, {"stats", to_json(res.stats)}, {"rows", rows}};
}

Json to_json(const ConeD& cone) {
  Json rows = Json::array();
  for (Index i = 0; i < cone.num_rows(); ++i) {
    rows.push_back(vec(cone.rows().row(i).transpose()));
  }
  return {{"m", cone.dim()}, {"rows", rows}, {"e", vec(cone.e())}};
}

ConeD cone_from_json(const Json& j) {
  try {
    const Index m = j.at("m").get<Index>();
    const auto& rows = j.at("rows");
    detail::require(rows.is_array() && !rows.empty(), "cone json: rows must be a nonempty array");
    Matrix<double> A(Index(rows.size()), m);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const Vector<double> r = vec_from(rows[i]);
      detail::require(r.size() == m, "cone json: row " + std::to_string(i) + " has wrong length");
      A.row(Index(i)) = r.transpose();
    }
    Vector<double> e = vec_from(j.at("e"));
    return ConeD(std::move(A), std::move(e));
  } catch (const Json::exception& ex) {
    throw InvalidInput(std::string("cone json: ") + ex.what());
  }
}

ConeD load_cone(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open cone file '" + path + "'");
  try {
    return cone_from_json(Json::parse(in));
  } catch (const Json::parse_error& ex) {
    throw InvalidInput("cone file '" + path + "': " + ex.what());
  }
}

std::string trace_csv(const RunRecordD& run, bool with_time) {
  std::ostringstream out;
  const Index n = run.x0.size();
  out << "k";
  for (Index i = 0; i < n; ++i) out << ",x_" << i + 1;
  out << ",u_norm,phi,t,varsigma";
  if (with_time) out << ",elapsed";
  out << '\n';
  for (const auto& r : run.trace) {
    out << r.k;
    for (Index i = 0; i < n; ++i) out << ',' << num(r.x[i]);
    out << ',' << num(r.u_norm) << ',' << num(r.phi) << ',';
    if (r.t) out << num(*r.t);
    out << ',' << num(r.varsigma);
    if (with_time) out << ',' << num(r.elapsed);
    out << '\n';
  }
  return out.str();
}

std::string bench_csv(const BenchResult& res, bool with_time) {
  std::ostringstream out;
  const Index n = res.runs.empty() ? 0 : res.runs.front().x0.size();
  out << "start_index";
  for (Index i = 0; i < n; ++i) out << ",x0_" << i + 1;
  out << ",status,iterations";
  if (with_time) out << ",time_s";
  out << '\n';
  for (std::size_t s = 0; s < res.runs.size(); ++s) {
    const auto& r = res.runs[s];
    out << s;
    for (Index i = 0; i < n; ++i) out << ',' << num(r.x0[i]);
    out << ',' << to_string(r.status) << ',' << r.iterations();
    if (with_time) out << ',' << num(r.trace.empty() ? 0.0 : r.trace.back().elapsed);
    out << '\n';
  }
  return out.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    if (!std::cout) throw Error("write to stdout failed");
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out) throw Error("write to '" + path + "' failed");
}

void emit(const RunRecordD& run, Format format, const std::string& path) {
  write_text(path, format == Format::Csv ? trace_csv(run) : to_json(run).dump(2) + "\n");
}

void emit(const BenchResult& res, Format format, const std::string& path) {
  write_text(path, format == Format::Csv ? bench_csv(res) : to_json(res).dump(2) + "\n");
}

}  // namespace setopt
