// Copyright 2026 The cfx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cfx/bench/report.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <fmt/core.h>
#include "json.hpp"

namespace cfx::bench {
namespace {

using nlohmann::json;

std::string fixed6(double v) {
  if (std::isnan(v)) return "nan";
  return fmt::format("{:.6f}", v);
}

double parse_real(const std::string& s, std::size_t line) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw ParseError(line, "bad number: " + s);
  return v;
}

std::size_t parse_count(const std::string& s, std::size_t line) {
  char* end = nullptr;
  const auto v = std::strtoull(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size()) throw ParseError(line, "bad count: " + s);
  return static_cast<std::size_t>(v);
}

json real_json(double v) { return std::isnan(v) ? json(nullptr) : json(std::round(v * 1e6) / 1e6); }

}  // namespace

void write_csv(std::ostream& out, std::span<const ReportRow> rows, CsvOptions options) {
  out << "dataset,recommender,explainer,format,level,K,scope,";
  if (options.with_position) out << "position,";
  out << "metric,mean,std,n,failures";
  if (options.with_timing) out << ",mean_wall_time_s";
  out << '\n';
  for (const auto& r : rows) {
    if (!options.with_timing && r.metric == metrics::kWallTime) continue;
    out << r.dataset << ',' << r.recommender << ',' << r.explainer << ',' << r.format << ','
        << r.level << ',' << r.k << ',' << r.scope << ',';
    if (options.with_position) out << r.position << ',';
    out << r.metric << ',' << fixed6(r.mean) << ',' << fixed6(r.std) << ',' << r.n << ','
        << r.failures;
    if (options.with_timing) out << ',' << fixed6(r.mean_wall_time_s);
    out << '\n';
  }
}

std::vector<ReportRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) return {};
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) header.push_back(f);
  }
  const bool with_position = header.size() > 7 && header[7] == "position";
  const bool with_timing = !header.empty() && header.back() == "mean_wall_time_s";
  const std::size_t expected = 12 + (with_position ? 1 : 0) + (with_timing ? 1 : 0);
  std::vector<ReportRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != expected) throw ParseError(lineno, "wrong number of CSV fields");
    ReportRow r;
    std::size_t i = 0;
    r.dataset = f[i++];
    r.recommender = f[i++];
    r.explainer = f[i++];
    r.format = f[i++];
    r.level = f[i++];
    r.k = parse_count(f[i++], lineno);
    r.scope = f[i++];
    if (with_position) r.position = parse_count(f[i++], lineno);
    r.metric = f[i++];
    r.mean = parse_real(f[i++], lineno);
    r.std = parse_real(f[i++], lineno);
    r.n = parse_count(f[i++], lineno);
    r.failures = parse_count(f[i++], lineno);
    if (with_timing) r.mean_wall_time_s = parse_real(f[i++], lineno);
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_json(std::ostream& out, std::span<const ReportRow> rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    json j = {{"dataset", r.dataset},   {"recommender", r.recommender},
              {"explainer", r.explainer}, {"format", r.format},
              {"level", r.level},       {"K", r.k},
              {"scope", r.scope},       {"metric", r.metric},
              {"mean", real_json(r.mean)}, {"std", real_json(r.std)},
              {"n", r.n},               {"failures", r.failures},
              {"mean_wall_time_s", real_json(r.mean_wall_time_s)}};
    if (r.position != 0) j["position"] = r.position;
    arr.push_back(std::move(j));
  }
  out << json{{"rows", arr}}.dump(2) << '\n';
}

std::vector<ReportRow> read_json(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("invalid report JSON: ") + e.what());
  }
  const auto real = [](const json& v) {
    return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
  };
  std::vector<ReportRow> rows;
  try {
    for (const auto& j : doc.at("rows")) {
      ReportRow r;
      r.dataset = j.at("dataset").get<std::string>();
      r.recommender = j.at("recommender").get<std::string>();
      r.explainer = j.at("explainer").get<std::string>();
      r.format = j.at("format").get<std::string>();
      r.level = j.at("level").get<std::string>();
      r.k = j.at("K").get<std::size_t>();
      r.scope = j.at("scope").get<std::string>();
      r.metric = j.at("metric").get<std::string>();
      r.mean = real(j.at("mean"));
      r.std = real(j.at("std"));
      r.n = j.at("n").get<std::size_t>();
      r.failures = j.at("failures").get<std::size_t>();
      r.mean_wall_time_s = real(j.at("mean_wall_time_s"));
      r.position = j.value("position", std::size_t{0});
      rows.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("malformed report row: ") + e.what());
  }
  return rows;
}

void write_instances(std::ostream& out, std::span<const InstanceRecord> instances) {
  for (const auto& r : instances) {
    json j = {{"user", r.user},
              {"method", r.explainer},
              {"format", std::string(explain::format_name(r.format))},
              {"level", std::string(explain::level_name(r.level))},
              {"K", r.k},
              {"scope", r.scope},
              {"success", r.success},
              {"queries_used", r.queries_used},
              {"wall_time_ms", r.wall_time_s * 1e3}};
    if (r.target_item) j["target_item"] = *r.target_item;
    if (r.position != 0) j["position"] = r.position;
    if (r.format == explain::Format::kImplicit && r.error.empty()) {
      json m = json::array();
      for (const auto& [item, score] : r.mask) m.push_back({item, score});
      j["mask"] = std::move(m);
    }
    if (r.format == explain::Format::kExplicit && r.error.empty()) j["removed"] = r.removed;
    if (!r.error.empty()) j["error"] = r.error;
    json metrics_json = json::object();
    for (const auto& [name, value] : r.metrics) metrics_json[name] = value;
    j["metrics"] = std::move(metrics_json);
    out << j.dump() << '\n';
  }
}

ReportFormat parse_report_format(std::string_view s) {
  if (s == "csv") return ReportFormat::kCsv;
  if (s == "json") return ReportFormat::kJson;
  throw ConfigError("report format must be csv or json");
}

void emit_report(std::span<const ReportRow> rows, const std::filesystem::path& path,
                 ReportFormat format) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  if (format == ReportFormat::kCsv) {
    write_csv(out, rows);
  } else {
    write_json(out, rows);
  }
}

std::string format_table(std::span<const ReportRow> rows) {
  std::string out = fmt::format("{:<10} {:<9} {:<5} {:>2} {:<9} {:<12} {:>10} {:>10} {:>5} {:>4} {:>11}\n",
                                "explainer", "format", "level", "K", "scope", "metric", "mean",
                                "std", "n", "fail", "wall_s");
  for (const auto& r : rows) {
    out += fmt::format("{:<10} {:<9} {:<5} {:>2} {:<9} {:<12} {:>10} {:>10} {:>5} {:>4} {:>11}\n",
                       r.explainer, r.format, r.level, r.k, r.scope, r.metric, fixed6(r.mean),
                       fixed6(r.std), r.n, r.failures, fixed6(r.mean_wall_time_s));
  }
  return out;
}

}  // namespace cfx::bench
