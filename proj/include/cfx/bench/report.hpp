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
#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cfx/bench/harness.hpp"

namespace cfx::bench {

inline constexpr const char* kCsvHeader =
    "dataset,recommender,explainer,format,level,K,scope,metric,mean,std,n,failures,"
    "mean_wall_time_s";

struct CsvOptions {
  bool with_position = false;  // adds a position column after scope
  bool with_timing = true;     // false drops mean_wall_time_s and wall_time_s rows
};

// Floats are written with 6 decimals.
void write_csv(std::ostream& out, std::span<const ReportRow> rows, CsvOptions options = {});
std::vector<ReportRow> read_csv(std::istream& in);

void write_json(std::ostream& out, std::span<const ReportRow> rows);
std::vector<ReportRow> read_json(std::istream& in);

// One JSON object per explanation call.
void write_instances(std::ostream& out, std::span<const InstanceRecord> instances);

enum class ReportFormat { kCsv, kJson };
ReportFormat parse_report_format(std::string_view s);
void emit_report(std::span<const ReportRow> rows, const std::filesystem::path& path,
                 ReportFormat format);

// Fixed-width text table for terminals.
std::string format_table(std::span<const ReportRow> rows);

}  // namespace cfx::bench
