// Copyright 2026 The pivotlab Authors
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

#ifndef PIVOTLAB_REPORT_HPP_
#define PIVOTLAB_REPORT_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pivotlab {

// One output row. CSV column order matches field order.
struct ReportRecord {
  std::string experiment;
  std::string space;
  std::size_t d = 0;
  std::size_t n = 0;
  std::size_t k = 0;
  std::string strategy;
  std::uint64_t seed = 0;
  std::string metric;
  std::string quantity;
  double value = 0.0;

  friend bool operator==(const ReportRecord&, const ReportRecord&) = default;
};

enum class ReportFormat { kCsv, kJson };

ReportFormat parse_report_format(std::string_view name);

// Stable sort by (experiment, d, n, quantity).
void sort_records(std::vector<ReportRecord>& records);

// Sorts, then writes CSV (header
// "experiment,space,d,n,k,strategy,seed,metric,quantity,value") or JSON
// ({"format_version":1,"records":[...]}). Floats use 17 significant digits.
// The file appears atomically; on failure no partial file is left behind and
// IoError names the path.
void emit_report(std::vector<ReportRecord> records, ReportFormat format,
                 const std::string& path);

std::vector<ReportRecord> load_report_json(const std::string& path);
std::vector<ReportRecord> load_report_csv(const std::string& path);

}  // namespace pivotlab

#endif  // PIVOTLAB_REPORT_HPP_
