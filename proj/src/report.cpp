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

#include "pivotlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "pivotlab/error.hpp"
#include "text.hpp"

namespace pivotlab {

namespace {

constexpr const char* kCsvHeader =
    "experiment,space,d,n,k,strategy,seed,metric,quantity,value";

std::string format_value(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return detail::format_double(v);
}

double parse_value(std::string_view s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  return detail::parse_double(s);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back().push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back().push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back().push_back(c);
    }
  }
  return fields;
}

void write_csv(std::ostream& out, const std::vector<ReportRecord>& records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << csv_field(r.experiment) << ',' << csv_field(r.space) << ',' << r.d
        << ',' << r.n << ',' << r.k << ',' << csv_field(r.strategy) << ','
        << r.seed << ',' << csv_field(r.metric) << ',' << csv_field(r.quantity)
        << ',' << format_value(r.value) << '\n';
  }
}

void write_json(std::ostream& out, const std::vector<ReportRecord>& records) {
  using nlohmann::json;
  out << "{\"format_version\":1,\"records\":[";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    out << (i ? ",\n" : "\n") << "{\"experiment\":" << json(r.experiment).dump()
        << ",\"space\":" << json(r.space).dump() << ",\"d\":" << r.d
        << ",\"n\":" << r.n << ",\"k\":" << r.k
        << ",\"strategy\":" << json(r.strategy).dump() << ",\"seed\":" << r.seed
        << ",\"metric\":" << json(r.metric).dump()
        << ",\"quantity\":" << json(r.quantity).dump() << ",\"value\":";
    if (std::isfinite(r.value)) {
      out << format_value(r.value);
    } else {
      out << '"' << format_value(r.value) << '"';
    }
    out << '}';
  }
  out << (records.empty() ? "]}\n" : "\n]}\n");
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  throw InvalidInput("unknown report format '" + std::string(name) + "'");
}

void sort_records(std::vector<ReportRecord>& records) {
  std::stable_sort(records.begin(), records.end(),
                   [](const ReportRecord& a, const ReportRecord& b) {
                     return std::tie(a.experiment, a.d, a.n, a.quantity) <
                            std::tie(b.experiment, b.d, b.n, b.quantity);
                   });
}

void emit_report(std::vector<ReportRecord> records, ReportFormat format,
                 const std::string& path) {
  namespace fs = std::filesystem;
  sort_records(records);
  const fs::path target(path);
  const fs::path staging = target.string() + ".partial";
  try {
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    {
      std::ofstream out(staging, std::ios::binary | std::ios::trunc);
      if (!out) throw IoError("cannot open for writing");
      if (format == ReportFormat::kCsv) {
        write_csv(out, records);
      } else {
        write_json(out, records);
      }
      out.flush();
      if (!out) throw IoError("write failed");
    }
    fs::rename(staging, target);
  } catch (const std::exception& e) {
    std::error_code ignored;
    fs::remove(staging, ignored);
    throw IoError("emit_report '" + path + "': " + e.what());
  }
}

std::vector<ReportRecord> load_report_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::vector<ReportRecord> out;
  try {
    const auto doc = nlohmann::json::parse(in);
    for (const auto& j : doc.at("records")) {
      ReportRecord r;
      r.experiment = j.at("experiment").get<std::string>();
      r.space = j.at("space").get<std::string>();
      r.d = j.at("d").get<std::size_t>();
      r.n = j.at("n").get<std::size_t>();
      r.k = j.at("k").get<std::size_t>();
      r.strategy = j.at("strategy").get<std::string>();
      r.seed = j.at("seed").get<std::uint64_t>();
      r.metric = j.at("metric").get<std::string>();
      r.quantity = j.at("quantity").get<std::string>();
      const auto& v = j.at("value");
      r.value = v.is_string() ? parse_value(v.get<std::string>())
                              : v.get<double>();
      out.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("report '" + path + "': " + e.what());
  }
  return out;
}

std::vector<ReportRecord> load_report_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw InvalidInput("report '" + path + "': unexpected CSV header");
  }
  std::vector<ReportRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 10) {
      throw InvalidInput("report '" + path + "': row with " +
                         std::to_string(f.size()) + " fields");
    }
    ReportRecord r;
    r.experiment = f[0];
    r.space = f[1];
    r.d = std::stoull(f[2]);
    r.n = std::stoull(f[3]);
    r.k = std::stoull(f[4]);
    r.strategy = f[5];
    r.seed = std::stoull(f[6]);
    r.metric = f[7];
    r.quantity = f[8];
    r.value = parse_value(f[9]);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace pivotlab
