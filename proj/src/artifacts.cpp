// Copyright 2026 The driftlens Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "driftlens/artifacts.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "driftlens/csv.hpp"
#include "driftlens/error.hpp"
#include "driftlens/text.hpp"

namespace driftlens {

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

csv::Row match_columns(const EvolutionRecord& r) {
  return {r.new_file.path, r.old_file ? r.old_file->path : std::string(),
          std::string(to_string(r.match_kind)), r.similarity ? fixed(*r.similarity, 6) : "",
          std::string(to_string(r.subset))};
}

std::size_t column(const csv::Row& header, std::string_view name, std::string_view what) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw DataError(std::string(what) + ": missing column '" + std::string(name) + "'");
}

Label parse_label_cell(const std::string& s, std::size_t line) {
  if (s == "1") return Label::defective;
  if (s == "0") return Label::benign;
  throw DataError("records.csv line " + std::to_string(line) + ": bad label '" + s + "'");
}

double parse_double(const std::string& s, std::string_view what, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw DataError(std::string(what) + " line " + std::to_string(line) + ": bad number '" + s +
                    "'");
  }
  return v;
}

}  // namespace

std::string format_matches_csv(const std::vector<EvolutionRecord>& records) {
  std::string out = csv::format_row({"new_path", "old_path", "match_kind", "similarity", "subset"});
  for (const auto& r : records) out += csv::format_row(match_columns(r));
  return out;
}

std::string format_records_csv(const std::vector<EvolutionRecord>& records) {
  std::string out = csv::format_row(
      {"new_path", "old_path", "match_kind", "similarity", "subset", "old_label", "new_label"});
  for (const auto& r : records) {
    auto row = match_columns(r);
    row.push_back(r.old_file ? std::to_string(to_int(r.old_file->label)) : std::string());
    row.push_back(std::to_string(to_int(r.new_file.label)));
    out += csv::format_row(row);
  }
  return out;
}

std::vector<EvolutionRecord> parse_records_csv(const std::string& csv_text) {
  csv::Reader reader(csv_text);
  csv::Row header;
  if (!reader.next(header)) throw DataError("records.csv is empty");
  const auto c_new = column(header, "new_path", "records.csv");
  const auto c_old = column(header, "old_path", "records.csv");
  const auto c_kind = column(header, "match_kind", "records.csv");
  const auto c_sim = column(header, "similarity", "records.csv");
  const auto c_sub = column(header, "subset", "records.csv");
  const auto c_ol = column(header, "old_label", "records.csv");
  const auto c_nl = column(header, "new_label", "records.csv");
  const std::size_t need = std::max({c_new, c_old, c_kind, c_sim, c_sub, c_ol, c_nl}) + 1;

  std::vector<EvolutionRecord> out;
  csv::Row row;
  while (reader.next(row)) {
    if (row.size() == 1 && row[0].empty()) continue;
    const auto line = reader.record_line();
    if (row.size() < need) {
      throw DataError("records.csv line " + std::to_string(line) + ": too few fields");
    }
    EvolutionRecord r;
    r.new_file.path = row[c_new];
    r.new_file.label = parse_label_cell(row[c_nl], line);
    auto kind = parse_match_kind(row[c_kind]);
    auto sub = parse_subset(row[c_sub]);
    if (!kind || !sub) {
      throw DataError("records.csv line " + std::to_string(line) + ": bad kind or subset");
    }
    r.match_kind = *kind;
    r.subset = *sub;
    if (!row[c_sim].empty()) r.similarity = parse_double(row[c_sim], "records.csv", line);
    if (!row[c_old].empty()) {
      VersionedFile old;
      old.path = row[c_old];
      old.label = parse_label_cell(row[c_ol], line);
      r.old_file = std::move(old);
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_predictions_csv(const std::vector<PredictionRow>& rows) {
  std::string out = csv::format_row({"record_id", "prediction", "confidence", "parse_path"});
  for (const auto& r : rows) {
    const auto& p = r.prediction;
    out += csv::format_row({r.record_id, p.label ? std::string(label_name(*p.label)) : "",
                            p.confidence ? fixed(*p.confidence, 4) : "",
                            std::string(to_string(p.parse_path))});
  }
  return out;
}

std::vector<PredictionRow> parse_predictions_csv(const std::string& csv_text) {
  csv::Reader reader(csv_text);
  csv::Row header;
  if (!reader.next(header)) throw DataError("predictions.csv is empty");
  const auto c_id = column(header, "record_id", "predictions.csv");
  const auto c_pred = column(header, "prediction", "predictions.csv");
  const auto c_conf = column(header, "confidence", "predictions.csv");
  const auto c_path = column(header, "parse_path", "predictions.csv");
  const std::size_t need = std::max({c_id, c_pred, c_conf, c_path}) + 1;

  std::vector<PredictionRow> out;
  csv::Row row;
  while (reader.next(row)) {
    if (row.size() == 1 && row[0].empty()) continue;
    const auto line = reader.record_line();
    if (row.size() < need) {
      throw DataError("predictions.csv line " + std::to_string(line) + ": too few fields");
    }
    PredictionRow pr;
    pr.record_id = row[c_id];
    auto path = parse_parse_path(row[c_path]);
    if (!path) {
      throw DataError("predictions.csv line " + std::to_string(line) + ": bad parse_path");
    }
    pr.prediction.parse_path = *path;
    const auto label = text::to_lower(row[c_pred]);
    if (label == "defective" || label == "1") {
      pr.prediction.label = Label::defective;
    } else if (label == "benign" || label == "0") {
      pr.prediction.label = Label::benign;
    } else if (!label.empty()) {
      throw DataError("predictions.csv line " + std::to_string(line) + ": bad prediction '" +
                      row[c_pred] + "'");
    }
    if (pr.prediction.label.has_value() == (*path == ParsePath::failed)) {
      throw DataError("predictions.csv line " + std::to_string(line) +
                      ": prediction and parse_path disagree");
    }
    if (!row[c_conf].empty()) {
      pr.prediction.confidence = parse_double(row[c_conf], "predictions.csv", line);
    }
    out.push_back(std::move(pr));
  }
  return out;
}

std::map<std::string, Label> prediction_map(const std::vector<PredictionRow>& rows) {
  std::map<std::string, Label> out;
  for (const auto& r : rows) {
    if (r.prediction.ok() && r.prediction.label) out[r.record_id] = *r.prediction.label;
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path);
  out << content;
  if (!out) throw ConfigError("write failed for " + path);
}

}  // namespace driftlens
