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

#include "driftlens/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <random>
#include <sstream>
#include <thread>

#include "driftlens/context.hpp"
#include "driftlens/diffing.hpp"
#include "driftlens/error.hpp"
#include "driftlens/text.hpp"

namespace driftlens {

namespace fs = std::filesystem;

void RunConfig::validate() const {
  const int selectors = (baseline ? 1 : 0) + (method ? 1 : 0) + (debate ? 1 : 0);
  if (selectors != 1) {
    throw ConfigError("exactly one of baseline, method or debate must be selected (got " +
                      std::to_string(selectors) + ")");
  }
  if (old_csv.empty() || new_csv.empty()) throw ConfigError("old_csv and new_csv are required");
  match.validate();
  if (debate) debate_config.validate();
  if (out_dir.empty()) throw ConfigError("out_dir must not be empty");
}

namespace {

bool parse_bool(const std::string& key, const std::string& v) {
  const auto l = text::to_lower(v);
  if (l == "true" || l == "1" || l == "yes" || l == "on") return true;
  if (l == "false" || l == "0" || l == "no" || l == "off") return false;
  throw ConfigError(key + ": expected a boolean, got '" + v + "'");
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
  }
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    throw ConfigError(key + ": value out of range '" + v + "'");
  }
}

double parse_real(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size()) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
  return d;
}

std::map<Subset, std::size_t> parse_caps(const std::string& v) {
  std::map<Subset, std::size_t> caps;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto t = std::string(text::trim(item));
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("sample_caps: '" + t + "' lacks '='");
    const auto sub = parse_subset(text::trim(std::string_view(t).substr(0, eq)));
    if (!sub || !is_transition(*sub)) {
      throw ConfigError("sample_caps: unknown subset in '" + t + "'");
    }
    caps[*sub] = parse_uint("sample_caps", std::string(text::trim(std::string_view(t).substr(eq + 1))));
  }
  return caps;
}

// Multi-line values (stub replies) are stored with `\n` escapes.
std::string escape_value(std::string_view v) {
  std::string out;
  for (char c : v) {
    if (c == '\\') {
      out += "\\\\";
    } else if (c == '\n') {
      out += "\\n";
    } else if (c == '\r') {
      out += "\\r";
    } else {
      out += c;
    }
  }
  return out;
}

std::string unescape_value(std::string_view v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == '\\' && i + 1 < v.size()) {
      const char n = v[i + 1];
      if (n == 'n' || n == 'r' || n == '\\') {
        out += n == 'n' ? '\n' : n == 'r' ? '\r' : '\\';
        ++i;
        continue;
      }
    }
    out += v[i];
  }
  return out;
}

std::string real_text(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// FNV-1a; stable across platforms, used to derive per-record seeds.
std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// Seeded choice of `k` of `n` indices, returned sorted. Plain modulo
// reduction keeps the result independent of the standard library.
std::vector<std::size_t> choose(std::size_t n, std::size_t k, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < std::min(k, n); ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng() % (n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(std::min(k, n));
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

void apply_config_value(RunConfig& cfg, const std::string& key, const std::string& value) {
  const std::string v(text::trim(value));
  if (key == "dataset") {
    cfg.dataset = v;
  } else if (key == "old_csv") {
    cfg.old_csv = v;
  } else if (key == "new_csv") {
    cfg.new_csv = v;
  } else if (key == "path_column") {
    cfg.columns.path = v;
  } else if (key == "label_column") {
    cfg.columns.label = v;
  } else if (key == "source_column") {
    cfg.columns.source = v;
  } else if (key == "threshold") {
    cfg.match.threshold = parse_real(key, v);
  } else if (key == "gap_multiplier") {
    cfg.match.gap_multiplier = parse_real(key, v);
  } else if (key == "diff_context") {
    cfg.diff_context = parse_uint(key, v);
  } else if (key == "depth") {
    cfg.depth = parse_uint(key, v);
    cfg.debate_config.depth = cfg.depth;
  } else if (key == "max_lines") {
    cfg.max_lines = parse_uint(key, v);
    cfg.debate_config.max_lines = cfg.max_lines;
  } else if (key == "baseline") {
    if (v.empty()) {
      cfg.baseline.reset();
    } else {
      auto k = parse_baseline_kind(v);
      if (!k) throw ConfigError("baseline: unknown kind '" + v + "'");
      cfg.baseline = k;
    }
  } else if (key == "method") {
    if (v.empty()) {
      cfg.method.reset();
    } else {
      auto m = parse_method(v);
      if (!m) throw ConfigError("method: unknown method '" + v + "'");
      cfg.method = m;
    }
  } else if (key == "debate") {
    cfg.debate = parse_bool(key, v);
  } else if (key == "rounds") {
    const auto r = parse_uint(key, v);
    if (r < 1 || r > 1000) throw ConfigError("rounds: must be between 1 and 1000");
    cfg.debate_config.rounds = static_cast<int>(r);
  } else if (key == "roles") {
    for (auto& [role, model] : parse_role_models(v)) cfg.debate_config.role_models[role] = model;
  } else if (key == "temperature") {
    cfg.debate_config.temperature = parse_real(key, v);
  } else if (key == "model") {
    cfg.model = v;
  } else if (key == "base_url") {
    cfg.base_url = v;
  } else if (key == "max_in_flight") {
    cfg.max_in_flight = parse_uint(key, v);
  } else if (key == "stub") {
    cfg.stub = parse_bool(key, v);
  } else if (key == "stub_reply") {
    cfg.stub_reply = unescape_value(v);
  } else if (key == "stub_script") {
    cfg.stub_script = v;
  } else if (key == "sample_caps") {
    cfg.sample_caps = parse_caps(v);
  } else if (key == "max_records") {
    cfg.max_records = parse_uint(key, v);
  } else if (key == "exemplar_count") {
    cfg.exemplar_count = parse_uint(key, v);
  } else if (key == "seed") {
    cfg.seed = parse_uint(key, v);
  } else if (key == "out_dir") {
    cfg.out_dir = v;
  } else if (key == "api_key") {
    throw ConfigError("api_key is read from DRIFTLENS_API_KEY or OPENAI_API_KEY only");
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

RunConfig parse_run_config(const std::string& text_in, RunConfig base) {
  std::size_t line_no = 0;
  for (const auto& raw : text::normalize_lines(text_in)) {
    ++line_no;
    const auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(text::trim(line.substr(0, eq)));
    try {
      apply_config_value(base, key, std::string(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return base;
}

std::string format_run_config(const RunConfig& c) {
  std::ostringstream os;
  auto kv = [&](std::string_view k, const std::string& v) { os << k << " = " << v << "\n"; };
  kv("dataset", c.dataset);
  kv("old_csv", c.old_csv);
  kv("new_csv", c.new_csv);
  kv("path_column", c.columns.path);
  kv("label_column", c.columns.label);
  kv("source_column", c.columns.source);
  kv("threshold", real_text(c.match.threshold));
  kv("gap_multiplier", real_text(c.match.gap_multiplier));
  kv("diff_context", std::to_string(c.diff_context));
  kv("depth", std::to_string(c.depth));
  kv("max_lines", std::to_string(c.max_lines));
  kv("baseline", c.baseline ? std::string(to_string(*c.baseline)) : "");
  kv("method", c.method ? std::string(to_string(*c.method)) : "");
  kv("debate", c.debate ? "true" : "false");
  kv("rounds", std::to_string(c.debate_config.rounds));
  std::string roles;
  for (const auto& [role, model] : c.debate_config.role_models) {
    if (!roles.empty()) roles += ",";
    roles += std::string(to_string(role)) + "=" + model;
  }
  kv("roles", roles);
  kv("temperature", real_text(c.debate_config.temperature));
  kv("model", c.model);
  kv("base_url", c.base_url);
  kv("max_in_flight", std::to_string(c.max_in_flight));
  kv("stub", c.stub ? "true" : "false");
  kv("stub_reply", escape_value(c.stub_reply));
  kv("stub_script", c.stub_script);
  std::string caps;
  for (const auto& [sub, n] : c.sample_caps) {
    if (!caps.empty()) caps += ",";
    caps += std::string(to_string(sub)) + "=" + std::to_string(n);
  }
  kv("sample_caps", caps);
  kv("max_records", std::to_string(c.max_records));
  kv("exemplar_count", std::to_string(c.exemplar_count));
  kv("seed", std::to_string(c.seed));
  kv("out_dir", c.out_dir);
  return os.str();
}

std::vector<EvolutionRecord> sample_records(std::vector<EvolutionRecord> records,
                                            const std::map<Subset, std::size_t>& caps,
                                            std::uint64_t seed) {
  std::vector<bool> keep(records.size(), true);
  for (const auto& [sub, cap] : caps) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (records[i].subset == sub) members.push_back(i);
    }
    if (members.size() <= cap) continue;
    const auto chosen = choose(members.size(), cap, seed ^ fnv1a(to_string(sub)));
    std::vector<bool> in(members.size(), false);
    for (auto c : chosen) in[c] = true;
    for (std::size_t m = 0; m < members.size(); ++m) {
      if (!in[m]) keep[members[m]] = false;
    }
  }
  std::vector<EvolutionRecord> out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (keep[i]) out.push_back(std::move(records[i]));
  }
  return out;
}

std::vector<std::string> select_exemplars(const VersionSet& old_set,
                                          std::string_view exclude_path, std::size_t count,
                                          std::uint64_t seed) {
  constexpr std::size_t kMaxExemplarLines = 8;
  std::vector<const VersionedFile*> pool;
  for (const auto& f : old_set.files()) {
    if (f.label == Label::defective && f.path != exclude_path) pool.push_back(&f);
  }
  std::vector<std::string> out;
  for (auto i : choose(pool.size(), count, seed ^ fnv1a(exclude_path))) {
    const auto& f = *pool[i];
    std::vector<std::string> lines;
    const auto methods = extract_methods(f.source);
    if (!methods.empty()) {
      lines = text::normalize_lines(methods.front().body);
    } else {
      for (auto& l : text::normalize_lines(f.source)) {
        if (!text::trim(l).empty()) lines.push_back(std::move(l));
      }
    }
    if (lines.size() > kMaxExemplarLines) lines.resize(kMaxExemplarLines);
    if (lines.empty()) continue;
    out.push_back("// " + f.path + "\n" + text::join(lines, "\n"));
  }
  return out;
}

RecordMaterials prepare_materials(const EvolutionRecord& record, const VersionSet& old_set,
                                  const RunConfig& cfg, bool with_context,
                                  bool with_exemplars) {
  RecordMaterials m;
  DiffOptions opt;
  opt.context_lines = cfg.diff_context;
  opt.new_path = record.new_file.path;
  opt.old_path = record.old_file ? record.old_file->path : record.new_file.path;
  m.changes = diff(record.old_file ? std::string_view(record.old_file->source) : "",
                   record.new_file.source, opt);
  if (with_context) {
    m.context = extract_context(m.changes, record.new_file.source, cfg.depth, cfg.max_lines);
  }
  if (with_exemplars) {
    m.exemplars = select_exemplars(old_set, record.old_file ? record.old_file->path : "",
                                   cfg.exemplar_count, cfg.seed);
  }
  return m;
}

std::shared_ptr<ChatClient> make_client(const RunConfig& cfg) {
  if (cfg.stub) {
    auto script = cfg.stub_script.empty() ? std::make_shared<StubScript>()
                                          : StubScript::from_json_file(cfg.stub_script);
    if (!cfg.stub_reply.empty()) script->set_default(cfg.stub_reply);
    return std::make_shared<ChatClient>(script);
  }
  EndpointConfig ep = EndpointConfig::from_env();
  if (!cfg.base_url.empty()) ep.base_url = cfg.base_url;
  ep.max_in_flight = cfg.max_in_flight;
  return std::make_shared<ChatClient>(ep, make_http_transport());
}

namespace {

std::string method_name(const RunConfig& cfg) {
  if (cfg.baseline) return std::string(to_string(*cfg.baseline));
  if (cfg.method) return std::string(to_string(*cfg.method));
  return "debate-R" + std::to_string(cfg.debate_config.rounds);
}

std::string manifest_text(const RunConfig& cfg, const PartitionStats& stats) {
  std::ostringstream os;
  os << "# driftlens " << DRIFTLENS_VERSION << " run manifest\n";
  os << "# rerun with: driftlens run --config <this file>\n";
  os << "# partition: removed=" << stats.removed << " added=" << stats.added
     << " same_source=" << stats.same_source << " B00=" << stats.B00 << " B10=" << stats.B10
     << " D11=" << stats.D11 << " D01=" << stats.D01 << "\n";
  os << format_run_config(cfg);
  return os.str();
}

template <typename F>
auto stage(const std::string& name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

}  // namespace

RunResult run(const RunConfig& cfg, std::shared_ptr<ChatClient> client) {
  stage("config", [&] { cfg.validate(); });
  const fs::path out(cfg.out_dir);
  auto write = [&](const std::string& name, const std::string& content) {
    write_text_file((out / name).string(), content);
  };

  const std::string dataset = cfg.dataset.empty() ? "dataset" : cfg.dataset;
  const VersionSet old_set =
      stage("corpus", [&] { return load_version(cfg.old_csv, cfg.columns, dataset); });
  const VersionSet new_set =
      stage("corpus", [&] { return load_version(cfg.new_csv, cfg.columns, dataset); });
  const Partition part = stage("matching", [&] {
    return partition(old_set, new_set, match_files(old_set, new_set, cfg.match));
  });

  RunResult result;
  result.stats = part.stats;
  stage("artifacts", [&] {
    write("manifest.txt", manifest_text(cfg, part.stats));
    write("matches.csv", format_matches_csv(part.records));
  });

  // Baselines score every new-version file; model-based methods only see
  // common files whose source changed.
  std::vector<EvolutionRecord> population;
  for (const auto& r : part.records) {
    if (cfg.baseline || r.changed_source()) population.push_back(r);
  }
  population = sample_records(std::move(population), cfg.sample_caps, cfg.seed);
  if (cfg.max_records && population.size() > cfg.max_records) {
    std::vector<EvolutionRecord> kept;
    for (auto i : choose(population.size(), cfg.max_records, cfg.seed ^ 0x9e3779b97f4a7c15ULL)) {
      kept.push_back(std::move(population[i]));
    }
    population = std::move(kept);
  }
  result.evaluated = population;
  stage("artifacts", [&] { write("records.csv", format_records_csv(population)); });

  const auto started = std::chrono::steady_clock::now();
  std::vector<std::optional<PredictionRow>> rows(population.size());
  std::vector<std::optional<DebateTranscript>> transcripts(population.size());

  if (cfg.baseline) {
    const auto preds = predict_naive(population, *cfg.baseline);
    for (std::size_t i = 0; i < population.size(); ++i) {
      ParsedPrediction p;
      p.label = preds.at(population[i].id());
      p.parse_path = ParsePath::direct;
      rows[i] = PredictionRow{population[i].id(), p};
    }
  } else {
    if (!client) client = stage("client", [&] { return make_client(cfg); });
    const bool is_debate = cfg.debate;
    const std::string stage_name = is_debate ? "debate" : "predict";

    auto work = [&](std::size_t i) {
      const auto& rec = population[i];
      if (is_debate) {
        DebateConfig dc = cfg.debate_config;
        dc.depth = cfg.depth;
        dc.max_lines = cfg.max_lines;
        const auto mat = prepare_materials(rec, old_set, cfg, true, false);
        try {
          auto t = run_debate(rec, mat.changes, *mat.context, dc, *client);
          rows[i] = PredictionRow{rec.id(), t.verdict};
          transcripts[i] = std::move(t);
        } catch (const DebateError& e) {
          transcripts[i] = e.partial();
          throw;
        }
      } else {
        const auto m = *cfg.method;
        const auto& req = required_inputs(m);
        const auto mat = prepare_materials(rec, old_set, cfg, req.count(InputBlock::local_context),
                                           req.count(InputBlock::exemplars));
        const PromptInputs in{&rec, &mat.changes, mat.context ? &*mat.context : nullptr,
                              &mat.exemplars};
        const auto bundle = build_method_prompt(m, in);
        ChatRequest cr;
        cr.model = cfg.model;
        cr.system = bundle.system;
        cr.turns = {{"user", bundle.user}};
        cr.temperature = cfg.debate_config.temperature;
        cr.tag = bundle.tag;
        cr.record_id = rec.id();
        const auto reply = client->complete(cr);
        rows[i] = PredictionRow{rec.id(), parse_prediction(reply.text, ExpectFormat::json_shape)};
      }
    };

    // Stub replies may be sequenced per key, so stub runs stay sequential
    // to keep predictions reproducible.
    const std::size_t workers =
        client->stub_mode() ? 1 : std::max<std::size_t>(1, std::min(cfg.max_in_flight,
                                                                      population.size()));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto loop = [&] {
      for (;;) {
        {
          std::lock_guard lock(failure_mu);
          if (failure) return;
        }
        const std::size_t i = next.fetch_add(1);
        if (i >= population.size()) return;
        try {
          work(i);
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    };
    if (workers == 1) {
      loop();
    } else {
      std::vector<std::thread> pool;
      for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(loop);
      for (auto& t : pool) t.join();
    }

    // Persist whatever finished before surfacing a failure.
    for (const auto& t : transcripts) {
      if (t) write("transcripts/" + transcript_file_name(t->record_id), transcript_to_json(*t));
    }
    if (failure) {
      std::vector<PredictionRow> done;
      for (auto& r : rows) {
        if (r) done.push_back(*r);
      }
      write("predictions.csv", format_predictions_csv(done));
      try {
        std::rethrow_exception(failure);
      } catch (const std::exception& e) {
        throw StageError(stage_name, e.what());
      }
    }
  }

  for (auto& r : rows) result.predictions.push_back(std::move(*r));
  for (auto& t : transcripts) {
    if (t) result.transcripts.push_back(std::move(*t));
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  result.report = stage("evaluate", [&] {
    auto rep = evaluate(population, prediction_map(result.predictions), method_name(cfg));
    rep.elapsed_seconds = elapsed;
    return rep;
  });
  stage("artifacts", [&] {
    write("predictions.csv", format_predictions_csv(result.predictions));
    write("report.txt", format_report_table({result.report}));
    write("report.csv", format_report_csv({result.report}));
  });
  return result;
}

}  // namespace driftlens
