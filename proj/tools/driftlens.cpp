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

// driftlens command-line front end.

#include <cstdio>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "driftlens/context.hpp"
#include "driftlens/diffing.hpp"
#include "driftlens/error.hpp"
#include "driftlens/pipeline.hpp"

namespace dl = driftlens;

namespace {

// Flags shared by the corpus-reading subcommands, copied onto a RunConfig.
struct CorpusFlags {
  std::string old_csv, new_csv, dataset;
  std::string path_column = "name", label_column = "bug", source_column = "src";
  double threshold = 0.7, gap = 1.0;

  void add(CLI::App* app, bool required = true) {
    app->add_option("--old", old_csv, "Old-version CSV")->required(required);
    app->add_option("--new", new_csv, "New-version CSV")->required(required);
    app->add_option("--dataset", dataset, "Dataset name");
    app->add_option("--path-column", path_column, "Path column")->capture_default_str();
    app->add_option("--label-column", label_column, "Label column")->capture_default_str();
    app->add_option("--source-column", source_column, "Source column")->capture_default_str();
    app->add_option("-T,--threshold", threshold, "Minimum best similarity")->capture_default_str();
    app->add_option("-c,--gap", gap, "Gap multiplier c")->capture_default_str();
  }

  void apply(dl::RunConfig& cfg) const {
    cfg.old_csv = old_csv;
    cfg.new_csv = new_csv;
    cfg.dataset = dataset;
    cfg.columns = {path_column, label_column, source_column};
    cfg.match.threshold = threshold;
    cfg.match.gap_multiplier = gap;
  }
};

struct LoadedPair {
  dl::VersionSet old_set, new_set;
  dl::Partition part;
};

LoadedPair load_pair(const dl::RunConfig& cfg) {
  cfg.match.validate();
  const std::string name = cfg.dataset.empty() ? "dataset" : cfg.dataset;
  LoadedPair p;
  p.old_set = dl::load_version(cfg.old_csv, cfg.columns, name);
  p.new_set = dl::load_version(cfg.new_csv, cfg.columns, name);
  p.part = dl::partition(p.old_set, p.new_set, dl::match_files(p.old_set, p.new_set, cfg.match));
  return p;
}

// Finds the record whose new-version path is `path`.
const dl::EvolutionRecord& find_record(const LoadedPair& p, const std::string& path) {
  for (const auto& r : p.part.records) {
    if (r.id() == path) return r;
  }
  throw dl::DataError("no record with path " + path);
}

// Old and new source for diff/context: two files, or one record of a corpus pair.
std::pair<std::string, std::string> source_pair(const std::string& old_file,
                                                const std::string& new_file,
                                                const CorpusFlags& flags,
                                                const std::string& record) {
  if (record.empty()) {
    if (old_file.empty() || new_file.empty()) {
      throw dl::ConfigError("give two files, or --old/--new with --record");
    }
    return {dl::read_text_file(old_file), dl::read_text_file(new_file)};
  }
  if (flags.old_csv.empty() || flags.new_csv.empty()) {
    throw dl::ConfigError("--record needs --old and --new");
  }
  dl::RunConfig cfg;
  flags.apply(cfg);
  const auto p = load_pair(cfg);
  const auto& r = find_record(p, record);
  return {r.old_file ? r.old_file->source : std::string(), r.new_file.source};
}

void emit(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    dl::write_text_file(out_path, content);
  }
}

// Run options common to baseline / predict / debate / run.
struct RunFlags {
  std::string config_file;
  std::vector<std::string> sets;
  std::string out_dir;
  bool stub = false;
  std::string stub_reply, stub_script, model, base_url, caps;
  std::size_t max_in_flight = 0, max_records = 0;
  std::uint64_t seed = 42;
  std::size_t depth = dl::kDefaultContextDepth, max_lines = dl::kBestMaxLines;

  void add(CLI::App* app, bool llm) {
    app->add_option("--config", config_file, "Flat key = value config file");
    app->add_option("--set", sets, "Override a config key (key=value), repeatable");
    app->add_option("--out", out_dir, "Output directory");
    app->add_option("--seed", seed, "Sampling seed")->capture_default_str();
    app->add_option("--sample-caps", caps, "Per-subset caps, e.g. B00=100,D11=50");
    app->add_option("--max-records", max_records, "Cap on evaluated records (0 = all)");
    if (!llm) return;
    app->add_flag("--stub", stub, "Offline mode with canned replies");
    app->add_option("--stub-reply", stub_reply, "Default canned reply (implies --stub)");
    app->add_option("--stub-script", stub_script, "JSON reply script (implies --stub)");
    app->add_option("--model", model, "Model for single-shot methods");
    app->add_option("--base-url", base_url, "Endpoint base URL");
    app->add_option("--max-in-flight", max_in_flight, "Concurrent request cap");
    app->add_option("--depth", depth, "Context depth")->capture_default_str();
    app->add_option("--max-lines", max_lines, "Context line budget")->capture_default_str();
  }

  void apply(dl::RunConfig& cfg, CLI::App* app) const {
    if (!config_file.empty()) cfg = dl::parse_run_config(dl::read_text_file(config_file), cfg);
    auto given = [&](const char* flag) { return app->count(flag) > 0; };
    if (given("--out")) cfg.out_dir = out_dir;
    if (given("--seed")) cfg.seed = seed;
    if (given("--sample-caps")) dl::apply_config_value(cfg, "sample_caps", caps);
    if (given("--max-records")) cfg.max_records = max_records;
    if (app->get_option_no_throw("--stub")) {
      if (stub) cfg.stub = true;
      if (given("--stub-reply")) {
        cfg.stub = true;
        cfg.stub_reply = stub_reply;
      }
      if (given("--stub-script")) {
        cfg.stub = true;
        cfg.stub_script = stub_script;
      }
      if (given("--model")) cfg.model = model;
      if (given("--base-url")) cfg.base_url = base_url;
      if (given("--max-in-flight")) cfg.max_in_flight = max_in_flight;
      if (given("--depth")) dl::apply_config_value(cfg, "depth", std::to_string(depth));
      if (given("--max-lines")) {
        dl::apply_config_value(cfg, "max_lines", std::to_string(max_lines));
      }
    }
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw dl::ConfigError("--set expects key=value, got " + kv);
      dl::apply_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
  }
};

int report_run(const dl::RunConfig& cfg) {
  const auto result = dl::run(cfg);
  std::cout << dl::format_report_table({result.report});
  std::cerr << "artifacts written to " << cfg.out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"driftlens: change-aware defect prediction pipeline"};
  app.set_version_flag("--version", std::string(DRIFTLENS_VERSION));
  app.require_subcommand(1);

  // match
  CorpusFlags match_flags;
  std::string match_out;
  auto* match_cmd = app.add_subcommand("match", "Match files across two versions");
  match_flags.add(match_cmd);
  match_cmd->add_option("--out", match_out, "Write CSV here instead of stdout");

  // partition
  CorpusFlags part_flags;
  std::string basis = "union";
  auto* part_cmd = app.add_subcommand("partition", "File-evolution partition statistics");
  part_flags.add(part_cmd);
  part_cmd->add_option("--basis", basis, "Percentage basis: union or new-version")
      ->check(CLI::IsMember({"union", "new-version"}))
      ->capture_default_str();

  // diff
  CorpusFlags diff_flags;
  std::string diff_old, diff_new, diff_record;
  std::size_t diff_ctx = 3;
  bool diff_list = false;
  auto* diff_cmd = app.add_subcommand("diff", "Unified diff of two files or of one record");
  diff_cmd->add_option("old_file", diff_old, "Old file")->check(CLI::ExistingFile);
  diff_cmd->add_option("new_file", diff_new, "New file")->check(CLI::ExistingFile);
  diff_flags.add(diff_cmd, false);
  diff_cmd->add_option("--record", diff_record, "New-version path of a record");
  diff_cmd->add_option("-U,--context", diff_ctx, "Context lines")->capture_default_str();
  diff_cmd->add_flag("--differences", diff_list, "Print the numbered difference list instead");

  // context
  CorpusFlags ctx_flags;
  std::string ctx_old, ctx_new, ctx_record;
  std::size_t ctx_depth = dl::kDefaultContextDepth, ctx_lines = dl::kDefaultMaxLines;
  auto* ctx_cmd = app.add_subcommand("context", "Call-graph context around changed lines");
  ctx_cmd->add_option("old_file", ctx_old, "Old file")->check(CLI::ExistingFile);
  ctx_cmd->add_option("new_file", ctx_new, "New file")->check(CLI::ExistingFile);
  ctx_flags.add(ctx_cmd, false);
  ctx_cmd->add_option("--record", ctx_record, "New-version path of a record");
  ctx_cmd->add_option("--depth", ctx_depth, "Expansion depth")->capture_default_str();
  ctx_cmd->add_option("--max-lines", ctx_lines, "Line budget")->capture_default_str();

  // prompt
  CorpusFlags prompt_flags;
  std::string prompt_method, prompt_role, prompt_record;
  std::size_t prompt_depth = dl::kDefaultContextDepth, prompt_lines = dl::kBestMaxLines;
  std::size_t prompt_exemplars = 3;
  std::uint64_t prompt_seed = 42;
  auto* prompt_cmd = app.add_subcommand("prompt", "Render a prompt for one record");
  prompt_flags.add(prompt_cmd);
  prompt_cmd->add_option("--method", prompt_method, "M0..M8");
  prompt_cmd->add_option("--role", prompt_role, "analyzer (debate opening prompt)");
  prompt_cmd->add_option("--record", prompt_record, "New-version path of the record")
      ->required();
  prompt_cmd->add_option("--depth", prompt_depth, "Context depth")->capture_default_str();
  prompt_cmd->add_option("--max-lines", prompt_lines, "Context budget")->capture_default_str();
  prompt_cmd->add_option("--exemplars", prompt_exemplars, "M7 exemplar count")
      ->capture_default_str();
  prompt_cmd->add_option("--seed", prompt_seed, "Exemplar seed")->capture_default_str();

  // baseline
  CorpusFlags base_flags;
  RunFlags base_run;
  std::string base_kind = "label-persistent";
  auto* base_cmd = app.add_subcommand("baseline", "Naive baseline predictions and report");
  base_flags.add(base_cmd);
  base_run.add(base_cmd, false);
  base_cmd->add_option("--kind", base_kind, "label-persistent or all-benign")
      ->check(CLI::IsMember({"label-persistent", "all-benign"}))
      ->capture_default_str();

  // predict
  CorpusFlags pred_flags;
  RunFlags pred_run;
  std::string pred_method;
  auto* pred_cmd = app.add_subcommand("predict", "Single-shot prompting method M0..M8");
  pred_flags.add(pred_cmd);
  pred_run.add(pred_cmd, true);
  pred_cmd->add_option("--method", pred_method, "M0..M8")->required();

  // debate
  CorpusFlags deb_flags;
  RunFlags deb_run;
  int deb_rounds = 1;
  std::string deb_roles;
  auto* deb_cmd = app.add_subcommand("debate", "Multi-agent debate predictions");
  deb_flags.add(deb_cmd);
  deb_run.add(deb_cmd, true);
  deb_cmd->add_option("--rounds", deb_rounds, "Proposer/skeptic rounds")
      ->check(CLI::Range(1, 1000))
      ->capture_default_str();
  deb_cmd->add_option("--roles", deb_roles, "analyzer=...,proposer=...,skeptic=...,judge=...");

  // evaluate
  std::string eval_preds, eval_records, eval_method = "predictions";
  bool eval_csv = false;
  auto* eval_cmd = app.add_subcommand("evaluate", "Metrics for a predictions file");
  eval_cmd->add_option("--preds", eval_preds, "predictions.csv")->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--records", eval_records, "records.csv")->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--method", eval_method, "Row label")->capture_default_str();
  eval_cmd->add_flag("--csv", eval_csv, "Machine-readable output");

  // run
  RunFlags full_run;
  auto* run_cmd = app.add_subcommand("run", "Full pipeline from a config file");
  full_run.add(run_cmd, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*match_cmd) {
      dl::RunConfig cfg;
      match_flags.apply(cfg);
      emit(dl::format_matches_csv(load_pair(cfg).part.records), match_out);
    } else if (*part_cmd) {
      dl::RunConfig cfg;
      part_flags.apply(cfg);
      const auto p = load_pair(cfg);
      const auto& s = p.part.stats;
      std::cout << dl::format_partition_table(
          cfg.dataset.empty() ? "dataset" : cfg.dataset,
          basis == "union" ? s.union_basis() : s.new_version_basis());
      std::cout << "counts: removed=" << s.removed << " added=" << s.added
                << " same_source=" << s.same_source << " B00=" << s.B00 << " B10=" << s.B10
                << " D11=" << s.D11 << " D01=" << s.D01 << " old=" << p.old_set.size()
                << " new=" << p.new_set.size() << "\n";
    } else if (*diff_cmd) {
      const auto [a, b] = source_pair(diff_old, diff_new, diff_flags, diff_record);
      dl::DiffOptions opt;
      opt.context_lines = diff_ctx;
      opt.old_path = diff_record.empty() ? diff_old : diff_record;
      opt.new_path = diff_record.empty() ? diff_new : diff_record;
      const auto cs = dl::diff(a, b, opt);
      if (diff_list) {
        const auto list = dl::render_difference_list(cs);
        std::cout << list << (list.empty() ? "" : "\n");
      } else {
        std::cout << cs.unified;
      }
      return cs.empty() ? 0 : 1;  // diff(1) convention
    } else if (*ctx_cmd) {
      const auto [old_src, new_src] = source_pair(ctx_old, ctx_new, ctx_flags, ctx_record);
      const auto cs = dl::diff(old_src, new_src);
      const auto b = dl::extract_context(cs, new_src, ctx_depth, ctx_lines);
      std::cout << b.snippet << (b.snippet.empty() ? "" : "\n");
      std::cerr << "visited:";
      for (const auto& m : b.visited_methods) std::cerr << ' ' << m;
      std::cerr << "\nincluded:";
      for (const auto& m : b.included_methods) std::cerr << ' ' << m;
      std::cerr << "\ndepth_used: " << b.depth_used << (b.truncated ? " (truncated)" : "")
                << "\n";
    } else if (*prompt_cmd) {
      if (prompt_method.empty() == prompt_role.empty()) {
        throw dl::ConfigError("give exactly one of --method or --role");
      }
      dl::RunConfig cfg;
      prompt_flags.apply(cfg);
      cfg.depth = prompt_depth;
      cfg.max_lines = prompt_lines;
      cfg.exemplar_count = prompt_exemplars;
      cfg.seed = prompt_seed;
      const auto p = load_pair(cfg);
      const dl::EvolutionRecord* rec = &find_record(p, prompt_record);
      dl::PromptBundle bundle;
      if (!prompt_method.empty()) {
        const auto m = dl::parse_method(prompt_method);
        if (!m) throw dl::ConfigError("unknown method " + prompt_method);
        const auto& req = dl::required_inputs(*m);
        const auto mat = dl::prepare_materials(*rec, p.old_set, cfg,
                                               req.count(dl::InputBlock::local_context),
                                               req.count(dl::InputBlock::exemplars));
        bundle = dl::build_method_prompt(
            *m, {rec, &mat.changes, mat.context ? &*mat.context : nullptr, &mat.exemplars});
      } else {
        if (prompt_role != "analyzer") {
          throw dl::ConfigError("only the analyzer prompt has no debate history; got " +
                                prompt_role);
        }
        const auto mat = dl::prepare_materials(*rec, p.old_set, cfg, true, false);
        bundle = dl::build_role_prompt(dl::Role::analyzer,
                                       {rec, &mat.changes, &*mat.context, nullptr}, {}, 0);
      }
      std::cout << "=== system (" << bundle.tag << ") ===\n"
                << bundle.system << "\n=== user ===\n"
                << bundle.user << "\n";
    } else if (*base_cmd) {
      dl::RunConfig cfg;
      base_flags.apply(cfg);
      cfg.baseline = dl::parse_baseline_kind(base_kind);
      base_run.apply(cfg, base_cmd);
      return report_run(cfg);
    } else if (*pred_cmd) {
      dl::RunConfig cfg;
      pred_flags.apply(cfg);
      dl::apply_config_value(cfg, "method", pred_method);
      pred_run.apply(cfg, pred_cmd);
      return report_run(cfg);
    } else if (*deb_cmd) {
      dl::RunConfig cfg;
      deb_flags.apply(cfg);
      cfg.debate = true;
      cfg.debate_config.rounds = deb_rounds;
      if (!deb_roles.empty()) dl::apply_config_value(cfg, "roles", deb_roles);
      deb_run.apply(cfg, deb_cmd);
      return report_run(cfg);
    } else if (*eval_cmd) {
      const auto records = dl::parse_records_csv(dl::read_text_file(eval_records));
      const auto preds = dl::parse_predictions_csv(dl::read_text_file(eval_preds));
      const auto report = dl::evaluate(records, dl::prediction_map(preds), eval_method);
      std::cout << (eval_csv ? dl::format_report_csv({report})
                             : dl::format_report_table({report}));
    } else if (*run_cmd) {
      if (full_run.config_file.empty() && full_run.sets.empty()) {
        throw dl::ConfigError("run needs --config or --set");
      }
      dl::RunConfig cfg;
      full_run.apply(cfg, run_cmd);
      return report_run(cfg);
    }
  } catch (const dl::StageError& e) {
    std::cerr << "driftlens: stage " << e.what() << "\n";
    return e.stage() == "config" ? 2 : 5;
  } catch (const dl::ConfigError& e) {
    std::cerr << "driftlens: configuration error: " << e.what() << "\n";
    return 2;
  } catch (const dl::DataError& e) {
    std::cerr << "driftlens: data error: " << e.what() << "\n";
    return 3;
  } catch (const dl::TransportError& e) {
    std::cerr << "driftlens: transport error (status " << e.status() << "): " << e.what()
              << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "driftlens: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
