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

#include "driftlens/debate.hpp"

#include <cstdio>

#include "driftlens/text.hpp"
#include "json.hpp"

namespace driftlens {

using nlohmann::json;

void DebateConfig::validate() const {
  if (rounds < 1) throw ConfigError("debate rounds must be >= 1, got " + std::to_string(rounds));
  for (auto r : {Role::analyzer, Role::proposer, Role::skeptic, Role::judge}) {
    auto it = role_models.find(r);
    if (it == role_models.end() || it->second.empty()) {
      throw ConfigError("no model assigned to role " + std::string(to_string(r)));
    }
  }
}

std::map<Role, std::string> parse_role_models(std::string_view spec) {
  std::map<Role, std::string> out;
  std::size_t i = 0;
  while (i <= spec.size()) {
    auto comma = spec.find(',', i);
    if (comma == std::string_view::npos) comma = spec.size();
    const auto item = text::trim(spec.substr(i, comma - i));
    i = comma + 1;
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("role assignment '" + std::string(item) + "' lacks '='");
    }
    const auto role = parse_role(text::trim(item.substr(0, eq)));
    if (!role) throw ConfigError("unknown debate role '" + std::string(item.substr(0, eq)) + "'");
    const auto model = text::trim(item.substr(eq + 1));
    if (model.empty()) throw ConfigError("empty model for role " + std::string(to_string(*role)));
    out[*role] = std::string(model);
  }
  return out;
}

std::vector<std::pair<Role, int>> debate_schedule(int rounds) {
  std::vector<std::pair<Role, int>> s;
  s.emplace_back(Role::analyzer, 0);
  for (int r = 1; r <= rounds; ++r) {
    s.emplace_back(Role::proposer, r);
    s.emplace_back(Role::skeptic, r);
  }
  s.emplace_back(Role::judge, rounds);
  return s;
}

DebateTranscript run_debate(const EvolutionRecord& record, const ChangeSet& cs,
                            const ContextBundle& ctx, const DebateConfig& cfg,
                            ChatClient& client) {
  cfg.validate();
  DebateTranscript t;
  t.record_id = record.id();
  t.config = cfg;
  const PromptInputs inputs{&record, &cs, &ctx, nullptr};

  auto ask = [&](Role role, const std::string& system, std::vector<ChatTurn> turns) {
    ChatRequest req;
    req.model = cfg.role_models.at(role);
    req.system = system;
    req.turns = std::move(turns);
    req.temperature = cfg.temperature;
    req.tag = std::string(to_string(role));
    req.record_id = record.id();
    try {
      return client.complete(req).text;
    } catch (const TransportError& e) {
      throw DebateError(e, t);
    }
  };

  for (const auto& [role, round] : debate_schedule(cfg.rounds)) {
    const PromptBundle prompt = build_role_prompt(role, inputs, t.messages, round);
    std::string reply = ask(role, prompt.system, {{"user", prompt.user}});
    if (role == Role::judge) {
      t.verdict = parse_prediction(reply, ExpectFormat::judge_markers);
      if (!t.verdict.ok()) {
        t.failed_judge_reply = reply;
        reply = ask(role, prompt.system,
                    {{"user", prompt.user},
                     {"assistant", *t.failed_judge_reply},
                     {"user", std::string(kJudgeReaskReminder)}});
        t.verdict = parse_prediction(reply, ExpectFormat::judge_markers);
      }
    }
    t.messages.push_back({role, round, std::move(reply)});
  }
  return t;
}

namespace {

json config_to_json(const DebateConfig& c) {
  json models = json::object();
  for (const auto& [role, model] : c.role_models) models[std::string(to_string(role))] = model;
  return {{"rounds", c.rounds},
          {"role_models", models},
          {"depth", c.depth},
          {"max_lines", c.max_lines},
          {"temperature", c.temperature}};
}

DebateConfig config_from_json(const json& j) {
  DebateConfig c;
  c.rounds = j.at("rounds").get<int>();
  c.role_models.clear();
  for (const auto& [key, value] : j.at("role_models").items()) {
    auto role = parse_role(key);
    if (!role) throw DataError("transcript names unknown role '" + key + "'");
    c.role_models[*role] = value.get<std::string>();
  }
  c.depth = j.at("depth").get<std::size_t>();
  c.max_lines = j.at("max_lines").get<std::size_t>();
  c.temperature = j.at("temperature").get<double>();
  return c;
}

}  // namespace

std::string transcript_to_json(const DebateTranscript& t) {
  json messages = json::array();
  for (const auto& m : t.messages) {
    messages.push_back({{"role", to_string(m.role)}, {"round", m.round}, {"text", m.text}});
  }
  json verdict = {{"parse_path", to_string(t.verdict.parse_path)}};
  verdict["label"] = t.verdict.label ? json(label_name(*t.verdict.label)) : json(nullptr);
  verdict["confidence"] = t.verdict.confidence ? json(*t.verdict.confidence) : json(nullptr);
  verdict["explanation"] = t.verdict.explanation ? json(*t.verdict.explanation) : json(nullptr);
  json doc = {{"record_id", t.record_id},
              {"config", config_to_json(t.config)},
              {"messages", messages},
              {"verdict", verdict}};
  doc["failed_judge_reply"] =
      t.failed_judge_reply ? json(*t.failed_judge_reply) : json(nullptr);
  return doc.dump(2, ' ', false, json::error_handler_t::replace) + "\n";
}

DebateTranscript transcript_from_json(const std::string& text) {
  DebateTranscript t;
  try {
    const json doc = json::parse(text);
    t.record_id = doc.at("record_id").get<std::string>();
    t.config = config_from_json(doc.at("config"));
    for (const auto& m : doc.at("messages")) {
      auto role = parse_role(m.at("role").get<std::string>());
      if (!role) throw DataError("transcript message has unknown role");
      t.messages.push_back({*role, m.at("round").get<int>(), m.at("text").get<std::string>()});
    }
    const auto& v = doc.at("verdict");
    auto path = parse_parse_path(v.at("parse_path").get<std::string>());
    if (!path) throw DataError("transcript verdict has unknown parse_path");
    t.verdict.parse_path = *path;
    if (!v.at("label").is_null()) {
      const auto l = text::to_lower(v.at("label").get<std::string>());
      t.verdict.label = l == "defective" ? Label::defective : Label::benign;
    }
    if (!v.at("confidence").is_null()) t.verdict.confidence = v.at("confidence").get<double>();
    if (!v.at("explanation").is_null()) {
      t.verdict.explanation = v.at("explanation").get<std::string>();
    }
    if (doc.contains("failed_judge_reply") && !doc["failed_judge_reply"].is_null()) {
      t.failed_judge_reply = doc["failed_judge_reply"].get<std::string>();
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed transcript: ") + e.what());
  }
  return t;
}

std::string transcript_file_name(const std::string& record_id) {
  std::string out;
  for (unsigned char c : record_id) {
    if (std::isalnum(c) || c == '.' || c == '-' || c == '_') {
      out += static_cast<char>(c);
    } else {
      char buf[4];
      std::snprintf(buf, sizeof buf, "%%%02X", c);
      out += buf;
    }
  }
  return out + ".json";
}

}  // namespace driftlens
