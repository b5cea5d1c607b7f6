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

#include "driftlens/llm_client.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "driftlens/error.hpp"
#include "driftlens/text.hpp"
#include "json.hpp"

namespace driftlens {

using nlohmann::json;

std::chrono::milliseconds RetryPolicy::delay_for_attempt(int attempt) const {
  const double base = static_cast<double>(initial_delay.count()) *
                      std::pow(multiplier, std::max(0, attempt - 1));
  const double capped = std::min(base, static_cast<double>(max_delay.count()));
  return std::chrono::milliseconds(static_cast<long long>(capped));
}

namespace {

std::string env_or_empty(const char* name) {
  const char* v = std::getenv(name);
  return v ? std::string(v) : std::string();
}

std::string stub_key(const std::string& tag, const std::string& record_id) {
  return record_id.empty() ? tag : tag + "|" + record_id;
}

bool retryable(int status) {
  return status == 0 || status == 429 || status == 500 || status == 502 || status == 503 ||
         status == 504;
}

}  // namespace

EndpointConfig EndpointConfig::from_env() {
  EndpointConfig cfg;
  std::string base = env_or_empty("DRIFTLENS_BASE_URL");
  if (base.empty()) base = env_or_empty("OPENAI_BASE_URL");
  if (!base.empty()) cfg.base_url = base;
  cfg.api_key = env_or_empty("DRIFTLENS_API_KEY");
  if (cfg.api_key.empty()) cfg.api_key = env_or_empty("OPENAI_API_KEY");
  return cfg;
}

std::string EndpointConfig::completions_url() const {
  std::string base = base_url;
  while (!base.empty() && base.back() == '/') base.pop_back();
  const bool has_v1 = base.size() >= 3 && base.compare(base.size() - 3, 3, "/v1") == 0;
  return base + (has_v1 ? "/chat/completions" : "/v1/chat/completions");
}

void StubScript::set(std::string tag, std::string reply) {
  std::lock_guard lock(mu_);
  replies_[tag] = {std::move(reply)};
  cursor_.erase(tag);
}

void StubScript::set(std::string tag, std::string record_id, std::string reply) {
  std::lock_guard lock(mu_);
  const auto key = stub_key(tag, record_id);
  replies_[key] = {std::move(reply)};
  cursor_.erase(key);
}

void StubScript::push(std::string tag, std::string record_id, std::string reply) {
  std::lock_guard lock(mu_);
  replies_[stub_key(tag, record_id)].push_back(std::move(reply));
}

std::string StubScript::reply_for(const std::string& tag, const std::string& record_id) {
  std::lock_guard lock(mu_);
  for (const auto& key : {stub_key(tag, record_id), tag}) {
    auto it = replies_.find(key);
    if (it == replies_.end() || it->second.empty()) continue;
    auto& pos = cursor_[key];
    const auto& reply = it->second[std::min(pos, it->second.size() - 1)];
    ++pos;
    return reply;
  }
  if (default_) return *default_;
  throw ConfigError("stub script has no reply for " + stub_key(tag, record_id));
}

std::shared_ptr<StubScript> StubScript::from_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open stub script " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("stub script " + path + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("stub script " + path + ": expected an object");
  auto script = std::make_shared<StubScript>();
  if (auto it = doc.find("default"); it != doc.end()) {
    if (!it->is_string()) throw ConfigError("stub script: 'default' must be a string");
    script->set_default(it->get<std::string>());
  }
  if (auto it = doc.find("replies"); it != doc.end()) {
    if (!it->is_object()) throw ConfigError("stub script: 'replies' must be an object");
    for (const auto& [key, value] : it->items()) {
      const auto bar = key.find('|');
      const std::string tag = key.substr(0, bar);
      const std::string rec = bar == std::string::npos ? std::string() : key.substr(bar + 1);
      if (value.is_string()) {
        script->push(tag, rec, value.get<std::string>());
      } else if (value.is_array()) {
        for (const auto& v : value) {
          if (!v.is_string()) throw ConfigError("stub script: replies must be strings");
          script->push(tag, rec, v.get<std::string>());
        }
      } else {
        throw ConfigError("stub script: reply for '" + key + "' must be a string or list");
      }
    }
  }
  return script;
}

ChatClient::ChatClient(EndpointConfig endpoint, std::unique_ptr<Transport> transport,
                       RetryPolicy retry)
    : endpoint_(std::move(endpoint)), transport_(std::move(transport)), retry_(retry) {
  if (!transport_) throw ConfigError("live client needs a transport");
  if (retry_.max_attempts < 1) throw ConfigError("retry policy needs at least one attempt");
}

ChatClient::ChatClient(std::shared_ptr<StubScript> script, std::unique_ptr<Transport> transport)
    : transport_(std::move(transport)), script_(std::move(script)) {
  if (!script_) throw ConfigError("stub client needs a script");
}

std::vector<std::chrono::milliseconds> ChatClient::backoff_log() const {
  std::lock_guard lock(mu_);
  return backoff_log_;
}

std::vector<CallLogEntry> ChatClient::call_log() const {
  std::lock_guard lock(mu_);
  return call_log_;
}

void ChatClient::record(const ChatRequest& req, const ChatResponse& resp) {
  std::lock_guard lock(mu_);
  call_log_.push_back({req.tag, req.record_id, resp.attempts, resp.latency_ms,
                       resp.prompt_tokens, resp.completion_tokens});
}

ChatResponse ChatClient::complete(const ChatRequest& req) {
  if (script_) {
    ChatResponse resp;
    resp.text = script_->reply_for(req.tag, req.record_id);
    resp.attempts = 1;
    record(req, resp);
    return resp;
  }
  return complete_live(req);
}

ChatResponse ChatClient::complete_live(const ChatRequest& req) {
  if (endpoint_.api_key.empty()) {
    throw ConfigError("no API key: set DRIFTLENS_API_KEY or OPENAI_API_KEY");
  }
  const std::size_t cap = std::max<std::size_t>(1, endpoint_.max_in_flight);
  {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return in_flight_ < cap; });
    ++in_flight_;
  }
  struct Release {
    ChatClient* self;
    ~Release() {
      {
        std::lock_guard lock(self->mu_);
        --self->in_flight_;
      }
      self->cv_.notify_one();
    }
  } release{this};

  const std::string url = endpoint_.completions_url();
  const std::string body = encode_request(req);
  const std::map<std::string, std::string> headers = {
      {"Authorization", "Bearer " + endpoint_.api_key},
      {"Content-Type", "application/json"}};
  const auto started = std::chrono::steady_clock::now();
  int last_status = 0;
  std::string last_body;
  for (int attempt = 1; attempt <= retry_.max_attempts; ++attempt) {
    const HttpResponse http = transport_->post(url, headers, body);
    last_status = http.status;
    last_body = http.body;
    if (http.status >= 200 && http.status < 300) {
      ChatResponse resp = decode_response(http.body);
      resp.attempts = attempt;
      resp.latency_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - started)
                            .count();
      record(req, resp);
      return resp;
    }
    if (http.status == 401 || http.status == 403) {
      throw ConfigError("endpoint rejected the credentials (HTTP " +
                        std::to_string(http.status) + ")");
    }
    if (!retryable(http.status)) break;
    if (attempt == retry_.max_attempts) break;
    const auto delay = retry_.delay_for_attempt(attempt);
    {
      std::lock_guard lock(mu_);
      backoff_log_.push_back(delay);
    }
    if (sleeper_) {
      sleeper_(delay);
    } else {
      std::this_thread::sleep_for(delay);
    }
  }
  std::string detail = last_body.substr(0, 200);
  throw TransportError("chat request to " + url + " failed with status " +
                           std::to_string(last_status) +
                           (detail.empty() ? std::string() : ": " + detail),
                       last_status);
}

std::string ChatClient::encode_request(const ChatRequest& req) {
  json messages = json::array();
  if (!req.system.empty()) messages.push_back({{"role", "system"}, {"content", req.system}});
  for (const auto& t : req.turns) messages.push_back({{"role", t.role}, {"content", t.content}});
  json body = {{"model", req.model}, {"messages", messages}, {"temperature", req.temperature}};
  return body.dump(-1, ' ', false, json::error_handler_t::replace);
}

ChatResponse ChatClient::decode_response(const std::string& body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::exception& e) {
    throw DataError(std::string("response is not JSON: ") + e.what());
  }
  ChatResponse resp;
  const auto* choices = doc.is_object() && doc.contains("choices") ? &doc["choices"] : nullptr;
  if (!choices || !choices->is_array() || choices->empty()) {
    throw DataError("response has no choices");
  }
  const auto& first = (*choices)[0];
  if (!first.contains("message") || !first["message"].contains("content") ||
      !first["message"]["content"].is_string()) {
    throw DataError("response choice has no message content");
  }
  resp.text = first["message"]["content"].get<std::string>();
  if (doc.contains("usage") && doc["usage"].is_object()) {
    const auto& u = doc["usage"];
    if (u.contains("prompt_tokens") && u["prompt_tokens"].is_number_integer()) {
      resp.prompt_tokens = u["prompt_tokens"].get<long>();
    }
    if (u.contains("completion_tokens") && u["completion_tokens"].is_number_integer()) {
      resp.completion_tokens = u["completion_tokens"].get<long>();
    }
  }
  return resp;
}

std::string_view to_string(ParsePath p) {
  switch (p) {
    case ParsePath::json: return "json";
    case ParsePath::marker: return "marker";
    case ParsePath::regex_fallback: return "regex_fallback";
    case ParsePath::failed: return "failed";
    case ParsePath::direct: return "direct";
  }
  return "";
}

std::optional<ParsePath> parse_parse_path(std::string_view s) {
  for (auto p : {ParsePath::json, ParsePath::marker, ParsePath::regex_fallback,
                 ParsePath::failed, ParsePath::direct}) {
    if (to_string(p) == s) return p;
  }
  return std::nullopt;
}

namespace {

std::optional<Label> label_word(std::string_view w) {
  const auto l = text::to_lower(text::trim(w));
  if (l == "defective") return Label::defective;
  if (l == "benign") return Label::benign;
  return std::nullopt;
}

// End of the balanced object starting at `open`, honoring JSON strings.
std::optional<std::size_t> object_end(std::string_view s, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = open; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}' && --depth == 0) {
      return i;
    }
  }
  return std::nullopt;
}

std::optional<ParsedPrediction> parse_json_shape(std::string_view raw) {
  std::optional<ParsedPrediction> found;
  std::size_t i = 0;
  while ((i = raw.find('{', i)) != std::string_view::npos) {
    auto end = object_end(raw, i);
    if (!end) {
      ++i;
      continue;
    }
    json obj = json::parse(raw.substr(i, *end - i + 1), nullptr, false);
    bool used = false;
    if (obj.is_object()) {
      for (const auto& [key, value] : obj.items()) {
        if (text::to_lower(key) != "prediction" || !value.is_string()) continue;
        auto label = label_word(value.get<std::string>());
        if (!label) continue;
        ParsedPrediction p;
        p.label = label;
        p.parse_path = ParsePath::json;
        for (const auto& [k2, v2] : obj.items()) {
          if (text::to_lower(k2) == "explanation" && v2.is_string()) {
            p.explanation = v2.get<std::string>();
          }
        }
        found = std::move(p);  // the last well-formed object wins
        used = true;
      }
    }
    i = used ? *end + 1 : i + 1;
  }
  return found;
}

std::string_view strip_decoration(std::string_view s) {
  s = text::trim(s);
  while (!s.empty() && (s.front() == '*' || s.front() == '<' || s.front() == '[' ||
                        s.front() == '`' || s.front() == ' ')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == '*' || s.back() == '>' || s.back() == ']' ||
                        s.back() == '`' || s.back() == '.' || s.back() == ' ')) {
    s.remove_suffix(1);
  }
  return s;
}

// `rest` of a `### <key>:` line, if `line` is one.
std::optional<std::string_view> marker_value(std::string_view line, std::string_view key) {
  line = text::trim(line);
  if (line.substr(0, 3) != "###") return std::nullopt;
  line.remove_prefix(3);
  while (!line.empty() && (line.front() == '#' || line.front() == ' ' || line.front() == '*')) {
    line.remove_prefix(1);
  }
  if (!text::starts_with_ci(line, key)) return std::nullopt;
  line.remove_prefix(key.size());
  while (!line.empty() && (line.front() == '*' || line.front() == ' ')) line.remove_prefix(1);
  if (line.empty() || line.front() != ':') return std::nullopt;
  line.remove_prefix(1);
  return line;
}

std::optional<ParsedPrediction> parse_markers(std::string_view raw) {
  std::optional<ParsedPrediction> found;
  std::optional<double> confidence;
  for (const auto& line : text::normalize_lines(raw)) {
    if (auto v = marker_value(line, "final prediction")) {
      if (auto label = label_word(strip_decoration(*v))) {
        ParsedPrediction p;
        p.label = label;
        p.parse_path = ParsePath::marker;
        found = std::move(p);
        confidence.reset();
      }
    } else if (auto c = marker_value(line, "confidence")) {
      std::string value(strip_decoration(*c));
      if (!value.empty() && value.back() == '%') value.pop_back();
      char* end = nullptr;
      const double pct = std::strtod(value.c_str(), &end);
      const bool numeric = end && end != value.c_str() &&
                           text::trim(std::string_view(end)).empty();
      if (numeric && std::isfinite(pct) && pct >= 0 && pct <= 100) {
        confidence = pct / 100.0;
      } else {
        confidence.reset();
      }
    }
  }
  if (found) found->confidence = confidence;
  return found;
}

std::optional<ParsedPrediction> parse_fallback(std::string_view raw) {
  std::string low = text::to_lower(raw);
  for (std::string_view neg : {"non-defective", "non defective", "not defective"}) {
    std::size_t at = 0;
    while ((at = low.find(neg, at)) != std::string::npos) {
      low.replace(at, neg.size(), "benign");
      at += 6;
    }
  }
  std::optional<Label> last;
  std::size_t i = 0;
  while (i < low.size()) {
    const unsigned char c = static_cast<unsigned char>(low[i]);
    if (!std::isalnum(c) && c != '_') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < low.size() &&
           (std::isalnum(static_cast<unsigned char>(low[j])) || low[j] == '_')) {
      ++j;
    }
    const std::string_view word(low.data() + i, j - i);
    if (word == "defective") last = Label::defective;
    if (word == "benign") last = Label::benign;
    i = j;
  }
  if (!last) return std::nullopt;
  ParsedPrediction p;
  p.label = last;
  p.parse_path = ParsePath::regex_fallback;
  return p;
}

}  // namespace

ParsedPrediction parse_prediction(std::string_view raw, ExpectFormat expect) {
  std::optional<ParsedPrediction> p;
  if (expect == ExpectFormat::json_shape) {
    p = parse_json_shape(raw);
    if (!p) p = parse_markers(raw);
  } else {
    p = parse_markers(raw);
    if (!p) p = parse_json_shape(raw);
  }
  if (!p) p = parse_fallback(raw);
  if (!p) return ParsedPrediction{};
  return *p;
}

}  // namespace driftlens
