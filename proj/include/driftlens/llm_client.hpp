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

#pragma once

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "driftlens/corpus.hpp"

namespace driftlens {

struct ChatTurn {
  std::string role;  // "user" or "assistant"
  std::string content;
};

struct ChatRequest {
  std::string model;
  std::string system;
  std::vector<ChatTurn> turns;
  double temperature = 0.0;
  // Stub lookup keys; never sent on the wire.
  std::string tag;
  std::string record_id;
};

struct ChatResponse {
  std::string text;
  int attempts = 0;
  double latency_ms = 0;
  std::optional<long> prompt_tokens;
  std::optional<long> completion_tokens;
};

struct HttpResponse {
  int status = 0;  // 0 = connection failure
  std::string body;
  std::map<std::string, std::string> headers;
};

// Minimal POST interface so the client can be driven by fakes.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpResponse post(const std::string& url,
                            const std::map<std::string, std::string>& headers,
                            const std::string& body) = 0;
};

// cpp-httplib backed transport (HTTPS when built with OpenSSL).
std::unique_ptr<Transport> make_http_transport(
    std::chrono::seconds timeout = std::chrono::seconds(120));

struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds initial_delay{1000};
  double multiplier = 2.0;
  std::chrono::milliseconds max_delay{30000};

  std::chrono::milliseconds delay_for_attempt(int attempt) const;  // attempt >= 1
};

inline constexpr std::string_view kDefaultBaseUrl = "https://api.llm7.io/v1";

struct EndpointConfig {
  std::string base_url = std::string(kDefaultBaseUrl);
  std::string api_key;
  std::size_t max_in_flight = 4;

  // DRIFTLENS_BASE_URL / DRIFTLENS_API_KEY, falling back to
  // OPENAI_BASE_URL / OPENAI_API_KEY.
  static EndpointConfig from_env();
  std::string completions_url() const;
};

// Canned replies keyed by (tag, record id), then tag alone, then default.
class StubScript {
 public:
  StubScript() = default;
  explicit StubScript(std::string default_reply) : default_(std::move(default_reply)) {}

  void set_default(std::string reply) { default_ = std::move(reply); }
  void set(std::string tag, std::string reply);
  void set(std::string tag, std::string record_id, std::string reply);
  // Replies consumed in order for a key; the last one repeats.
  void push(std::string tag, std::string record_id, std::string reply);

  std::string reply_for(const std::string& tag, const std::string& record_id);

  // {"default": "...", "replies": {"M5": "...", "judge|path/A.java": "..."}}
  static std::shared_ptr<StubScript> from_json_file(const std::string& path);

 private:
  std::optional<std::string> default_;
  std::map<std::string, std::vector<std::string>> replies_;
  std::map<std::string, std::size_t> cursor_;
  std::mutex mu_;
};

struct CallLogEntry {
  std::string tag;
  std::string record_id;
  int attempts = 0;
  double latency_ms = 0;
  std::optional<long> prompt_tokens;
  std::optional<long> completion_tokens;
};

// OpenAI-compatible chat client. Shareable across threads; the number of
// concurrent requests is capped by EndpointConfig::max_in_flight.
class ChatClient {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  // Live client over `transport`.
  ChatClient(EndpointConfig endpoint, std::unique_ptr<Transport> transport,
             RetryPolicy retry = {});
  // Offline client: replies come from `script`; `transport` (may be null)
  // is never touched.
  ChatClient(std::shared_ptr<StubScript> script,
             std::unique_ptr<Transport> transport = nullptr);

  ChatResponse complete(const ChatRequest& req);

  bool stub_mode() const { return script_ != nullptr; }
  void set_sleeper(Sleeper s) { sleeper_ = std::move(s); }
  std::vector<std::chrono::milliseconds> backoff_log() const;
  std::vector<CallLogEntry> call_log() const;

  // Request body as sent on the wire.
  static std::string encode_request(const ChatRequest& req);
  // First choice content; throws DataError when absent.
  static ChatResponse decode_response(const std::string& body);

 private:
  ChatResponse complete_live(const ChatRequest& req);
  void record(const ChatRequest& req, const ChatResponse& resp);

  EndpointConfig endpoint_;
  std::unique_ptr<Transport> transport_;
  RetryPolicy retry_;
  std::shared_ptr<StubScript> script_;
  Sleeper sleeper_;

  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::size_t in_flight_ = 0;
  std::vector<std::chrono::milliseconds> backoff_log_;
  std::vector<CallLogEntry> call_log_;
};

// `direct` marks labels that were not parsed from model text (baselines).
enum class ParsePath { json, marker, regex_fallback, failed, direct };
std::string_view to_string(ParsePath p);
std::optional<ParsePath> parse_parse_path(std::string_view s);

struct ParsedPrediction {
  std::optional<Label> label;  // absent iff parse_path == failed
  std::optional<double> confidence;
  std::optional<std::string> explanation;
  ParsePath parse_path = ParsePath::failed;

  bool ok() const { return parse_path != ParsePath::failed; }
};

enum class ExpectFormat { json_shape, judge_markers };

// Total parser: structured format first (the expected one, then the other),
// then the last standalone defective/benign token.
ParsedPrediction parse_prediction(std::string_view raw, ExpectFormat expect);

}  // namespace driftlens
