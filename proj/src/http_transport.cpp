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

#include "httplib.h"

#include "driftlens/error.hpp"
#include "driftlens/llm_client.hpp"

namespace driftlens {

namespace {

class HttplibTransport final : public Transport {
 public:
  explicit HttplibTransport(std::chrono::seconds timeout) : timeout_(timeout) {}

  HttpResponse post(const std::string& url, const std::map<std::string, std::string>& headers,
                    const std::string& body) override {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw ConfigError("invalid endpoint URL " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    const std::string origin = url.substr(0, path_start);
    const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (url.rfind("https://", 0) == 0) {
      throw ConfigError("built without TLS support; cannot reach " + origin);
    }
#endif
    httplib::Client client(origin);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    client.set_write_timeout(timeout_);
    client.set_follow_location(true);

    httplib::Headers h;
    std::string content_type = "application/json";
    for (const auto& [k, v] : headers) {
      if (k == "Content-Type") {
        content_type = v;
      } else {
        h.emplace(k, v);
      }
    }
    HttpResponse out;
    auto res = client.Post(path, h, body, content_type);
    if (!res) return out;  // status 0: connection-level failure
    out.status = res->status;
    out.body = res->body;
    for (const auto& [k, v] : res->headers) out.headers[k] = v;
    return out;
  }

 private:
  std::chrono::seconds timeout_;
};

}  // namespace

std::unique_ptr<Transport> make_http_transport(std::chrono::seconds timeout) {
  return std::make_unique<HttplibTransport>(timeout);
}

}  // namespace driftlens
