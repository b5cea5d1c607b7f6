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

#include <stdexcept>
#include <string>

namespace driftlens {

// Bad flags, missing columns, missing prompt inputs, rejected credentials.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input data: duplicate paths, unparseable labels, broken CSV.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Endpoint unreachable or retries exhausted. `status` is the last HTTP
// status seen, 0 when the connection itself failed.
class TransportError : public std::runtime_error {
 public:
  TransportError(const std::string& what, int status)
      : std::runtime_error(what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

// Debate role schedule violated (e.g. judge asked with no history).
class OrchestrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace driftlens
