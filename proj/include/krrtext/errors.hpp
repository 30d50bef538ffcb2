// Copyright 2026 The krrtext Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef KRRTEXT_ERRORS_HPP_
#define KRRTEXT_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace krrtext {

// Machine-readable failure categories. The CLI maps these to exit codes:
// usage -> 2, io -> 3, transport -> 4, everything else -> 1.
enum class ErrorCategory {
  usage,
  io,
  parameter,
  validation,
  config,
  transport,
  protocol,
};

std::string_view to_string(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

// Bad numeric argument or out-of-range input to a closed-form computation.
class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& message)
      : Error(ErrorCategory::parameter, message) {}
};

// Input data violates a documented invariant (strict-mode failures included).
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message)
      : Error(ErrorCategory::validation, message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message)
      : Error(ErrorCategory::io, message) {}
};

// Restorer/embedder configuration is unusable (includes HTTP 4xx responses).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message)
      : Error(ErrorCategory::config, message) {}
};

// The remote endpoint could not be reached after retries (5xx, timeouts).
class TransportError : public Error {
 public:
  explicit TransportError(const std::string& message)
      : Error(ErrorCategory::transport, message) {}
};

// The endpoint answered but the payload does not match the expected schema.
// Carries the raw payload for audit.
class ProtocolError : public Error {
 public:
  ProtocolError(const std::string& message, std::string raw_payload)
      : Error(ErrorCategory::protocol, message),
        raw_payload_(std::move(raw_payload)) {}

  const std::string& raw_payload() const { return raw_payload_; }

 private:
  std::string raw_payload_;
};

}  // namespace krrtext

#endif  // KRRTEXT_ERRORS_HPP_
