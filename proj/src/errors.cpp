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

#include "krrtext/errors.hpp"

namespace krrtext {

std::string_view to_string(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::usage:
      return "usage";
    case ErrorCategory::io:
      return "io";
    case ErrorCategory::parameter:
      return "parameter";
    case ErrorCategory::validation:
      return "validation";
    case ErrorCategory::config:
      return "config";
    case ErrorCategory::transport:
      return "transport";
    case ErrorCategory::protocol:
      return "protocol";
  }
  return "unknown";
}

}  // namespace krrtext
