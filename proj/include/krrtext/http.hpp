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

#ifndef KRRTEXT_HTTP_HPP_
#define KRRTEXT_HTTP_HPP_

#include <chrono>
#include <string>

#include <json.hpp>

namespace krrtext {

// One OpenAI-compatible endpoint (chat completions, embeddings). The bearer
// token is read from the environment variable named by api_key_env and never
// stored in configs or manifests.
struct HttpEndpoint {
  std::string base_url;  // e.g. "https://api.openai.com/v1"
  std::string api_key_env;
  int max_retries = 3;
  std::chrono::milliseconds request_timeout{30000};
  std::chrono::milliseconds retry_backoff{250};
};

// POSTs JSON to base_url + path_suffix and returns the parsed response.
// 5xx and transport failures are retried up to max_retries with exponential
// backoff (delays are monotone nondecreasing); 4xx fails immediately as a
// ConfigError; an unparsable 2xx body raises ProtocolError carrying the raw
// payload.
nlohmann::json post_json(const HttpEndpoint& endpoint,
                         const std::string& path_suffix,
                         const nlohmann::json& body);

}  // namespace krrtext

#endif  // KRRTEXT_HTTP_HPP_
