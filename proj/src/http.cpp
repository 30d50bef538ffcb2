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

#include "krrtext/http.hpp"

#include <cstdlib>
#include <thread>

#ifdef KRRTEXT_HAVE_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include "krrtext/errors.hpp"

namespace krrtext {

namespace {

// Splits "scheme://host[:port]/prefix" into the client origin and the path
// prefix requests are issued under.
void split_url(const std::string& url, std::string* origin,
               std::string* path_prefix) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("endpoint URL needs a scheme: " + url);
  }
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    *origin = url;
    path_prefix->clear();
  } else {
    *origin = url.substr(0, path_start);
    *path_prefix = url.substr(path_start);
    while (!path_prefix->empty() && path_prefix->back() == '/') {
      path_prefix->pop_back();
    }
  }
#ifndef KRRTEXT_HAVE_OPENSSL
  if (origin->rfind("https://", 0) == 0) {
    throw ConfigError("built without TLS support; https endpoints unavailable");
  }
#endif
}

}  // namespace

nlohmann::json post_json(const HttpEndpoint& endpoint,
                         const std::string& path_suffix,
                         const nlohmann::json& body) {
  std::string origin;
  std::string path_prefix;
  split_url(endpoint.base_url, &origin, &path_prefix);

  httplib::Client client(origin);
  const auto timeout = endpoint.request_timeout;
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  httplib::Headers headers;
  if (!endpoint.api_key_env.empty()) {
    const char* key = std::getenv(endpoint.api_key_env.c_str());
    if (key == nullptr || *key == '\0') {
      throw ConfigError("environment variable " + endpoint.api_key_env +
                        " is unset; it must hold the API key");
    }
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  const std::string payload = body.dump();
  const std::string path = path_prefix + path_suffix;
  std::string last_failure;

  for (int attempt = 0; attempt <= endpoint.max_retries; ++attempt) {
    if (attempt > 0) {
      auto delay = endpoint.retry_backoff * (1 << (attempt - 1));
      std::this_thread::sleep_for(delay);
    }
    httplib::Result result =
        client.Post(path, headers, payload, "application/json");
    if (!result) {
      last_failure = "transport failure: " + httplib::to_string(result.error());
      continue;  // retry
    }
    if (result->status >= 500) {
      last_failure = "server returned HTTP " + std::to_string(result->status);
      continue;  // retry
    }
    if (result->status >= 400) {
      throw ConfigError("endpoint rejected the request with HTTP " +
                        std::to_string(result->status) + ": " + result->body);
    }
    try {
      return nlohmann::json::parse(result->body);
    } catch (const nlohmann::json::parse_error& e) {
      throw ProtocolError(std::string("response is not valid JSON: ") + e.what(),
                          result->body);
    }
  }
  throw TransportError("request to " + endpoint.base_url + path_suffix +
                       " failed after " +
                       std::to_string(endpoint.max_retries + 1) +
                       " attempt(s): " + last_failure);
}

}  // namespace krrtext
