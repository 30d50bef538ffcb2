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

#ifndef KRRTEXT_MANIFEST_HPP_
#define KRRTEXT_MANIFEST_HPP_

#include <string>
#include <vector>

#include <json.hpp>

namespace krrtext {

// Audit record written next to every output: the parameters, seed and input
// digests a run actually used. Deliberately carries no timestamps so reruns
// with identical inputs produce byte-identical manifests.
struct RunManifest {
  std::string subcommand;
  nlohmann::json params = nlohmann::json::object();
  std::vector<std::string> input_paths;
  std::vector<std::string> output_paths;

  nlohmann::json to_json() const;  // hashes the inputs
};

// Writes the manifest as <output_path>.manifest.json.
std::string write_manifest(const RunManifest& manifest,
                           const std::string& output_path);

extern const char kToolVersion[];

}  // namespace krrtext

#endif  // KRRTEXT_MANIFEST_HPP_
