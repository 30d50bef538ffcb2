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

#include "krrtext/manifest.hpp"

#include <fstream>

#include "krrtext/errors.hpp"
#include "krrtext/sha256.hpp"

namespace krrtext {

const char kToolVersion[] = "0.1.0";

nlohmann::json RunManifest::to_json() const {
  nlohmann::json object;
  object["tool"] = "krrtext";
  object["version"] = kToolVersion;
  object["subcommand"] = subcommand;
  object["params"] = params;
  nlohmann::json inputs = nlohmann::json::array();
  for (const std::string& path : input_paths) {
    inputs.push_back({{"path", path}, {"sha256", sha256_file_hex(path)}});
  }
  object["inputs"] = std::move(inputs);
  object["outputs"] = output_paths;
  return object;
}

std::string write_manifest(const RunManifest& manifest,
                           const std::string& output_path) {
  const std::string manifest_path = output_path + ".manifest.json";
  std::ofstream out(manifest_path, std::ios::binary);
  if (!out) throw IoError("cannot write manifest: " + manifest_path);
  out << manifest.to_json().dump(2) << '\n';
  if (!out) throw IoError("failed writing manifest: " + manifest_path);
  return manifest_path;
}

}  // namespace krrtext
