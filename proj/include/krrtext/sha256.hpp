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

#ifndef KRRTEXT_SHA256_HPP_
#define KRRTEXT_SHA256_HPP_

#include <string>
#include <string_view>

namespace krrtext {

// FIPS 180-4 SHA-256, lowercase hex digest. Used to fingerprint manifest
// inputs; not a general-purpose crypto interface.
std::string sha256_hex(std::string_view data);
std::string sha256_file_hex(const std::string& path);

}  // namespace krrtext

#endif  // KRRTEXT_SHA256_HPP_
