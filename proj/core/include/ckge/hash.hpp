/* Copyright 2026 The ckge Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef CKGE_HASH_HPP_
#define CKGE_HASH_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace ckge {

// 64-bit FNV-1a. Used for manifest content hashes, vocabulary fingerprints
// and checkpoint trailers; not a cryptographic digest.
class Fnv1a {
 public:
  void update(std::string_view bytes) noexcept;
  std::uint64_t digest() const noexcept { return state_; }
  std::string hex() const;

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ull;
};

std::string fnv1a_hex(std::string_view bytes);
std::string hash_file(const std::filesystem::path& path);

// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double value);
double parse_double(std::string_view text);

}  // namespace ckge

#endif  // CKGE_HASH_HPP_
