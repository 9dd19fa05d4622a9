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

// Shared fixtures for the unit and acceptance suites.

#ifndef CKGE_TESTS_SUPPORT_HPP_
#define CKGE_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ckge/embedding_table.hpp"

namespace ckge::testing {

inline std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng, double lo = -1.0,
                                         double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

inline EmbeddingTable random_table(std::size_t rows, std::size_t dim, std::mt19937_64& rng) {
  EmbeddingTable t(dim);
  for (std::uint32_t i = 0; i < rows; ++i) t.set(i, random_vector(dim, rng));
  return t;
}

// Relative error with an absolute floor so that values near zero compare
// sanely against finite differences.
inline double rel_err(double a, double b, double floor = 1e-6) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

// Collects analytic and numeric partials of one configuration and compares
// them as whole vectors: |g - g_fd| / max(|g|, |g_fd|).
struct GradientCheck {
  std::vector<double> analytic, numeric;
  void add(double a, double n) {
    analytic.push_back(a);
    numeric.push_back(n);
  }
  double rel_error() const {
    double diff = 0.0, na = 0.0, nn = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
      diff += (analytic[i] - numeric[i]) * (analytic[i] - numeric[i]);
      na += analytic[i] * analytic[i];
      nn += numeric[i] * numeric[i];
    }
    return std::sqrt(diff) / std::max({std::sqrt(na), std::sqrt(nn), 1e-6});
  }
};

// Central difference of f around table(id)[j].
inline double central_difference(EmbeddingTable& table, std::uint32_t id, std::size_t j, double h,
                                 const std::function<double()>& f) {
  auto row = table.row(id);
  const double x = row[j];
  row[j] = x + h;
  const double up = f();
  row[j] = x - h;
  const double down = f();
  row[j] = x;
  return (up - down) / (2.0 * h);
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("ckge_" + tag + "_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& s) const { return path_ / s; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace ckge::testing

#endif  // CKGE_TESTS_SUPPORT_HPP_
