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

#include "ckge/embedding_table.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ckge/error.hpp"

namespace ckge {

EmbeddingTable::EmbeddingTable(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw ConfigError("embedding dimension must be >= 1");
}

std::span<double> EmbeddingTable::add(Id id) {
  if (contains(id)) throw ConfigError("embedding id " + std::to_string(id) + " already present");
  if (id >= present_.size()) {
    present_.resize(static_cast<std::size_t>(id) + 1, 0);
    data_.resize(present_.size() * dim_, 0.0);
  }
  present_[id] = 1;
  ++count_;
  auto r = row(id);
  std::fill(r.begin(), r.end(), 0.0);
  return r;
}

void EmbeddingTable::set(Id id, std::span<const double> values) {
  if (values.size() != dim_) throw ConfigError("embedding row has wrong dimension");
  if (!contains(id)) add(id);
  std::copy(values.begin(), values.end(), row(id).begin());
}

std::span<double> EmbeddingTable::row(Id id) {
  if (!contains(id)) throw ConfigError("embedding id " + std::to_string(id) + " not present");
  return {data_.data() + static_cast<std::size_t>(id) * dim_, dim_};
}

std::span<const double> EmbeddingTable::row(Id id) const {
  if (!contains(id)) throw ConfigError("embedding id " + std::to_string(id) + " not present");
  return {data_.data() + static_cast<std::size_t>(id) * dim_, dim_};
}

std::vector<EmbeddingTable::Id> EmbeddingTable::ids() const {
  std::vector<Id> out;
  out.reserve(count_);
  for (Id i = 0; i < present_.size(); ++i) {
    if (present_[i]) out.push_back(i);
  }
  return out;
}

std::span<double> SparseGradient::row(Id id) {
  auto [it, inserted] = slot_.try_emplace(id, ids_.size());
  if (inserted) {
    ids_.push_back(id);
    values_.resize(values_.size() + dim_, 0.0);
  }
  return {values_.data() + it->second * dim_, dim_};
}

std::span<const double> SparseGradient::row(Id id) const {
  auto it = slot_.find(id);
  if (it == slot_.end()) throw ConfigError("gradient row " + std::to_string(id) + " absent");
  return {values_.data() + it->second * dim_, dim_};
}

void SparseGradient::accumulate(Id id, std::span<const double> g, double scale) {
  auto r = row(id);
  for (std::size_t i = 0; i < dim_; ++i) r[i] += scale * g[i];
}

void SparseGradient::merge(const SparseGradient& other, double scale) {
  for (std::size_t s = 0; s < other.ids_.size(); ++s) accumulate(other.ids_[s], other.row_at(s), scale);
}

bool SparseGradient::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace ckge
