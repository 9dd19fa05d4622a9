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

#ifndef CKGE_EMBEDDING_TABLE_HPP_
#define CKGE_EMBEDDING_TABLE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

namespace ckge {

// Dense row storage keyed by integer id with an explicit id domain. Rows for
// ids outside the domain are allocated but never read.
class EmbeddingTable {
 public:
  using Id = std::uint32_t;

  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dim);

  std::size_t dim() const { return dim_; }
  std::size_t capacity() const { return present_.size(); }
  std::size_t size() const { return count_; }
  bool contains(Id id) const { return id < present_.size() && present_[id] != 0; }

  // Adds `id` with a zero row. Throws ConfigError if already present.
  std::span<double> add(Id id);
  // Adds or overwrites.
  void set(Id id, std::span<const double> values);

  std::span<double> row(Id id);
  std::span<const double> row(Id id) const;

  // Ids in ascending order.
  std::vector<Id> ids() const;

  const std::vector<double>& raw() const { return data_; }

  friend bool operator==(const EmbeddingTable&, const EmbeddingTable&) = default;

 private:
  std::size_t dim_ = 0;
  std::size_t count_ = 0;
  std::vector<double> data_;
  std::vector<std::uint8_t> present_;
};

// Row-sparse gradient accumulator. Rows are kept in first-touch order so
// iteration is deterministic.
class SparseGradient {
 public:
  using Id = EmbeddingTable::Id;

  explicit SparseGradient(std::size_t dim = 0) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  bool empty() const { return ids_.empty(); }
  std::size_t rows() const { return ids_.size(); }
  const std::vector<Id>& ids() const { return ids_; }
  bool contains(Id id) const { return slot_.contains(id); }

  // Zero-initialised on first touch.
  std::span<double> row(Id id);
  std::span<const double> row(Id id) const;
  std::span<const double> row_at(std::size_t slot) const {
    return {values_.data() + slot * dim_, dim_};
  }

  void accumulate(Id id, std::span<const double> g, double scale = 1.0);
  void merge(const SparseGradient& other, double scale = 1.0);
  bool all_finite() const;

 private:
  std::size_t dim_;
  std::vector<Id> ids_;
  std::unordered_map<Id, std::size_t> slot_;
  std::vector<double> values_;
};

}  // namespace ckge

#endif  // CKGE_EMBEDDING_TABLE_HPP_
