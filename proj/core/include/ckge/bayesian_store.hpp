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

#ifndef CKGE_BAYESIAN_STORE_HPP_
#define CKGE_BAYESIAN_STORE_HPP_

#include <random>
#include <span>
#include <vector>

#include "ckge/embedding_table.hpp"

namespace ckge::bayes {

using Id = EmbeddingTable::Id;

enum class TableKind { kEntity, kRelation };

// Diagonal Gaussian per id: a mean row and a strictly positive precision row
// over the same id domain.
class GaussianEmbeddingTable {
 public:
  GaussianEmbeddingTable(TableKind kind, std::size_t dim);

  TableKind kind() const { return kind_; }
  std::size_t dim() const { return mean_.dim(); }
  bool contains(Id id) const { return mean_.contains(id); }
  std::vector<Id> ids() const { return mean_.ids(); }

  const EmbeddingTable& means() const { return mean_; }
  const EmbeddingTable& precisions() const { return precision_; }
  std::span<double> mean(Id id) { return mean_.row(id); }
  std::span<const double> mean(Id id) const { return mean_.row(id); }
  std::span<double> precision(Id id) { return precision_.row(id); }
  std::span<const double> precision(Id id) const { return precision_.row(id); }

  // Inserts or replaces an id. Used by checkpoint loading.
  void set(Id id, std::span<const double> mean, std::span<const double> precision);

  // Throws InvariantError unless every precision is > 0 and domains agree.
  void check_invariants() const;

  friend bool operator==(const GaussianEmbeddingTable&, const GaussianEmbeddingTable&) = default;

 private:
  TableKind kind_;
  EmbeddingTable mean_;
  EmbeddingTable precision_;
};

struct BayesianStore {
  GaussianEmbeddingTable entities;
  GaussianEmbeddingTable relations;

  explicit BayesianStore(std::size_t dim)
      : entities(TableKind::kEntity, dim), relations(TableKind::kRelation, dim) {}

  friend bool operator==(const BayesianStore&, const BayesianStore&) = default;
};

// Fresh priors: means ~ U(-6/sqrt(d), 6/sqrt(d)), precision lambda_init everywhere.
void init_new_ids(GaussianEmbeddingTable& table, std::span<const Id> new_ids, double lambda_init,
                  std::mt19937_64& rng);

struct Posterior {
  std::vector<double> mean;
  std::vector<double> precision;
};

// Conjugate update of a diagonal Gaussian prior by one observation with
// scalar precision lambda_obs:
//   precision' = precision + lambda_obs
//   mean'      = (precision * mean + lambda_obs * observation) / precision'
Posterior bayes_posterior_update(std::span<const double> prior_mean,
                                 std::span<const double> prior_precision,
                                 std::span<const double> observation, double lambda_obs);

// Same update applied in place.
void bayes_posterior_update_inplace(std::span<double> mean, std::span<double> precision,
                                    std::span<const double> observation, double lambda_obs);

// Commits trained values for the observed ids; every other id keeps its
// mean and precision bit for bit.
void snapshot_commit(GaussianEmbeddingTable& table, const EmbeddingTable& trained,
                     std::span<const Id> observed, double lambda_obs);

// Plain fine-tuning commit (Bayesian path disabled): observed means are
// replaced by the trained values, precisions untouched.
void overwrite_commit(GaussianEmbeddingTable& table, const EmbeddingTable& trained,
                      std::span<const Id> observed);

struct RegLoss {
  double loss = 0.0;
  SparseGradient gradient;
};

// loss = sum_i beta * || sqrt(prec_i) * (current_i - mean_i) ||^2 over `ids`,
// gradient 2 * beta * prec_i * (current_i - mean_i).
RegLoss bayes_reg_loss(const EmbeddingTable& current, const GaussianEmbeddingTable& prior,
                       double beta, std::span<const Id> ids);
RegLoss bayes_reg_loss(const EmbeddingTable& current, const GaussianEmbeddingTable& prior,
                       double beta);

}  // namespace ckge::bayes

#endif  // CKGE_BAYESIAN_STORE_HPP_
