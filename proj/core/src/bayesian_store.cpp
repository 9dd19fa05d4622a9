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

#include "ckge/bayesian_store.hpp"

#include <cmath>
#include <string>

#include "ckge/error.hpp"
#include "ckge/hyperparameters.hpp"

namespace ckge {

AlphaMode parse_alpha_mode(const std::string& name) {
  if (name == "uniform") return AlphaMode::kUniform;
  if (name == "inverse-size" || name == "inverse_size") return AlphaMode::kInverseSize;
  throw ConfigError("unknown alpha mode '" + name + "' (expected uniform|inverse-size)");
}

std::string alpha_mode_name(AlphaMode mode) {
  return mode == AlphaMode::kUniform ? "uniform" : "inverse-size";
}

void Hyperparameters::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("invalid hyperparameter: ") + what);
  };
  require(dim >= 1, "dim >= 1");
  require(std::isfinite(margin) && margin >= 0.0, "margin >= 0");
  require(std::isfinite(lambda_obs) && lambda_obs >= 0.0, "lambda_obs >= 0");
  require(!lambda_obs_relation || (std::isfinite(*lambda_obs_relation) && *lambda_obs_relation >= 0.0),
          "lambda_obs_relation >= 0");
  require(std::isfinite(lambda_init) && lambda_init > 0.0, "lambda_init > 0");
  require(std::isfinite(beta) && beta >= 0.0, "beta >= 0");
  require(std::isfinite(tau) && tau > 0.0, "tau > 0");
  require(clusters >= 1, "clusters >= 1");
  require(eta >= 0.0 && eta <= 1.0, "0 <= eta <= 1");
  require(std::isfinite(learning_rate) && learning_rate > 0.0, "learning_rate > 0");
  require(batch_size >= 1, "batch_size >= 1");
  require(negatives >= 1, "negatives >= 1");
  require(reassign_every >= 1, "reassign_every >= 1");
  require(betweenness_pivots >= 1, "betweenness_pivots >= 1");
}

}  // namespace ckge

namespace ckge::bayes {

GaussianEmbeddingTable::GaussianEmbeddingTable(TableKind kind, std::size_t dim)
    : kind_(kind), mean_(dim), precision_(dim) {}

void GaussianEmbeddingTable::set(Id id, std::span<const double> mean,
                                 std::span<const double> precision) {
  mean_.set(id, mean);
  precision_.set(id, precision);
}

void GaussianEmbeddingTable::check_invariants() const {
  if (mean_.ids() != precision_.ids()) {
    throw InvariantError("mean and precision tables cover different ids");
  }
  for (Id id : precision_.ids()) {
    for (double p : precision_.row(id)) {
      if (!(p > 0.0)) {
        throw InvariantError("non-positive precision at id " + std::to_string(id));
      }
    }
  }
}

void init_new_ids(GaussianEmbeddingTable& table, std::span<const Id> new_ids, double lambda_init,
                  std::mt19937_64& rng) {
  if (!(lambda_init > 0.0)) throw ConfigError("lambda_init must be > 0");
  for (Id id : new_ids) {
    if (table.contains(id)) {
      throw ConfigError("init_new_ids: id " + std::to_string(id) + " already initialised");
    }
  }
  const double bound = 6.0 / std::sqrt(static_cast<double>(table.dim()));
  std::uniform_real_distribution<double> uniform(-bound, bound);
  std::vector<double> mean(table.dim());
  const std::vector<double> precision(table.dim(), lambda_init);
  for (Id id : new_ids) {
    for (auto& m : mean) m = uniform(rng);
    table.set(id, mean, precision);
  }
}

Posterior bayes_posterior_update(std::span<const double> prior_mean,
                                 std::span<const double> prior_precision,
                                 std::span<const double> observation, double lambda_obs) {
  Posterior p{{prior_mean.begin(), prior_mean.end()},
              {prior_precision.begin(), prior_precision.end()}};
  bayes_posterior_update_inplace(p.mean, p.precision, observation, lambda_obs);
  return p;
}

void bayes_posterior_update_inplace(std::span<double> mean, std::span<double> precision,
                                    std::span<const double> observation, double lambda_obs) {
  if (!(lambda_obs >= 0.0)) throw ConfigError("lambda_obs must be >= 0");
  if (mean.size() != precision.size() || mean.size() != observation.size()) {
    throw ConfigError("posterior update: dimension mismatch");
  }
  if (lambda_obs == 0.0) return;
  for (std::size_t i = 0; i < mean.size(); ++i) {
    if (!(precision[i] > 0.0)) throw InvariantError("posterior update: prior precision must be > 0");
    const double post = precision[i] + lambda_obs;
    mean[i] = (precision[i] * mean[i] + lambda_obs * observation[i]) / post;
    precision[i] = post;
  }
}

namespace {

void check_commit(const GaussianEmbeddingTable& table, const EmbeddingTable& trained,
                  std::span<const Id> observed) {
  if (trained.dim() != table.dim()) throw ConfigError("commit: dimension mismatch");
  for (Id id : observed) {
    if (!trained.contains(id)) {
      throw ConfigError("commit: no trained value for id " + std::to_string(id));
    }
    if (!table.contains(id)) throw ConfigError("commit: no prior for id " + std::to_string(id));
  }
}

}  // namespace

void snapshot_commit(GaussianEmbeddingTable& table, const EmbeddingTable& trained,
                     std::span<const Id> observed, double lambda_obs) {
  check_commit(table, trained, observed);
  for (Id id : observed) {
    bayes_posterior_update_inplace(table.mean(id), table.precision(id), trained.row(id), lambda_obs);
  }
}

void overwrite_commit(GaussianEmbeddingTable& table, const EmbeddingTable& trained,
                      std::span<const Id> observed) {
  check_commit(table, trained, observed);
  for (Id id : observed) {
    const auto src = trained.row(id);
    auto dst = table.mean(id);
    std::copy(src.begin(), src.end(), dst.begin());
  }
}

RegLoss bayes_reg_loss(const EmbeddingTable& current, const GaussianEmbeddingTable& prior,
                       double beta, std::span<const Id> ids) {
  if (current.dim() != prior.dim()) throw ConfigError("bayes_reg_loss: dimension mismatch");
  RegLoss out{0.0, SparseGradient(current.dim())};
  if (beta == 0.0) return out;
  for (Id id : ids) {
    if (!prior.contains(id)) {
      throw ConfigError("bayes_reg_loss: no prior for id " + std::to_string(id));
    }
    const auto x = current.row(id);
    const auto mu = prior.mean(id);
    const auto lam = prior.precision(id);
    auto g = out.gradient.row(id);
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (lam[i] < 0.0) throw InvariantError("bayes_reg_loss: negative precision");
      const double diff = x[i] - mu[i];
      out.loss += beta * lam[i] * diff * diff;
      g[i] = 2.0 * beta * lam[i] * diff;
    }
  }
  return out;
}

RegLoss bayes_reg_loss(const EmbeddingTable& current, const GaussianEmbeddingTable& prior,
                       double beta) {
  const auto ids = current.ids();
  return bayes_reg_loss(current, prior, beta, ids);
}

}  // namespace ckge::bayes
