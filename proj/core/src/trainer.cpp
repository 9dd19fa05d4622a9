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

#include "ckge/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "ckge/error.hpp"
#include "ckge/kg_core.hpp"

namespace ckge::train {

TrainState::TrainState(std::size_t dim)
    : entities(dim),
      relations(dim),
      entity_moments(dim),
      relation_moments(dim),
      proxy_moments(dim) {}

TrainState TrainState::from_prior(const bayes::BayesianStore& store,
                                  std::span<const EntityId> entities,
                                  std::span<const RelationId> relations) {
  TrainState s(store.entities.dim());
  for (EntityId e : entities) s.entities.set(e, store.entities.mean(e));
  for (RelationId r : relations) s.relations.set(r, store.relations.mean(r));
  return s;
}

void TrainState::record_loss(double total) {
  if (loss_ring.size() < kLossRing) {
    loss_ring.push_back(total);
  } else {
    loss_ring[ring_next] = total;
  }
  ring_next = (ring_next + 1) % kLossRing;
}

std::mt19937_64 make_stream(std::uint64_t seed, SnapshotIndex snapshot, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(snapshot), stream};
  return std::mt19937_64(seq);
}

namespace {

void require_finite(double loss, const SparseGradient& g, const char* term) {
  if (!std::isfinite(loss) || !g.all_finite()) {
    throw NumericError(std::string("non-finite value in ") + term + " (loss " + std::to_string(loss) + ")");
  }
}

std::vector<EntityId> batch_entities(std::span<const TrainingPair> batch) {
  std::vector<EntityId> out;
  out.reserve(batch.size() * 2);
  for (const auto& p : batch) {
    out.push_back(p.positive.head);
    out.push_back(p.positive.tail);
  }
  return out;
}

}  // namespace

GradientBundle compute_gradients(const TrainState& state, std::span<const TrainingPair> batch,
                                 const TrainContext& ctx) {
  const std::size_t d = state.entities.dim();
  GradientBundle out{{}, SparseGradient(d), SparseGradient(d), SparseGradient(d)};

  if (ctx.switches.kge) {
    auto kge = kge_batch_gradients(batch, state.entities, state.relations, ctx.hp.margin);
    require_finite(kge.loss, kge.entities, "L_KGE");
    require_finite(kge.loss, kge.relations, "L_KGE");
    out.losses.kge = kge.loss;
    out.entities.merge(kge.entities);
    out.relations.merge(kge.relations);
  }

  if (ctx.switches.bayes && ctx.hp.beta > 0.0) {
    if (ctx.prior == nullptr) throw ConfigError("Bayesian term enabled without a prior");
    auto e = bayes::bayes_reg_loss(state.entities, ctx.prior->entities, ctx.hp.beta);
    auto r = bayes::bayes_reg_loss(state.relations, ctx.prior->relations, ctx.hp.beta);
    require_finite(e.loss, e.gradient, "L_Bayes");
    require_finite(r.loss, r.gradient, "L_Bayes");
    out.losses.bayes = e.loss + r.loss;
    out.entities.merge(e.gradient);
    out.relations.merge(r.gradient);
  }

  if (ctx.switches.fcc) {
    if (ctx.clusters == nullptr) throw ConfigError("contrastive term enabled without cluster state");
    const auto entities = batch_entities(batch);
    auto run = [&] {
      return cluster::fcc_loss(entities, state.entities, *ctx.clusters, ctx.hp.tau, ctx.hp.alpha_mode);
    };
    cluster::FccResult fcc;
    try {
      fcc = run();
    } catch (const cluster::UnassignedEntityError&) {
      cluster::reassign_entities(*ctx.clusters, state.entities, ctx.candidates);
      fcc = run();
    }
    require_finite(fcc.loss, fcc.entity_grad, "L_FCC");
    require_finite(fcc.loss, fcc.proxy_grad, "L_FCC");
    out.losses.fcc = fcc.loss;
    out.entities.merge(fcc.entity_grad);
    out.proxies.merge(fcc.proxy_grad);
  }
  return out;
}

LossValues train_step(TrainState& state, std::span<const TrainingPair> batch, const TrainContext& ctx) {
  auto grads = compute_gradients(state, batch, ctx);
  ++state.step;
  AdamConfig adam;
  adam.learning_rate = ctx.hp.learning_rate;
  adam_step(state.entities, grads.entities, state.entity_moments, adam, state.step);
  adam_step(state.relations, grads.relations, state.relation_moments, adam, state.step);
  if (ctx.clusters != nullptr && !grads.proxies.empty()) {
    adam_step(ctx.clusters->proxies, grads.proxies, state.proxy_moments, adam, state.step);
  }
  if (ctx.hp.normalize_entities) {
    for (auto id : grads.entities.ids()) {
      auto row = state.entities.row(id);
      double n = 0.0;
      for (double v : row) n += v * v;
      n = std::sqrt(n);
      if (n > 0.0) {
        for (auto& v : row) v /= n;
      }
    }
  }
  state.record_loss(grads.losses.total());
  return grads.losses;
}

TrainResult train_snapshot(TrainState& state, const TrainContext& ctx) {
  ctx.hp.validate();
  if (ctx.known == nullptr) throw ConfigError("train_snapshot: known-triple set missing");
  TrainResult result;
  if (ctx.triples.empty() || ctx.hp.epochs == 0) return result;
  if (ctx.candidates.empty()) throw ConfigError("train_snapshot: no candidate entities");

  auto shuffle_rng = make_stream(ctx.hp.seed, ctx.snapshot, kStreamShuffle);
  auto negative_rng = make_stream(ctx.hp.seed, ctx.snapshot, kStreamNegatives);

  std::vector<Triple> order(ctx.triples.begin(), ctx.triples.end());
  std::vector<TrainingPair> batch;
  batch.reserve(ctx.hp.batch_size * ctx.hp.negatives);

  for (std::size_t epoch = 0; epoch < ctx.hp.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    EpochRecord rec;
    rec.snapshot = ctx.snapshot;
    rec.epoch = epoch;
    for (std::size_t begin = 0; begin < order.size(); begin += ctx.hp.batch_size) {
      const std::size_t end = std::min(order.size(), begin + ctx.hp.batch_size);
      batch.clear();
      for (std::size_t i = begin; i < end; ++i) {
        for (std::size_t n = 0; n < ctx.hp.negatives; ++n) {
          batch.push_back({order[i], kg::sample_negative(order[i], ctx.candidates, *ctx.known, negative_rng)});
        }
      }
      const auto losses = train_step(state, batch, ctx);
      rec.losses.kge += losses.kge;
      rec.losses.bayes += losses.bayes;
      rec.losses.fcc += losses.fcc;
    }
    if (ctx.switches.fcc && ctx.clusters != nullptr && (epoch + 1) % ctx.hp.reassign_every == 0) {
      cluster::reassign_entities(*ctx.clusters, state.entities, ctx.candidates);
      cluster::update_centroids(*ctx.clusters, state.entities, ctx.hp.eta, ctx.freeze_old_centroids);
    }
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (ctx.on_epoch) ctx.on_epoch(rec);
    result.epochs.push_back(rec);
  }
  return result;
}

}  // namespace ckge::train
