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

#include "ckge/scoring.hpp"

#include <algorithm>
#include <cmath>

#include "ckge/error.hpp"

namespace ckge::train {

double transe_score(std::span<const double> h, std::span<const double> r,
                    std::span<const double> t) {
  double acc = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double d = h[i] + r[i] - t[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

double margin_loss(double pos, double neg, double margin) { return std::max(0.0, margin + pos - neg); }

namespace {

// Adds sign * (h + r - t)/||h + r - t|| to the h and r rows and its negation
// to the t row.
void add_score_gradient(const Triple& tr, double sign, const EmbeddingTable& entities,
                        const EmbeddingTable& relations, std::vector<double>& diff,
                        KgeGradients& out) {
  const auto h = entities.row(tr.head);
  const auto r = relations.row(tr.relation);
  const auto t = entities.row(tr.tail);
  double norm2 = 0.0;
  for (std::size_t i = 0; i < diff.size(); ++i) {
    diff[i] = h[i] + r[i] - t[i];
    norm2 += diff[i] * diff[i];
  }
  const double norm = std::sqrt(norm2);
  if (norm == 0.0) return;
  const double scale = sign / norm;
  out.entities.accumulate(tr.head, diff, scale);
  out.relations.accumulate(tr.relation, diff, scale);
  out.entities.accumulate(tr.tail, diff, -scale);
}

}  // namespace

KgeGradients kge_batch_gradients(std::span<const TrainingPair> batch, const EmbeddingTable& entities,
                                 const EmbeddingTable& relations, double margin) {
  if (entities.dim() != relations.dim()) throw ConfigError("entity/relation dimension mismatch");
  KgeGradients out{0.0, 0, SparseGradient(entities.dim()), SparseGradient(relations.dim())};
  std::vector<double> diff(entities.dim());
  for (const auto& pair : batch) {
    const auto& p = pair.positive;
    const auto& n = pair.negative;
    const double pos = transe_score(entities.row(p.head), relations.row(p.relation), entities.row(p.tail));
    const double neg = transe_score(entities.row(n.head), relations.row(n.relation), entities.row(n.tail));
    const double hinge = margin + pos - neg;
    if (hinge <= 0.0) continue;
    out.loss += hinge;
    ++out.active;
    add_score_gradient(p, +1.0, entities, relations, diff, out);
    add_score_gradient(n, -1.0, entities, relations, diff, out);
  }
  return out;
}

}  // namespace ckge::train
