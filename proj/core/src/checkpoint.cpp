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

#include "ckge/checkpoint.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include "ckge/error.hpp"
#include "ckge/hash.hpp"

namespace ckge {

namespace {

constexpr std::string_view kMagic = "ckge-checkpoint";

void write_table(std::ostringstream& out, const char* tag, const bayes::GaussianEmbeddingTable& t) {
  const auto ids = t.ids();
  out << tag << ' ' << ids.size() << '\n';
  for (auto id : ids) {
    out << id;
    for (double v : t.mean(id)) out << ' ' << format_double(v);
    for (double v : t.precision(id)) out << ' ' << format_double(v);
    out << '\n';
  }
}

std::vector<std::string> words(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string w;
  while (ss >> w) out.push_back(w);
  return out;
}

class Reader {
 public:
  Reader(std::string body, std::string path) : in_(std::move(body)), path_(std::move(path)) {}

  std::vector<std::string> expect(std::string_view tag, std::size_t fields) {
    auto w = next();
    if (w.empty() || w[0] != tag || w.size() != fields + 1) {
      fail("expected '" + std::string(tag) + "' line");
    }
    return w;
  }

  std::vector<std::string> next() {
    if (!pending_.empty()) return std::exchange(pending_, {});
    std::string line;
    if (!std::getline(in_, line)) fail("unexpected end of file");
    return words(line);
  }

  void unread(std::vector<std::string> w) { pending_ = std::move(w); }

  std::size_t count(const std::string& s) {
    try {
      std::size_t pos = 0;
      const auto v = std::stoull(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      fail("bad integer '" + s + "'");
    }
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw DataError("checkpoint " + path_ + ": " + what);
  }

 private:
  std::istringstream in_;
  std::string path_;
  std::vector<std::string> pending_;
};

void read_table(Reader& r, const char* tag, std::size_t dim, bayes::GaussianEmbeddingTable& table) {
  const auto n = r.count(r.expect(tag, 1)[1]);
  std::vector<double> mean(dim), prec(dim);
  for (std::size_t i = 0; i < n; ++i) {
    const auto w = r.next();
    if (w.size() != 1 + 2 * dim) r.fail(std::string("short row in ") + tag + " table");
    const auto id = r.count(w[0]);
    try {
      for (std::size_t k = 0; k < dim; ++k) {
        mean[k] = parse_double(w[1 + k]);
        prec[k] = parse_double(w[1 + dim + k]);
      }
    } catch (const DataError& e) {
      r.fail(e.what());
    }
    table.set(static_cast<bayes::Id>(id), mean, prec);
  }
  table.check_invariants();
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const bayes::BayesianStore& store,
                     const CheckpointMeta& meta) {
  std::ostringstream body;
  body << kMagic << ' ' << meta.version << '\n';
  body << "snapshot " << meta.snapshot << '\n';
  body << "vocabulary " << meta.vocabulary << '\n';
  body << "dim " << store.entities.dim() << '\n';
  for (const auto& [k, v] : meta.hyperparameters) body << "hp " << k << ' ' << v << '\n';
  write_table(body, "entities", store.entities);
  write_table(body, "relations", store.relations);
  const std::string text = body.str();

  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write checkpoint " + path.string());
  out << text << "checksum " << fnv1a_hex(text) << '\n';
  if (!out) throw DataError("failed writing checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string all = ss.str();

  // Trailer first: a truncated file never carries a valid checksum line.
  const auto marker = all.rfind("checksum ");
  if (marker == std::string::npos || (marker > 0 && all[marker - 1] != '\n')) {
    throw DataError("checkpoint " + path.string() + ": missing checksum (truncated?)");
  }
  auto trailer = all.substr(marker + 9);
  while (!trailer.empty() && (trailer.back() == '\n' || trailer.back() == '\r')) trailer.pop_back();
  const std::string body = all.substr(0, marker);
  if (fnv1a_hex(body) != trailer) {
    throw DataError("checkpoint " + path.string() + ": checksum mismatch");
  }

  Reader r(body, path.string());
  const auto head = r.expect(kMagic, 1);
  CheckpointMeta meta;
  meta.version = static_cast<int>(r.count(head[1]));
  if (meta.version != kCheckpointVersion) {
    r.fail("unsupported version " + head[1]);
  }
  meta.snapshot = r.count(r.expect("snapshot", 1)[1]);
  meta.vocabulary = r.expect("vocabulary", 1)[1];
  const auto dim = r.count(r.expect("dim", 1)[1]);
  if (dim == 0) r.fail("dimension 0");

  // hp lines until the entity table.
  std::vector<std::string> w;
  while (true) {
    w = r.next();
    if (w.empty()) r.fail("blank line in header");
    if (w[0] != "hp") break;
    if (w.size() != 3) r.fail("malformed hp line");
    meta.hyperparameters.emplace_back(w[1], w[2]);
  }
  r.unread(std::move(w));

  Checkpoint cp{meta, bayes::BayesianStore(dim)};
  read_table(r, "entities", dim, cp.store.entities);
  read_table(r, "relations", dim, cp.store.relations);
  return cp;
}

}  // namespace ckge
