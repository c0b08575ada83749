//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "g2g/tensorcore/layers.h"

#include <algorithm>
#include <numeric>

namespace g2g {
namespace {

bool row_less(const Mat &m, int a, int b) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    if (m(a, c) != m(b, c))
      return m(a, c) < m(b, c);
  }
  return false;
}

struct Attended {
  Var context;
  std::vector<Var> weights;
};

Attended attend(Var projected, std::span<const int> query_group,
                const SourceBlocks &src) {
  const int groups = src.groups();
  if (groups < 0 || src.offset.back() != src.vectors.rows())
    throw ShapeError("attention: source offsets do not cover the vectors");
  std::vector<std::vector<int>> members(groups);
  for (std::size_t q = 0; q < query_group.size(); ++q) {
    if (query_group[q] < 0 || query_group[q] >= groups)
      throw ShapeError("attention: query group out of range");
    members[query_group[q]].push_back(static_cast<int>(q));
  }
  Attended out;
  out.weights.resize(groups);
  std::vector<Var> parts;
  std::vector<int> position(query_group.size());
  int row = 0;
  for (int g = 0; g < groups; ++g) {
    if (members[g].empty())
      continue;
    int count = src.offset[g + 1] - src.offset[g];
    if (count <= 0)
      throw ShapeError("attention: empty source set");
    Var x = slice_rows(src.vectors, src.offset[g], count);
    Var q = gather_rows(projected, members[g]);
    Var w = softmax_rows(matmul_nt(q, x));
    out.weights[g] = w;
    parts.push_back(matmul(w, x));
    for (int m: members[g])
      position[m] = row++;
  }
  if (parts.empty())
    throw ShapeError("attention: no queries");
  out.context = gather_rows(concat_rows(parts), position);
  return out;
}

}  // namespace

Linear Linear::create(ParamStore &store, const std::string &name,
                      Eigen::Index in, Eigen::Index out, bool with_bias,
                      std::mt19937_64 &rng) {
  Linear l;
  l.weight = &store.create(name + ".weight", in, out, Init::kGlorot, rng);
  if (with_bias)
    l.bias = &store.create(name + ".bias", 1, out, Init::kZero, rng);
  return l;
}

Var Linear::operator()(Tape &tape, Var x) const {
  Var y = matmul(x, tape.param(*weight));
  if (bias != nullptr)
    y = add(y, tape.param(*bias));
  return y;
}

Var Linear::embed(Tape &tape, std::span<const int> index) const {
  Var y = gather_rows(tape.param(*weight), index);
  if (bias != nullptr)
    y = add(y, tape.param(*bias));
  return y;
}

TreeGru TreeGru::create(ParamStore &store, const std::string &prefix,
                        Eigen::Index feature_dim, Eigen::Index hidden_dim,
                        std::mt19937_64 &rng) {
  TreeGru g;
  g.wz = Linear::create(store, prefix + ".wz", feature_dim, hidden_dim, true,
                        rng);
  g.uz = Linear::create(store, prefix + ".uz", hidden_dim, hidden_dim, false,
                        rng);
  g.wr = Linear::create(store, prefix + ".wr", feature_dim, hidden_dim, true,
                        rng);
  g.ur = Linear::create(store, prefix + ".ur", hidden_dim, hidden_dim, false,
                        rng);
  g.w = Linear::create(store, prefix + ".w", feature_dim, hidden_dim, true,
                       rng);
  g.u = Linear::create(store, prefix + ".u", hidden_dim, hidden_dim, false,
                       rng);
  return g;
}

GruFeatures gru_features(Tape &tape, const TreeGru &gru, Var features) {
  return { gru.wz(tape, features), gru.wr(tape, features),
           gru.w(tape, features) };
}

GruFeatures gru_features(Tape &tape, const TreeGru &gru,
                         std::span<const int> labels) {
  return { gru.wz.embed(tape, labels), gru.wr.embed(tape, labels),
           gru.w.embed(tape, labels) };
}

Var tree_gru(Tape &tape, const TreeGru &gru, Var features, Var h,
             const InboundSets &inbound) {
  return tree_gru(tape, gru, gru_features(tape, gru, features), h, inbound);
}

Var tree_gru(Tape &tape, const TreeGru &gru, const GruFeatures &features,
             Var h, const InboundSets &inbound) {
  if (inbound.messages.size() != inbound.target.size())
    throw ShapeError("tree_gru: inbound lists differ in length");
  const Eigen::Index rows = features.update.rows();
  const Mat &hv = h.value();
  std::vector<int> order(inbound.messages.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (inbound.target[k] < 0 || inbound.target[k] >= rows
        || inbound.messages[k] < 0 || inbound.messages[k] >= hv.rows())
      throw ShapeError("tree_gru: inbound index out of range");
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (inbound.target[a] != inbound.target[b])
      return inbound.target[a] < inbound.target[b];
    return row_less(hv, inbound.messages[a], inbound.messages[b]);
  });
  std::vector<int> messages, target;
  messages.reserve(order.size());
  target.reserve(order.size());
  for (int k: order) {
    messages.push_back(inbound.messages[k]);
    target.push_back(inbound.target[k]);
  }

  Var hm = gather_rows(h, messages);
  Var s = scatter_add_rows(hm, target, rows);
  Var z = sigmoid(add(features.update, gru.uz(tape, s)));
  Var r = sigmoid(add(gather_rows(features.reset, target), gru.ur(tape, hm)));
  Var gated = scatter_add_rows(mul(r, hm), target, rows);
  Var candidate = tanh(add(features.candidate, gru.u(tape, gated)));
  return add(mul(one_minus(z), s), mul(z, candidate));
}

BilinearAttention BilinearAttention::create(ParamStore &store,
                                            const std::string &prefix,
                                            Eigen::Index query_dim,
                                            Eigen::Index source_dim,
                                            std::mt19937_64 &rng) {
  BilinearAttention a;
  a.tree_matrix = &store.create(prefix + ".tree", query_dim, source_dim,
                                Init::kGlorot, rng);
  a.graph_matrix = &store.create(prefix + ".graph", query_dim, source_dim,
                                 Init::kGlorot, rng);
  return a;
}

AttentionResult bilinear_attention(Tape &tape, const BilinearAttention &att,
                                   Var queries,
                                   std::span<const int> query_group,
                                   const SourceBlocks &tree,
                                   const SourceBlocks &graph) {
  if (static_cast<Eigen::Index>(query_group.size()) != queries.rows())
    throw ShapeError("attention: one group per query required");
  Attended t = attend(matmul(queries, tape.param(*att.tree_matrix)),
                      query_group, tree);
  Attended g = attend(matmul(queries, tape.param(*att.graph_matrix)),
                      query_group, graph);
  AttentionResult out;
  Var parts[] = { t.context, g.context };
  out.context = concat_cols(parts);
  out.tree_weights = std::move(t.weights);
  out.graph_weights = std::move(g.weights);
  return out;
}

}  // namespace g2g
