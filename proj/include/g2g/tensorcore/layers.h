//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef G2G_TENSORCORE_LAYERS_H_
#define G2G_TENSORCORE_LAYERS_H_

#include <span>
#include <string>
#include <vector>

#include "g2g/tensorcore/params.h"
#include "g2g/tensorcore/tape.h"

namespace g2g {

/// y = x W (+ b). Weights are stored input-major (in x out).
struct Linear {
  Parameter *weight = nullptr;
  Parameter *bias = nullptr;

  static Linear create(ParamStore &store, const std::string &name,
                       Eigen::Index in, Eigen::Index out, bool with_bias,
                       std::mt19937_64 &rng);
  Var operator()(Tape &tape, Var x) const;
  /// Same as applying the layer to one-hot rows with the given hot columns.
  Var embed(Tape &tape, std::span<const int> index) const;
};

/// Tree GRU over sets of inbound messages.
struct TreeGru {
  Linear wz, uz;  // update gate, bias on wz
  Linear wr, ur;  // reset gate, bias on wr
  Linear w, u;    // candidate, bias on w

  static TreeGru create(ParamStore &store, const std::string &prefix,
                        Eigen::Index feature_dim, Eigen::Index hidden_dim,
                        std::mt19937_64 &rng);
};

/// Inbound message sets for a batch of GRU evaluations: output row r reads
/// messages `messages[k]` for every k with `target[k] == r`.
struct InboundSets {
  std::vector<int> messages;
  std::vector<int> target;
};

/// Feature terms of the three gates, one row per GRU evaluation.
struct GruFeatures {
  Var update;     // W^z f + b^z
  Var reset;      // W^r f + b^r
  Var candidate;  // W f + b
};

GruFeatures gru_features(Tape &tape, const TreeGru &gru, Var features);
/// One-hot features given by their hot columns.
GruFeatures gru_features(Tape &tape, const TreeGru &gru,
                         std::span<const int> labels);

/// One tree GRU update per row of `features` (rows x feature_dim) given the
/// message table `h` (any rows x hidden). Inbound sets are processed in a
/// canonical order so the result does not depend on their listing order.
Var tree_gru(Tape &tape, const TreeGru &gru, Var features, Var h,
             const InboundSets &inbound);
Var tree_gru(Tape &tape, const TreeGru &gru, const GruFeatures &features,
             Var h, const InboundSets &inbound);

/// Bilinear attention over two source sets with one matrix per set.
struct BilinearAttention {
  Parameter *tree_matrix = nullptr;
  Parameter *graph_matrix = nullptr;

  static BilinearAttention create(ParamStore &store, const std::string &prefix,
                                  Eigen::Index query_dim,
                                  Eigen::Index source_dim,
                                  std::mt19937_64 &rng);
};

/// Source vectors stored contiguously per group: group g owns rows
/// [offset[g], offset[g + 1]) of `vectors`.
struct SourceBlocks {
  Var vectors;
  std::vector<int> offset;

  int groups() const { return static_cast<int>(offset.size()) - 1; }
};

struct AttentionResult {
  // queries x (2 * source_dim): [tree context, graph context].
  Var context;
  // Per group: (queries of the group) x (sources of the group); left
  // invalid for groups without queries.
  std::vector<Var> tree_weights;
  std::vector<Var> graph_weights;
};

/// Query row r attends to the tree and graph sources of group
/// query_group[r]: alpha_i = softmax_i(q A x_i), one matrix A per source
/// kind. The context concatenates the two weighted sums.
AttentionResult bilinear_attention(Tape &tape, const BilinearAttention &att,
                                   Var queries,
                                   std::span<const int> query_group,
                                   const SourceBlocks &tree,
                                   const SourceBlocks &graph);

}  // namespace g2g

#endif  // G2G_TENSORCORE_LAYERS_H_
