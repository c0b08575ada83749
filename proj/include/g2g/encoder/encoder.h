//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef G2G_ENCODER_ENCODER_H_
#define G2G_ENCODER_ENCODER_H_

#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "g2g/encoder/features.h"
#include "g2g/junctree/junction_tree.h"
#include "g2g/tensorcore/layers.h"

namespace g2g {

/// Single-layer message passing over molecular graphs:
///   nu_uv = relu(W1 f_u + W2 f_uv + W3 sum_{w in N(u)\v} nu_wu)
///   x_u   = relu(U1 f_u + U2 sum_{v in N(u)} nu_vu)
struct GraphMpn {
  Linear atom_in;
  Linear bond_in;
  Linear message;
  Linear atom_out;
  Linear message_out;

  static GraphMpn create(ParamStore &store, const std::string &prefix,
                         int hidden, std::mt19937_64 &rng);
};

/// Runs `iterations` synchronous rounds from zero messages and returns one
/// row per atom. When `extra` (directed edges x hidden) is valid it is added
/// to the inbound sum of every directed edge.
Var run_graph_mpn(Tape &tape, const GraphMpn &net, const GraphBatch &batch,
                  int iterations, Var extra = Var());

/// Disjoint union of labeled junction trees. Directed edges of each tree
/// follow JunctionTree::directed_edges().
class TreeBatch {
public:
  TreeBatch() : node_offset_{ 0 }, edge_offset_{ 0 } { }

  /// Appends a labeled tree; returns its index.
  int add(const JunctionTree &tree);

  int trees() const { return static_cast<int>(node_offset_.size()) - 1; }
  int nodes() const { return node_offset_.back(); }
  int edges() const { return edge_offset_.back(); }

  const std::vector<int> &labels() const { return labels_; }
  const std::vector<int> &node_owner() const { return node_owner_; }
  const std::vector<int> &node_offset() const { return node_offset_; }
  const std::vector<int> &edge_src() const { return edge_src_; }
  const std::vector<int> &edge_dst() const { return edge_dst_; }
  const std::vector<int> &edge_offset() const { return edge_offset_; }

  /// Directed edge row of (a -> b) for local nodes of `tree`, or -1 when the
  /// nodes are not adjacent.
  int edge_index(int tree, int a, int b) const;

private:
  std::vector<int> labels_;
  std::vector<int> node_owner_;
  std::vector<int> node_offset_;
  std::vector<int> edge_src_;
  std::vector<int> edge_dst_;
  std::vector<int> edge_offset_;
  std::map<std::pair<int, int>, int> edge_lookup_;
};

/// Tree encoder: tree GRU messages, then x_i = relu(U1 f_i + U2 sum h_ki).
struct TreeEncoder {
  TreeGru gru;
  Linear node_out;
  Linear message_out;

  static TreeEncoder create(ParamStore &store, const std::string &prefix,
                            int vocab_size, int hidden, std::mt19937_64 &rng);
};

struct TreeEncoding {
  Var vectors;   // nodes x hidden
  Var messages;  // directed edges x hidden, final round
};

TreeEncoding run_tree_encoder(Tape &tape, const TreeEncoder &net,
                              const TreeBatch &batch, int iterations);

/// Shared encoder for source and target molecules.
struct Encoder {
  GraphMpn graph;
  TreeEncoder tree;
  int hidden = 0;
  int graph_iterations = 3;
  int tree_iterations = 6;

  static Encoder create(ParamStore &store, int vocab_size, int hidden,
                        int graph_iterations, int tree_iterations,
                        std::mt19937_64 &rng);
};

}  // namespace g2g

#endif  // G2G_ENCODER_ENCODER_H_
