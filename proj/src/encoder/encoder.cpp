//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "g2g/encoder/encoder.h"

#include "g2g/errors.h"

namespace g2g {

GraphMpn GraphMpn::create(ParamStore &store, const std::string &prefix,
                          int hidden, std::mt19937_64 &rng) {
  GraphMpn n;
  n.atom_in = Linear::create(store, prefix + ".W1", kAtomFeatureDim, hidden,
                             false, rng);
  n.bond_in = Linear::create(store, prefix + ".W2", kBondFeatureDim, hidden,
                             false, rng);
  n.message = Linear::create(store, prefix + ".W3", hidden, hidden, false, rng);
  n.atom_out = Linear::create(store, prefix + ".U1", kAtomFeatureDim, hidden,
                              false, rng);
  n.message_out = Linear::create(store, prefix + ".U2", hidden, hidden, false,
                                 rng);
  return n;
}

Var run_graph_mpn(Tape &tape, const GraphMpn &net, const GraphBatch &batch,
                  int iterations, Var extra) {
  if (iterations < 1)
    throw std::invalid_argument("message passing needs at least one round");
  const int atoms = batch.atoms();
  Var atom_features = tape.constant(batch.atom_features());
  Var node_term = net.atom_out(tape, atom_features);
  if (batch.edges() == 0)
    return relu(node_term);

  Var base = add(gather_rows(net.atom_in(tape, atom_features), batch.edge_src),
                 net.bond_in(tape, tape.constant(batch.edge_features())));
  Var messages;
  for (int t = 0; t < iterations; ++t) {
    Var inbound;
    if (t > 0) {
      Var node_sum = scatter_add_rows(messages, batch.edge_dst, atoms);
      inbound = sub(gather_rows(node_sum, batch.edge_src),
                    gather_rows(messages, batch.edge_rev));
    }
    if (extra.valid())
      inbound = inbound.valid() ? add(inbound, extra) : extra;
    messages = relu(inbound.valid() ? add(base, net.message(tape, inbound))
                                    : base);
  }
  Var node_sum = scatter_add_rows(messages, batch.edge_dst, atoms);
  return relu(add(node_term, net.message_out(tape, node_sum)));
}

int TreeBatch::add(const JunctionTree &tree) {
  const int index = trees();
  const int base = nodes();
  for (int i = 0; i < tree.size(); ++i) {
    if (tree.node(i).label < 0)
      throw DataError("tree node without a vocabulary label");
    labels_.push_back(tree.node(i).label);
    node_owner_.push_back(index);
  }
  for (auto [a, b]: tree.directed_edges()) {
    edge_lookup_[{ base + a, base + b }] = static_cast<int>(edge_src_.size());
    edge_src_.push_back(base + a);
    edge_dst_.push_back(base + b);
  }
  node_offset_.push_back(base + tree.size());
  edge_offset_.push_back(static_cast<int>(edge_src_.size()));
  return index;
}

int TreeBatch::edge_index(int tree, int a, int b) const {
  int base = node_offset_[tree];
  auto it = edge_lookup_.find({ base + a, base + b });
  return it == edge_lookup_.end() ? -1 : it->second;
}

TreeEncoder TreeEncoder::create(ParamStore &store, const std::string &prefix,
                                int vocab_size, int hidden,
                                std::mt19937_64 &rng) {
  TreeEncoder n;
  n.gru = TreeGru::create(store, prefix + ".gru", vocab_size, hidden, rng);
  n.node_out = Linear::create(store, prefix + ".U1", vocab_size, hidden, false,
                              rng);
  n.message_out = Linear::create(store, prefix + ".U2", hidden, hidden, false,
                                 rng);
  return n;
}

TreeEncoding run_tree_encoder(Tape &tape, const TreeEncoder &net,
                              const TreeBatch &batch, int iterations) {
  if (iterations < 1)
    throw std::invalid_argument("message passing needs at least one round");
  const int nodes = batch.nodes();
  const int edges = batch.edges();
  const int hidden = static_cast<int>(net.message_out.weight->value.rows());
  TreeEncoding out;
  Var node_term = net.node_out.embed(tape, batch.labels());
  if (edges == 0) {
    out.vectors = relu(node_term);
    out.messages = tape.constant(Mat::Zero(0, hidden));
    return out;
  }

  // Inbound set of u -> v: every w -> u with w != v.
  std::vector<std::vector<int>> into(nodes);
  for (int e = 0; e < edges; ++e)
    into[batch.edge_dst()[e]].push_back(e);
  InboundSets inbound;
  std::vector<int> src_labels(edges);
  for (int e = 0; e < edges; ++e) {
    int u = batch.edge_src()[e], v = batch.edge_dst()[e];
    src_labels[e] = batch.labels()[u];
    for (int f: into[u]) {
      if (batch.edge_src()[f] == v)
        continue;
      inbound.messages.push_back(f);
      inbound.target.push_back(e);
    }
  }
  GruFeatures features = gru_features(tape, net.gru, src_labels);
  Var messages = tape.constant(Mat::Zero(edges, hidden));
  for (int t = 0; t < iterations; ++t)
    messages = tree_gru(tape, net.gru, features, messages, inbound);
  Var node_sum = scatter_add_rows(messages, batch.edge_dst(), nodes);
  out.vectors = relu(add(node_term, net.message_out(tape, node_sum)));
  out.messages = messages;
  return out;
}

Encoder Encoder::create(ParamStore &store, int vocab_size, int hidden,
                        int graph_iterations, int tree_iterations,
                        std::mt19937_64 &rng) {
  Encoder e;
  e.graph = GraphMpn::create(store, "encoder.graph", hidden, rng);
  e.tree = TreeEncoder::create(store, "encoder.tree", vocab_size, hidden, rng);
  e.hidden = hidden;
  e.graph_iterations = graph_iterations;
  e.tree_iterations = tree_iterations;
  return e;
}

}  // namespace g2g
