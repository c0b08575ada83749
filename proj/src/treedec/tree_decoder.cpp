//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "g2g/treedec/tree_decoder.h"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "g2g/errors.h"
#include "g2g/junctree/assembly.h"

namespace g2g {
namespace {

int argmax_row(const Mat &m, Eigen::Index row) {
  Eigen::Index best = 0;
  m.row(row).maxCoeff(&best);
  return static_cast<int>(best);
}

Mat one_hot(int size, int index) {
  Mat m = Mat::Zero(1, size);
  m(0, index) = 1.0;
  return m;
}

// Summed binary cross-entropy of logits against 0/1 targets.
Var bce_with_logits(Tape &tape, Var logits, const Mat &truth) {
  return sub(sum_all(softplus(logits)),
             sum_all(mul(logits, tape.constant(truth))));
}

// Summed categorical cross-entropy of rows of logits.
Var cross_entropy(Tape &tape, Var logits, std::span<const int> truth) {
  Mat pick = Mat::Zero(logits.rows(), logits.cols());
  for (std::size_t r = 0; r < truth.size(); ++r)
    pick(static_cast<Eigen::Index>(r), truth[r]) = 1.0;
  return sub(sum_all(logsumexp_rows(logits)),
             sum_all(mul(logits, tape.constant(std::move(pick)))));
}

void check_target(const TreeTarget &t, int vocab_size) {
  if (t.tree == nullptr || t.traversal == nullptr)
    throw std::invalid_argument("teacher_forced_loss: null target");
  const int n = t.tree->size();
  if (n == 0 || static_cast<int>(t.traversal->steps.size()) != 2 * n - 1)
    throw DataError("teacher_forced_loss: traversal does not match tree");
  for (const Cluster &c: t.tree->nodes()) {
    if (c.label < 0 || c.label >= vocab_size)
      throw DataError("teacher_forced_loss: node label out of range");
  }
}

}  // namespace

TreeDecoder TreeDecoder::create(ParamStore &store, int vocab_size, int hidden,
                                std::mt19937_64 &rng) {
  if (vocab_size <= 0 || hidden <= 0)
    throw std::invalid_argument("TreeDecoder: sizes must be positive");
  const std::string p = "decoder.tree.";
  TreeDecoder d;
  d.vocab_size = vocab_size;
  d.hidden = hidden;
  d.gru = TreeGru::create(store, p + "gru", vocab_size, hidden, rng);
  d.state_feature = Linear::create(store, p + "state_feature", vocab_size,
                                   hidden, false, rng);
  d.state_message = Linear::create(store, p + "state_message", hidden, hidden,
                                   false, rng);
  d.topology_attention = BilinearAttention::create(
      store, p + "topology_attention", hidden, hidden, rng);
  d.topology_state = Linear::create(store, p + "topology_state", hidden,
                                    hidden, true, rng);
  d.topology_context = Linear::create(store, p + "topology_context",
                                      2 * hidden, hidden, false, rng);
  d.topology_out = Linear::create(store, p + "topology_out", hidden, 1, true,
                                  rng);
  d.label_attention = BilinearAttention::create(store, p + "label_attention",
                                                hidden, hidden, rng);
  d.label_message = Linear::create(store, p + "label_message", hidden, hidden,
                                   true, rng);
  d.label_context = Linear::create(store, p + "label_context", 2 * hidden,
                                   hidden, false, rng);
  d.label_out = Linear::create(store, p + "label_out", hidden, vocab_size,
                               true, rng);
  return d;
}

Var topology_logits(Tape &tape, const TreeDecoder &dec, Var states,
                    std::span<const int> group, const DecoderSources &src) {
  AttentionResult att = bilinear_attention(tape, dec.topology_attention,
                                           states, group, src.tree, src.graph);
  Var hidden = relu(add(dec.topology_state(tape, states),
                        dec.topology_context(tape, att.context)));
  return dec.topology_out(tape, hidden);
}

Var label_logits(Tape &tape, const TreeDecoder &dec, Var messages,
                 std::span<const int> group, const DecoderSources &src) {
  AttentionResult att = bilinear_attention(tape, dec.label_attention,
                                           messages, group, src.tree,
                                           src.graph);
  Var hidden = relu(add(dec.label_message(tape, messages),
                        dec.label_context(tape, att.context)));
  return dec.label_out(tape, hidden);
}

TeacherForcedResult teacher_forced_loss(Tape &tape, const TreeDecoder &dec,
                                        const DecoderSources &src,
                                        std::span<const TreeTarget> targets) {
  if (targets.empty())
    throw std::invalid_argument("teacher_forced_loss: no targets");
  const int hidden = dec.hidden;

  struct Message {
    int from_label;
    std::vector<int> inbound;
    int level;
  };
  std::vector<Message> messages;
  // Topology steps.
  std::vector<int> step_label, step_group, step_target;
  std::vector<std::vector<int>> step_inbound;
  std::vector<double> step_truth;
  // Label predictions; query -1 is the zero message used for roots.
  std::vector<int> label_query, label_truth, label_group, label_target;

  for (std::size_t b = 0; b < targets.size(); ++b) {
    const TreeTarget &t = targets[b];
    check_target(t, dec.vocab_size);
    const JunctionTree &tree = *t.tree;
    // Messages received so far per node: (sender, message id).
    std::vector<std::vector<std::pair<int, int>>> received(tree.size());
    label_query.push_back(-1);
    label_truth.push_back(tree.node(tree.root()).label);
    label_group.push_back(t.group);
    label_target.push_back(static_cast<int>(b));
    for (const TraversalStep &s: t.traversal->steps) {
      std::vector<int> all;
      for (auto [from, id]: received[s.from])
        all.push_back(id);
      step_label.push_back(tree.node(s.from).label);
      step_group.push_back(t.group);
      step_target.push_back(static_cast<int>(b));
      step_inbound.push_back(all);
      step_truth.push_back(s.expand ? 1.0 : 0.0);
      if (s.to < 0)
        continue;
      Message m{ tree.node(s.from).label, {}, 1 };
      for (auto [from, id]: received[s.from]) {
        if (from == s.to)
          continue;
        m.inbound.push_back(id);
        m.level = std::max(m.level, messages[id].level + 1);
      }
      int id = static_cast<int>(messages.size());
      messages.push_back(std::move(m));
      received[s.to].emplace_back(s.from, id);
      if (s.expand) {
        label_query.push_back(id);
        label_truth.push_back(tree.node(s.to).label);
        label_group.push_back(t.group);
        label_target.push_back(static_cast<int>(b));
      }
    }
  }

  // Message table: row 0 is a zero message, then messages level by level.
  std::map<int, std::vector<int>> by_level;
  for (std::size_t i = 0; i < messages.size(); ++i)
    by_level[messages[i].level].push_back(static_cast<int>(i));
  std::vector<int> row(messages.size(), -1);
  Var table = tape.constant(Mat::Zero(1, hidden));
  int rows = 1;
  for (const auto &[level, ids]: by_level) {
    std::vector<int> labels;
    InboundSets sets;
    for (std::size_t k = 0; k < ids.size(); ++k) {
      const Message &m = messages[ids[k]];
      labels.push_back(m.from_label);
      for (int in: m.inbound) {
        sets.messages.push_back(row[in]);
        sets.target.push_back(static_cast<int>(k));
      }
    }
    Var next = tree_gru(tape, dec.gru, gru_features(tape, dec.gru, labels),
                        table, sets);
    Var parts[] = { table, next };
    table = concat_rows(parts);
    for (int id: ids)
      row[id] = rows++;
  }

  TeacherForcedResult out;
  const int steps = static_cast<int>(step_label.size());
  std::vector<int> gather_index, scatter_index;
  for (int s = 0; s < steps; ++s) {
    for (int id: step_inbound[s]) {
      gather_index.push_back(row[id]);
      scatter_index.push_back(s);
    }
  }
  Var inbound_sum = gather_index.empty()
                        ? tape.constant(Mat::Zero(steps, hidden))
                        : scatter_add_rows(gather_rows(table, gather_index),
                                           scatter_index, steps);
  Var states = relu(add(dec.state_feature.embed(tape, step_label),
                        dec.state_message(tape, inbound_sum)));
  Var topo = topology_logits(tape, dec, states, step_group, src);
  Mat truth(steps, 1);
  for (int s = 0; s < steps; ++s)
    truth(s, 0) = step_truth[s];
  out.topology_loss = bce_with_logits(tape, topo, truth);
  out.topology_steps = steps;

  std::vector<int> query_rows;
  for (int q: label_query)
    query_rows.push_back(q < 0 ? 0 : row[q]);
  Var labels = label_logits(tape, dec, gather_rows(table, query_rows),
                            label_group, src);
  out.label_loss = cross_entropy(tape, labels, label_truth);
  out.label_steps = static_cast<int>(label_query.size());

  out.exact.assign(targets.size(), true);
  const Mat &tv = topo.value();
  for (int s = 0; s < steps; ++s) {
    if ((tv(s, 0) > 0.0) != (step_truth[s] > 0.5))
      out.exact[step_target[s]] = false;
  }
  const Mat &lv = labels.value();
  for (std::size_t k = 0; k < label_truth.size(); ++k) {
    if (argmax_row(lv, static_cast<Eigen::Index>(k)) != label_truth[k])
      out.exact[label_target[k]] = false;
  }
  return out;
}

LabelMask::LabelMask(const ClusterVocab &vocab)
    : vocab_(&vocab),
      cache_(static_cast<std::size_t>(vocab.size()) * vocab.size(), -1) { }

bool LabelMask::allowed(int parent, int child) const {
  const int v = vocab_->size();
  if (parent < 0 || parent >= v || child < 0 || child >= v)
    throw std::out_of_range("LabelMask: label out of range");
  signed char &slot = cache_[static_cast<std::size_t>(parent) * v + child];
  if (slot < 0) {
    JunctionTree pair;
    pair.add_node(Cluster{ {}, {}, vocab_->kind(parent), parent });
    pair.add_node(Cluster{ {}, {}, vocab_->kind(child), child });
    pair.add_edge(0, 1);
    AssemblyState state = start_assembly(2, 0, vocab_->molecule(parent));
    slot = enumerate_attachments(pair, 1, 0, vocab_->molecule(child), state)
                   .empty()
               ? 0
               : 1;
  }
  return slot == 1;
}

Var Unrolled::representation() const {
  Var parts[] = { root_feature, root_inbound };
  return concat_cols(parts);
}

Unrolled unroll_tree(Tape &tape, const TreeDecoder &dec,
                     const DecoderSources *src, int group,
                     const UnrollOptions &options) {
  const UnrollMode mode = options.mode;
  const bool scripted = options.teacher != nullptr;
  if (mode == UnrollMode::kTeacher && !scripted)
    throw std::invalid_argument("unroll_tree: teacher mode needs a tree");
  if (mode != UnrollMode::kTeacher && src == nullptr)
    throw std::invalid_argument("unroll_tree: sources required");
  if (scripted
      && (options.teacher_traversal == nullptr
          || options.teacher_traversal->steps.size()
                 != 2 * static_cast<std::size_t>(options.teacher->size()) - 1))
    throw DataError("unroll_tree: teacher traversal does not match tree");
  if (options.max_nodes < 1)
    throw std::invalid_argument("unroll_tree: max_nodes must be positive");
  const bool soft = mode == UnrollMode::kSoft;
  const int hidden = dec.hidden;
  const int vocab = dec.vocab_size;
  const int groups[] = { group };

  struct Node {
    int label;
    int parent;
    GruFeatures gru;
    Var state_feature;
    // Messages received: (sender, Var).
    std::vector<std::pair<int, Var>> received;
  };
  std::vector<Node> nodes;
  std::vector<int> teacher_map;
  std::size_t script = 0;
  if (scripted)
    teacher_map.assign(options.teacher->size(), -1);

  Unrolled out;
  auto add_node = [&](int label, Var feature, int parent) {
    Node n{ label, parent, {}, Var(), {} };
    if (feature.valid()) {
      n.gru = gru_features(tape, dec.gru, feature);
      n.state_feature = dec.state_feature(tape, feature);
    } else {
      const int idx[] = { label };
      n.gru = gru_features(tape, dec.gru, idx);
      n.state_feature = dec.state_feature.embed(tape, idx);
    }
    nodes.push_back(std::move(n));
    int id = out.tree.add_node(Cluster{ {}, {}, ClusterKind::kAtom, label });
    if (parent >= 0)
      out.tree.add_edge(parent, id);
    return id;
  };
  auto message = [&](int from, int to) {
    std::vector<Var> inbound;
    for (const auto &[sender, m]: nodes[from].received) {
      if (sender != to)
        inbound.push_back(m);
    }
    InboundSets sets;
    Var h;
    if (inbound.empty()) {
      h = tape.constant(Mat::Zero(1, hidden));
    } else {
      h = concat_rows(inbound);
      for (std::size_t k = 0; k < inbound.size(); ++k) {
        sets.messages.push_back(static_cast<int>(k));
        sets.target.push_back(0);
      }
    }
    return tree_gru(tape, dec.gru, nodes[from].gru, h, sets);
  };
  auto inbound_sum = [&](int node) {
    std::vector<Var> all;
    for (const auto &[sender, m]: nodes[node].received)
      all.push_back(m);
    if (all.empty())
      return tape.constant(Mat::Zero(1, hidden));
    return sum_rows(concat_rows(all));
  };
  // Label and feature of a new node given its query message.
  auto choose_label = [&](Var query, int parent, int teacher_node) {
    if (scripted) {
      int label = options.teacher->node(teacher_node).label;
      Var f = soft ? tape.constant(one_hot(vocab, label)) : Var();
      return std::pair{ label, f };
    }
    Var logits = label_logits(tape, dec, query, groups, *src);
    const Mat &lv = logits.value();
    int label = -1;
    for (int c = 0; c < vocab; ++c) {
      if (parent >= 0 && options.mask != nullptr && !soft
          && !options.mask->allowed(nodes[parent].label, c))
        continue;
      if (label < 0 || lv(0, c) > lv(0, label))
        label = c;
    }
    Var f = soft ? softmax_rows(logits) : Var();
    return std::pair{ label, f };
  };

  // Root.
  {
    int teacher_root = scripted ? options.teacher->root() : -1;
    auto [label, feature] =
        choose_label(tape.constant(Mat::Zero(1, hidden)), -1, teacher_root);
    out.root_feature =
        feature.valid() ? feature : tape.constant(one_hot(vocab, label));
    int root = add_node(label, feature, -1);
    if (scripted)
      teacher_map[teacher_root] = root;
  }

  int current = 0;
  for (;;) {
    const TraversalStep *step = nullptr;
    if (scripted) {
      if (script >= options.teacher_traversal->steps.size())
        throw DataError("unroll_tree: teacher traversal ended early");
      step = &options.teacher_traversal->steps[script++];
      if (teacher_map[step->from] != current)
        throw DataError("unroll_tree: teacher traversal is not depth-first");
    }
    Var gate;
    bool expand;
    if (mode == UnrollMode::kTeacher) {
      expand = step->expand;
    } else {
      Var state = relu(add(nodes[current].state_feature,
                           dec.state_message(tape, inbound_sum(current))));
      Var p = sigmoid(topology_logits(tape, dec, state, groups, *src));
      double pv = p.scalar();
      out.topology_probability.push_back(pv);
      bool room = out.tree.size() < options.max_nodes;
      if (scripted) {
        expand = step->expand;
      } else {
        expand = pv > 0.5 && room;
        if (pv > 0.5 && !room)
          out.truncated = true;
        if (expand && options.mask != nullptr && !soft) {
          bool any = false;
          for (int c = 0; c < vocab && !any; ++c)
            any = options.mask->allowed(nodes[current].label, c);
          expand = any;
        }
      }
      if (soft) {
        double want = expand ? 1.0 : 0.0;
        if (options.gate_gradient) {
          gate = straight_through_gate(p, 0.5);
          if (gate.scalar() != want)
            gate = add(gate, tape.constant(want - gate.scalar()));
        } else {
          gate = tape.constant(want);
        }
      }
    }

    if (expand) {
      int teacher_child = scripted ? step->to : -1;
      Var m = message(current, -1);
      if (soft)
        m = mul(m, gate);
      auto [label, feature] = choose_label(m, current, teacher_child);
      int child = add_node(label, feature, current);
      if (scripted)
        teacher_map[teacher_child] = child;
      nodes[child].received.emplace_back(current, m);
      out.message_edges.emplace_back(current, child);
      out.messages.push_back(m);
      current = child;
      continue;
    }
    if (current == 0)
      break;
    int parent = nodes[current].parent;
    Var m = message(current, parent);
    if (soft)
      m = mul(m, one_minus(gate));
    nodes[parent].received.emplace_back(current, m);
    out.message_edges.emplace_back(current, parent);
    out.messages.push_back(m);
    current = parent;
  }
  out.root_inbound = inbound_sum(0);
  return out;
}

}  // namespace g2g
