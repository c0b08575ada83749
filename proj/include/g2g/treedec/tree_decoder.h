//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef G2G_TREEDEC_TREE_DECODER_H_
#define G2G_TREEDEC_TREE_DECODER_H_

#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "g2g/junctree/junction_tree.h"
#include "g2g/junctree/vocab.h"
#include "g2g/tensorcore/layers.h"

namespace g2g {

inline constexpr int kDefaultMaxNodes = 60;

/// Recurrent tree decoder with attention over source tree and graph vectors.
struct TreeDecoder {
  TreeGru gru;
  // Predictive state h_t = relu(W1 f + W2 sum of inbound messages).
  Linear state_feature;
  Linear state_message;
  // Topology: p_t = sigmoid(u . relu(W3 h_t + W4 c_t)).
  BilinearAttention topology_attention;
  Linear topology_state;
  Linear topology_context;
  Linear topology_out;
  // Labels: q = softmax(U relu(W1 h_ij + W2 c)).
  BilinearAttention label_attention;
  Linear label_message;
  Linear label_context;
  Linear label_out;
  int vocab_size = 0;
  int hidden = 0;

  static TreeDecoder create(ParamStore &store, int vocab_size, int hidden,
                            std::mt19937_64 &rng);
};

/// Source vectors per decoding group (one group per source molecule).
struct DecoderSources {
  SourceBlocks tree;
  SourceBlocks graph;
};

/// Pre-sigmoid topology scores for states (rows x hidden); rows x 1.
Var topology_logits(Tape &tape, const TreeDecoder &dec, Var states,
                    std::span<const int> group, const DecoderSources &src);
/// Pre-softmax label scores for messages (rows x hidden); rows x vocab.
Var label_logits(Tape &tape, const TreeDecoder &dec, Var messages,
                 std::span<const int> group, const DecoderSources &src);

struct TreeTarget {
  const JunctionTree *tree;      // labeled
  const Traversal *traversal;    // depth-first order over `tree`
  int group;                     // source group
};

struct TeacherForcedResult {
  Var topology_loss;  // summed binary cross-entropy, 1 x 1
  Var label_loss;     // summed cross-entropy over roots and new children
  int topology_steps = 0;
  int label_steps = 0;
  // Per target: every thresholded topology prediction and every label
  // argmax equals the ground truth.
  std::vector<bool> exact;
};

/// Replays the depth-first traversal of every target, batching messages of
/// equal dependency depth across targets. The root label is predicted from
/// a zero message.
TeacherForcedResult teacher_forced_loss(Tape &tape, const TreeDecoder &dec,
                                        const DecoderSources &src,
                                        std::span<const TreeTarget> targets);

/// Pairwise attachability of vocabulary clusters, computed on demand.
class LabelMask {
public:
  explicit LabelMask(const ClusterVocab &vocab);

  /// True when `child` has at least one attachment onto `parent` alone.
  bool allowed(int parent, int child) const;

private:
  const ClusterVocab *vocab_;
  mutable std::vector<signed char> cache_;
};

enum class UnrollMode {
  // Argmax labels and p > 0.5 expansion.
  kGreedy,
  // Label distributions as node features and straight-through gates on
  // messages.
  kSoft,
  // Ground-truth labels and topology; sources are not consulted.
  kTeacher,
};

struct UnrollOptions {
  UnrollMode mode = UnrollMode::kGreedy;
  int max_nodes = kDefaultMaxNodes;
  // Required by kTeacher. With kSoft, replaces predicted labels by one-hot
  // ground truth and forces the gates to the ground-truth topology.
  const JunctionTree *teacher = nullptr;
  const Traversal *teacher_traversal = nullptr;
  // kSoft: when false the gates are constants, so gradients only follow the
  // label distributions and messages.
  bool gate_gradient = true;
  // Optional for kGreedy: children must be attachable to their parent.
  const LabelMask *mask = nullptr;
};

struct Unrolled {
  // Decoded tree; node 0 is the root and nodes appear in creation order.
  JunctionTree tree;
  bool truncated = false;
  Var root_feature;  // 1 x vocab
  Var root_inbound;  // 1 x hidden
  // Messages in creation order with their directed edge (from, to).
  std::vector<std::pair<int, int>> message_edges;
  std::vector<Var> messages;
  // Topology probabilities per step (empty for kTeacher).
  std::vector<double> topology_probability;

  /// [root feature, sum of messages into the root].
  Var representation() const;
};

/// Sequential depth-first unroll of the decoder for one source group.
Unrolled unroll_tree(Tape &tape, const TreeDecoder &dec,
                     const DecoderSources *src, int group,
                     const UnrollOptions &options);

}  // namespace g2g

#endif  // G2G_TREEDEC_TREE_DECODER_H_
