//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef G2G_GRAPHDEC_GRAPH_DECODER_H_
#define G2G_GRAPHDEC_GRAPH_DECODER_H_

#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "g2g/encoder/encoder.h"
#include "g2g/junctree/assembly.h"
#include "g2g/junctree/vocab.h"

namespace g2g {

/// Attachment scorer: message passing over a candidate fragment whose
/// inter-cluster edges carry the tree message between the owning nodes.
struct GraphDecoder {
  GraphMpn mpn;
  int iterations = 3;

  static GraphDecoder create(ParamStore &store, int hidden, int iterations,
                             std::mt19937_64 &rng);
};

/// Encoded trees and source summaries shared by a batch of decisions.
struct ScoringContext {
  const TreeBatch *trees = nullptr;
  Var tree_messages;  // trees->edges() x hidden
  Var graph_sums;     // one row per source: sum of its atom vectors
};

struct CandidateSet {
  const std::vector<Fragment> *candidates;
  int tree;   // index into ScoringContext::trees
  int group;  // row of ScoringContext::graph_sums
};

/// Scores every candidate of every set, in order; (total candidates) x 1.
/// score = (sum of fragment atom vectors) . (sum of source atom vectors).
Var score_candidates(Tape &tape, const GraphDecoder &dec,
                     const ScoringContext &ctx,
                     std::span<const CandidateSet> sets);

/// Fragment atom vectors of one candidate, atoms x hidden.
Var fragment_atom_vectors(Tape &tape, const GraphDecoder &dec,
                          const ScoringContext &ctx, const Fragment &fragment,
                          int tree);

struct AssemblyTarget {
  const AssemblyStep *step;
  int tree;
  int group;
};

struct AssemblyLossResult {
  Var loss;  // 1 x 1
  // Decisions with at least two candidates.
  int decisions = 0;
  int correct = 0;
};

/// Sum over multi-candidate decisions of logsumexp(scores) - score(truth).
AssemblyLossResult assembly_loss(Tape &tape, const GraphDecoder &dec,
                                 const ScoringContext &ctx,
                                 std::span<const AssemblyTarget> targets);

struct GreedyAssembly {
  std::optional<Molecule> molecule;
  // Empty on success.
  std::string failure;
};

/// Places the nodes of `tree` in `traversal` order, each time taking the
/// best-scoring candidate (first in canonical order on ties). `ctx` holds
/// the encoding of `tree` as tree 0 and the source summary as row `group`.
GreedyAssembly assemble_greedy(Tape &tape, const GraphDecoder &dec,
                               const ClusterVocab &vocab,
                               const JunctionTree &tree,
                               const Traversal &traversal,
                               const ScoringContext &ctx, int group);

}  // namespace g2g

#endif  // G2G_GRAPHDEC_GRAPH_DECODER_H_
