//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "g2g/graphdec/graph_decoder.h"

#include <stdexcept>

#include "g2g/errors.h"

namespace g2g {
namespace {

struct FragmentBatch {
  GraphBatch graphs;
  // Per directed edge: row of the padded tree-message table (0 = none).
  std::vector<int> message_row;
};

void add_fragment(FragmentBatch &fb, const ScoringContext &ctx,
                  const Fragment &f, int tree) {
  if (f.atom_node.size() != static_cast<std::size_t>(f.graph.num_atoms()))
    throw DataError("fragment atom attribution does not match its graph");
  int first = fb.graphs.edges();
  int g = fb.graphs.add(f.graph);
  int atom0 = fb.graphs.atom_offset[g];
  for (int e = first; e < fb.graphs.edges(); ++e) {
    int a = f.atom_node[fb.graphs.edge_src[e] - atom0];
    int b = f.atom_node[fb.graphs.edge_dst[e] - atom0];
    int row = a == b ? -1 : ctx.trees->edge_index(tree, a, b);
    fb.message_row.push_back(row + 1);
  }
}

Var run_batch(Tape &tape, const GraphDecoder &dec, const ScoringContext &ctx,
              const FragmentBatch &fb) {
  if (ctx.trees == nullptr)
    throw std::invalid_argument("graph decoder: missing tree batch");
  Var extra;
  if (fb.graphs.edges() > 0) {
    const int hidden = static_cast<int>(
        dec.mpn.message.weight->value.rows());
    std::vector<Var> table = { tape.constant(Mat::Zero(1, hidden)) };
    if (ctx.tree_messages.valid() && ctx.tree_messages.rows() > 0)
      table.push_back(ctx.tree_messages);
    extra = gather_rows(concat_rows(table), fb.message_row);
  }
  return run_graph_mpn(tape, dec.mpn, fb.graphs, dec.iterations, extra);
}

}  // namespace

GraphDecoder GraphDecoder::create(ParamStore &store, int hidden,
                                  int iterations, std::mt19937_64 &rng) {
  GraphDecoder d;
  d.mpn = GraphMpn::create(store, "decoder.graph", hidden, rng);
  d.iterations = iterations;
  return d;
}

Var fragment_atom_vectors(Tape &tape, const GraphDecoder &dec,
                          const ScoringContext &ctx, const Fragment &fragment,
                          int tree) {
  FragmentBatch fb;
  add_fragment(fb, ctx, fragment, tree);
  return run_batch(tape, dec, ctx, fb);
}

Var score_candidates(Tape &tape, const GraphDecoder &dec,
                     const ScoringContext &ctx,
                     std::span<const CandidateSet> sets) {
  FragmentBatch fb;
  std::vector<int> group_of;
  for (const CandidateSet &s: sets) {
    for (const Fragment &f: *s.candidates) {
      add_fragment(fb, ctx, f, s.tree);
      group_of.push_back(s.group);
    }
  }
  if (group_of.empty())
    throw std::invalid_argument("score_candidates: no candidates");
  Var atoms = run_batch(tape, dec, ctx, fb);
  Var sums = scatter_add_rows(atoms, fb.graphs.atom_owner,
                              fb.graphs.graphs());
  return row_dot(sums, gather_rows(ctx.graph_sums, group_of));
}

AssemblyLossResult assembly_loss(Tape &tape, const GraphDecoder &dec,
                                 const ScoringContext &ctx,
                                 std::span<const AssemblyTarget> targets) {
  AssemblyLossResult out;
  std::vector<CandidateSet> sets;
  std::vector<int> segment, truth_rows;
  int rows = 0;
  for (const AssemblyTarget &t: targets) {
    const AssemblyStep &s = *t.step;
    int n = static_cast<int>(s.candidates.size());
    if (n < 2)
      continue;
    if (s.truth < 0 || s.truth >= n)
      throw DataError("assembly target outside its candidate list");
    sets.push_back({ &s.candidates, t.tree, t.group });
    for (int c = 0; c < n; ++c)
      segment.push_back(out.decisions);
    truth_rows.push_back(rows + s.truth);
    rows += n;
    ++out.decisions;
  }
  if (sets.empty()) {
    out.loss = tape.constant(0.0);
    return out;
  }
  Var scores = score_candidates(tape, dec, ctx, sets);
  Var lse = segment_logsumexp(scores, segment, out.decisions);
  out.loss = sub(sum_all(lse), sum_all(gather_rows(scores, truth_rows)));

  const Mat &sv = scores.value();
  int start = 0;
  for (int d = 0; d < out.decisions; ++d) {
    int end = start;
    int best = start;
    while (end < rows && segment[end] == d) {
      if (sv(end, 0) > sv(best, 0))
        best = end;
      ++end;
    }
    if (best == truth_rows[d])
      ++out.correct;
    start = end;
  }
  return out;
}

GreedyAssembly assemble_greedy(Tape &tape, const GraphDecoder &dec,
                               const ClusterVocab &vocab,
                               const JunctionTree &tree,
                               const Traversal &traversal,
                               const ScoringContext &ctx, int group) {
  GreedyAssembly out;
  if (tree.size() == 0 || traversal.preorder.empty()) {
    out.failure = "empty tree";
    return out;
  }
  auto cluster_of = [&](int v) -> const Molecule & {
    int label = tree.node(v).label;
    if (label < 0 || label >= vocab.size())
      throw DataError("cluster label out of vocabulary");
    return vocab.molecule(label);
  };
  int root = traversal.preorder.front();
  AssemblyState state;
  try {
    state = start_assembly(tree.size(), root, cluster_of(root));
  } catch (const DataError &e) {
    out.failure = e.what();
    return out;
  }
  for (std::size_t k = 1; k < traversal.preorder.size(); ++k) {
    int v = traversal.preorder[k];
    auto cands = enumerate_attachments(tree, v, traversal.parent[v],
                                       cluster_of(v), state);
    if (cands.empty()) {
      out.failure = "no valid attachment for tree node " + std::to_string(v);
      return out;
    }
    std::size_t best = 0;
    if (cands.size() > 1) {
      std::vector<Fragment> fragments;
      fragments.reserve(cands.size());
      for (const AttachmentCandidate &c: cands)
        fragments.push_back(c.fragment);
      CandidateSet set{ &fragments, 0, group };
      Mat s = score_candidates(tape, dec, ctx, { &set, 1 }).value();
      for (std::size_t c = 1; c < cands.size(); ++c) {
        if (s(static_cast<Eigen::Index>(c), 0)
            > s(static_cast<Eigen::Index>(best), 0))
          best = c;
      }
    }
    state = std::move(cands[best].state);
  }
  out.molecule = std::move(state.mol);
  return out;
}

}  // namespace g2g
