//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef G2G_JUNCTREE_ASSEMBLY_H_
#define G2G_JUNCTREE_ASSEMBLY_H_

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "g2g/junctree/junction_tree.h"
#include "g2g/junctree/vocab.h"
#include "g2g/molgraph/molecule.h"

namespace g2g {

inline constexpr int kMaxCandidates = 64;

/// Partially assembled molecule with the tree node(s) owning each atom.
struct AssemblyState {
  Molecule mol;
  // Per tree node: local cluster atom -> assembled atom; empty if unplaced.
  std::vector<std::vector<int>> node_atoms;
  // Per assembled atom: placed tree nodes containing it, ascending.
  std::vector<std::vector<int>> atom_nodes;
  // Per assembled bond: placed tree nodes containing it, ascending.
  std::vector<std::vector<int>> bond_nodes;
  // Per assembled atom: singleton-atom nodes placed on it.
  std::vector<bool> hub;

  bool placed(int node) const { return !node_atoms[node].empty(); }
};

/// Local molecule around one attachment, used for scoring.
struct Fragment {
  Molecule graph;
  // Per fragment atom: the tree node it is attributed to (the attached node
  // first, then its parent, then the parent's other placed neighbors).
  std::vector<int> atom_node;
  // Per fragment atom: index in the assembled molecule.
  std::vector<int> atom_index;
};

struct AttachmentCandidate {
  AssemblyState state;
  // Canonical key of the assembled molecule colored by node membership.
  std::string key;
  Fragment fragment;
};

/// State holding only the root cluster.
AssemblyState start_assembly(int tree_size, int root, const Molecule &cluster);

/// All distinct valence-valid ways to fuse `cluster` (for tree node `node`)
/// onto the already placed `parent`, sorted by canonical key and capped at
/// kMaxCandidates. `tree` supplies neighbor lists for the fragments.
std::vector<AttachmentCandidate>
enumerate_attachments(const JunctionTree &tree, int node, int parent,
                      const Molecule &cluster, const AssemblyState &state);

/// Colored canonical key of a state (as stored in AttachmentCandidate).
std::string assembly_key(const AssemblyState &state);

/// Builds a molecule from a labeled tree by taking, for each node in
/// `traversal.preorder` after the root, candidate `choices[k]` (one entry
/// per non-root node in preorder). Throws DataError on an invalid choice or
/// when a node has no candidates.
Molecule assemble(const JunctionTree &tree, const ClusterVocab &vocab,
                  const Traversal &traversal, std::span<const int> choices);

/// One teacher-forcing attachment decision.
struct AssemblyStep {
  int node;
  int parent;
  std::vector<Fragment> candidates;
  int truth;
};

/// Ground-truth attachment decisions for a decomposed molecule along the
/// given traversal. Steps with a single candidate are kept. Throws DataError
/// when the true attachment is not among the candidates.
std::vector<AssemblyStep> plan_assembly(const Molecule &mol,
                                        const JunctionTree &tree,
                                        const Traversal &traversal);

}  // namespace g2g

#endif  // G2G_JUNCTREE_ASSEMBLY_H_
