//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef G2G_JUNCTREE_JUNCTION_TREE_H_
#define G2G_JUNCTREE_JUNCTION_TREE_H_

#include <span>
#include <utility>
#include <vector>

#include "g2g/molgraph/molecule.h"

namespace g2g {

enum class ClusterKind {
  kRing,
  kBond,
  kAtom,
};

/// Kind of a standalone cluster molecule (one atom, one bond, or a ring
/// system).
ClusterKind cluster_kind(const Molecule &cluster);

struct Cluster {
  // Atom and bond indices into the decomposed molecule, ascending. Empty for
  // trees produced by the decoder.
  std::vector<int> atoms;
  std::vector<int> bonds;
  ClusterKind kind = ClusterKind::kAtom;
  // Vocabulary label; -1 until assigned.
  int label = -1;
};

class JunctionTree {
public:
  int add_node(Cluster cluster);
  void add_edge(int a, int b);

  int size() const { return static_cast<int>(nodes_.size()); }
  const Cluster &node(int i) const { return nodes_[i]; }
  Cluster &mutable_node(int i) { return nodes_[i]; }
  const std::vector<Cluster> &nodes() const { return nodes_; }
  const std::vector<std::pair<int, int>> &edges() const { return edges_; }
  const std::vector<int> &neighbors(int i) const { return adj_[i]; }

  int root() const { return root_; }
  void set_root(int r) { root_ = r; }

  /// Connected with |E| = |V| - 1.
  bool is_tree() const;

  /// Directed edges (a -> b), two per undirected edge: edge k yields
  /// 2k = (a, b) and 2k + 1 = (b, a).
  std::vector<std::pair<int, int>> directed_edges() const;

private:
  std::vector<Cluster> nodes_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adj_;
  int root_ = 0;
};

/// Splits a molecule into ring systems (minimum cycle basis, rings sharing
/// more than two atoms merged), non-ring bonds, and singleton atoms shared by
/// three or more clusters, then connects them by a maximum spanning tree of
/// the cluster intersection graph. Labels are left unassigned.
JunctionTree decompose(const Molecule &mol);

/// Standalone molecule of one cluster; atoms follow `cluster.atoms` order.
/// Bond and singleton clusters drop the aromatic flag.
Molecule cluster_molecule(const Molecule &mol, const Cluster &cluster);

enum class ChildOrder {
  // Ascending vocabulary label, then atom set, then node index. Used for
  // teacher forcing on decomposed targets.
  kByLabel,
  // Node creation order. Used for trees produced by the decoder.
  kByIndex,
};

struct TraversalStep {
  int from;
  // Child when `expand`, otherwise the parent (-1 for the final stop at the
  // root).
  int to;
  bool expand;
};

/// Depth-first traversal from the root. The step sequence holds one expand
/// step per edge and one backtrack step per node (including the final stop).
struct Traversal {
  std::vector<int> preorder;
  std::vector<int> parent;
  std::vector<TraversalStep> steps;
};

Traversal dfs_traversal(const JunctionTree &tree, ChildOrder order);

}  // namespace g2g

#endif  // G2G_JUNCTREE_JUNCTION_TREE_H_
