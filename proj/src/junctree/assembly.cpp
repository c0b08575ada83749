//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "g2g/junctree/assembly.h"

#include <algorithm>
#include <map>

#include "g2g/molgraph/smiles.h"

namespace g2g {
namespace {

using Mapping = std::vector<std::pair<int, int>>;

void insert_sorted(std::vector<int> &v, int x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it == v.end() || *it != x)
    v.insert(it, x);
}

int cluster_count(const AssemblyState &s, int atom) {
  return static_cast<int>(s.atom_nodes[atom].size()) - (s.hub[atom] ? 1 : 0);
}

// Fuses `cluster` into a copy of `state`; `shared` maps cluster atoms onto
// existing atoms. Returns nothing when attributes or valences conflict.
std::optional<AssemblyState> attach(const AssemblyState &state, int node,
                                    const Molecule &cluster,
                                    const Mapping &shared) {
  AssemblyState next = state;
  std::vector<int> local(cluster.num_atoms(), -1);
  for (auto [c, a]: shared) {
    const Atom &ca = cluster.atom(c);
    Atom &sa = next.mol.mutable_atom(a);
    if (ca.element != sa.element || ca.charge != sa.charge)
      return std::nullopt;
    sa.aromatic = sa.aromatic || ca.aromatic;
    sa.hydrogens = std::max(sa.hydrogens, ca.hydrogens);
    local[c] = a;
  }
  for (int c = 0; c < cluster.num_atoms(); ++c) {
    if (local[c] >= 0)
      continue;
    local[c] = next.mol.add_atom(cluster.atom(c));
    next.atom_nodes.emplace_back();
    next.hub.push_back(false);
  }
  for (const Bond &bd: cluster.bonds()) {
    int a = local[bd.begin];
    int b = local[bd.end];
    int existing = next.mol.find_bond(a, b);
    if (existing >= 0) {
      if (next.mol.bond(existing).order != bd.order)
        return std::nullopt;
      insert_sorted(next.bond_nodes[existing], node);
    } else {
      next.mol.add_bond(a, b, bd.order);
      next.bond_nodes.push_back({ node });
    }
  }
  bool singleton = cluster_kind(cluster) == ClusterKind::kAtom;
  for (int a: local) {
    insert_sorted(next.atom_nodes[a], node);
    if (singleton)
      next.hub[a] = true;
  }
  next.node_atoms[node] = std::move(local);
  if (!check_valence(next.mol).empty())
    return std::nullopt;
  return next;
}

std::vector<Mapping> overlaps(const AssemblyState &state, int parent,
                              const Molecule &cluster) {
  std::vector<Mapping> out;
  const std::vector<int> &patoms = state.node_atoms[parent];
  ClusterKind ck = cluster_kind(cluster);
  bool parent_singleton = patoms.size() == 1;
  if (ck == ClusterKind::kAtom) {
    for (int a: patoms)
      out.push_back({ { 0, a } });
    return out;
  }
  if (parent_singleton) {
    for (int c = 0; c < cluster.num_atoms(); ++c)
      out.push_back({ { c, patoms.front() } });
    return out;
  }
  auto open = [&](int a) {
    return cluster_count(state, a) == 1 || state.hub[a];
  };
  for (int c = 0; c < cluster.num_atoms(); ++c)
    for (int a: patoms)
      if (open(a))
        out.push_back({ { c, a } });
  if (ck != ClusterKind::kRing)
    return out;
  std::vector<int> parent_bonds;
  for (int b = 0; b < state.mol.num_bonds(); ++b) {
    const auto &owners = state.bond_nodes[b];
    if (std::binary_search(owners.begin(), owners.end(), parent))
      parent_bonds.push_back(b);
  }
  if (parent_bonds.size() < patoms.size())
    return out;
  for (const Bond &cb: cluster.bonds())
    for (int pb: parent_bonds) {
      const Bond &sb = state.mol.bond(pb);
      if (!open(sb.begin) || !open(sb.end))
        continue;
      out.push_back({ { cb.begin, sb.begin }, { cb.end, sb.end } });
      out.push_back({ { cb.begin, sb.end }, { cb.end, sb.begin } });
    }
  return out;
}

Fragment make_fragment(const JunctionTree &tree, const AssemblyState &state,
                       int node, int parent) {
  std::vector<int> nodes { node, parent };
  std::vector<int> others;
  for (int w: tree.neighbors(parent))
    if (w != node && state.placed(w))
      others.push_back(w);
  std::sort(others.begin(), others.end());
  nodes.insert(nodes.end(), others.begin(), others.end());

  int n = state.mol.num_atoms();
  std::vector<int> owner(n, -1);
  for (int v: nodes)
    for (int a: state.node_atoms[v])
      if (owner[a] < 0)
        owner[a] = v;

  Fragment frag;
  std::vector<int> local(n, -1);
  for (int a = 0; a < n; ++a) {
    if (owner[a] < 0)
      continue;
    local[a] = frag.graph.add_atom(state.mol.atom(a));
    frag.atom_node.push_back(owner[a]);
    frag.atom_index.push_back(a);
  }
  std::vector<int> sorted_nodes = nodes;
  std::sort(sorted_nodes.begin(), sorted_nodes.end());
  for (int b = 0; b < state.mol.num_bonds(); ++b) {
    const Bond &bd = state.mol.bond(b);
    if (local[bd.begin] < 0 || local[bd.end] < 0)
      continue;
    const auto &owners = state.bond_nodes[b];
    bool inside = std::any_of(owners.begin(), owners.end(), [&](int v) {
      return std::binary_search(sorted_nodes.begin(), sorted_nodes.end(), v);
    });
    if (inside)
      frag.graph.add_bond(local[bd.begin], local[bd.end], bd.order);
  }
  return frag;
}

}  // namespace

AssemblyState start_assembly(int tree_size, int root,
                             const Molecule &cluster) {
  AssemblyState state;
  state.node_atoms.assign(tree_size, {});
  auto next = attach(state, root, cluster, {});
  if (!next)
    throw DataError("root cluster violates valence");
  return std::move(*next);
}

std::string assembly_key(const AssemblyState &state) {
  std::vector<std::vector<int>> sets = state.atom_nodes;
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  std::vector<int> colors(state.mol.num_atoms());
  for (int a = 0; a < state.mol.num_atoms(); ++a)
    colors[a] = static_cast<int>(
        std::lower_bound(sets.begin(), sets.end(), state.atom_nodes[a])
        - sets.begin());
  std::string key = canonical_key(state.mol, colors);
  for (const auto &set: sets) {
    key += '/';
    for (int v: set)
      key += std::to_string(v) + ',';
  }
  return key;
}

std::vector<AttachmentCandidate>
enumerate_attachments(const JunctionTree &tree, int node, int parent,
                      const Molecule &cluster, const AssemblyState &state) {
  if (!state.placed(parent))
    throw DataError("parent cluster is not assembled yet");
  if (state.placed(node))
    throw DataError("cluster is already assembled");
  std::map<std::string, AssemblyState> unique;
  for (const Mapping &m: overlaps(state, parent, cluster)) {
    auto next = attach(state, node, cluster, m);
    if (!next)
      continue;
    std::string key = assembly_key(*next);
    unique.try_emplace(std::move(key), std::move(*next));
  }
  std::vector<AttachmentCandidate> out;
  for (auto &[key, st]: unique) {
    if (static_cast<int>(out.size()) == kMaxCandidates)
      break;
    Fragment frag = make_fragment(tree, st, node, parent);
    out.push_back({ std::move(st), key, std::move(frag) });
  }
  return out;
}

Molecule assemble(const JunctionTree &tree, const ClusterVocab &vocab,
                  const Traversal &traversal, std::span<const int> choices) {
  if (tree.size() == 0)
    throw DataError("cannot assemble an empty tree");
  if (choices.size() + 1 != traversal.preorder.size())
    throw DataError("assembly choice count does not match the tree");
  auto cluster_of = [&](int v) -> const Molecule & {
    int label = tree.node(v).label;
    if (label < 0 || label >= vocab.size())
      throw DataError("cluster label out of vocabulary");
    return vocab.molecule(label);
  };
  int root = traversal.preorder.front();
  AssemblyState state = start_assembly(tree.size(), root, cluster_of(root));
  for (std::size_t k = 1; k < traversal.preorder.size(); ++k) {
    int v = traversal.preorder[k];
    auto cands = enumerate_attachments(tree, v, traversal.parent[v],
                                       cluster_of(v), state);
    int c = choices[k - 1];
    if (cands.empty())
      throw DataError("no valid attachment for tree node " + std::to_string(v));
    if (c < 0 || c >= static_cast<int>(cands.size()))
      throw DataError("invalid attachment choice " + std::to_string(c)
                      + " for tree node " + std::to_string(v));
    state = std::move(cands[c].state);
  }
  return std::move(state.mol);
}

std::vector<AssemblyStep> plan_assembly(const Molecule &mol,
                                        const JunctionTree &tree,
                                        const Traversal &traversal) {
  std::vector<AssemblyStep> steps;
  if (tree.size() == 0)
    return steps;
  std::vector<int> placed_as(mol.num_atoms(), -1);
  auto record = [&](const AssemblyState &st, int v) {
    const auto &atoms = tree.node(v).atoms;
    for (std::size_t c = 0; c < atoms.size(); ++c)
      placed_as[atoms[c]] = st.node_atoms[v][c];
  };
  int root = traversal.preorder.front();
  AssemblyState state = start_assembly(
      tree.size(), root, cluster_molecule(mol, tree.node(root)));
  record(state, root);
  for (std::size_t k = 1; k < traversal.preorder.size(); ++k) {
    int v = traversal.preorder[k];
    int p = traversal.parent[v];
    Molecule cluster = cluster_molecule(mol, tree.node(v));
    Mapping truth_map;
    const auto &atoms = tree.node(v).atoms;
    for (std::size_t c = 0; c < atoms.size(); ++c)
      if (placed_as[atoms[c]] >= 0)
        truth_map.emplace_back(static_cast<int>(c), placed_as[atoms[c]]);
    auto truth = attach(state, v, cluster, truth_map);
    if (!truth)
      throw DataError("ground-truth attachment is invalid for tree node "
                      + std::to_string(v));
    std::string truth_key = assembly_key(*truth);
    auto cands = enumerate_attachments(tree, v, p, cluster, state);
    AssemblyStep step { v, p, {}, -1 };
    for (std::size_t c = 0; c < cands.size(); ++c) {
      if (cands[c].key == truth_key)
        step.truth = static_cast<int>(c);
      step.candidates.push_back(std::move(cands[c].fragment));
    }
    if (step.truth < 0)
      throw DataError("ground-truth attachment not among candidates for tree "
                      "node " + std::to_string(v));
    steps.push_back(std::move(step));
    state = std::move(*truth);
    record(state, v);
  }
  return steps;
}

}  // namespace g2g
