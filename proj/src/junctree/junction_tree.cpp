//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "g2g/junctree/junction_tree.h"

#include <algorithm>
#include <numeric>
#include <tuple>

#include "g2g/molgraph/rings.h"

namespace g2g {
namespace {

std::vector<int> sorted_intersection(const std::vector<int> &a,
                                     const std::vector<int> &b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

struct DisjointSets {
  explicit DisjointSets(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x)
      x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b)
      return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
  std::vector<int> parent;
};

std::vector<Cluster> ring_clusters(const Molecule &mol) {
  std::vector<Ring> rings = minimum_cycle_basis(mol);
  int n = static_cast<int>(rings.size());
  std::vector<std::vector<int>> atom_sets(n);
  for (int i = 0; i < n; ++i) {
    atom_sets[i] = rings[i].atoms;
    std::sort(atom_sets[i].begin(), atom_sets[i].end());
  }
  DisjointSets sets(n);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (sets.find(i) != sets.find(j)
            && sorted_intersection(atom_sets[i], atom_sets[j]).size() > 2)
          changed = sets.unite(i, j) || changed;
  }
  std::vector<Cluster> out;
  std::vector<int> slot(n, -1);
  for (int i = 0; i < n; ++i) {
    int r = sets.find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(out.size());
      out.push_back({ {}, {}, ClusterKind::kRing, -1 });
    }
    Cluster &c = out[slot[r]];
    c.atoms.insert(c.atoms.end(), atom_sets[i].begin(), atom_sets[i].end());
    c.bonds.insert(c.bonds.end(), rings[i].bonds.begin(),
                   rings[i].bonds.end());
  }
  for (Cluster &c: out) {
    std::sort(c.atoms.begin(), c.atoms.end());
    c.atoms.erase(std::unique(c.atoms.begin(), c.atoms.end()), c.atoms.end());
    std::sort(c.bonds.begin(), c.bonds.end());
    c.bonds.erase(std::unique(c.bonds.begin(), c.bonds.end()), c.bonds.end());
  }
  return out;
}

}  // namespace

ClusterKind cluster_kind(const Molecule &cluster) {
  if (cluster.num_atoms() == 1)
    return ClusterKind::kAtom;
  if (cluster.num_bonds() >= cluster.num_atoms())
    return ClusterKind::kRing;
  return ClusterKind::kBond;
}

int JunctionTree::add_node(Cluster cluster) {
  nodes_.push_back(std::move(cluster));
  adj_.emplace_back();
  return size() - 1;
}

void JunctionTree::add_edge(int a, int b) {
  if (a < 0 || b < 0 || a >= size() || b >= size() || a == b)
    throw DataError("invalid junction-tree edge");
  edges_.emplace_back(a, b);
  adj_[a].push_back(b);
  adj_[b].push_back(a);
}

bool JunctionTree::is_tree() const {
  if (nodes_.empty())
    return edges_.empty();
  if (static_cast<int>(edges_.size()) != size() - 1)
    return false;
  std::vector<bool> seen(size(), false);
  std::vector<int> stack { 0 };
  seen[0] = true;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w: adj_[v])
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        stack.push_back(w);
      }
  }
  return count == size();
}

std::vector<std::pair<int, int>> JunctionTree::directed_edges() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(edges_.size() * 2);
  for (auto [a, b]: edges_) {
    out.emplace_back(a, b);
    out.emplace_back(b, a);
  }
  return out;
}

JunctionTree decompose(const Molecule &mol) {
  if (mol.num_atoms() == 0)
    throw DataError("cannot decompose an empty molecule");
  std::vector<Cluster> clusters = ring_clusters(mol);
  std::vector<bool> ring_bond(mol.num_bonds(), false);
  for (const Cluster &c: clusters)
    for (int b: c.bonds)
      ring_bond[b] = true;
  for (int b = 0; b < mol.num_bonds(); ++b) {
    if (ring_bond[b])
      continue;
    const Bond &bd = mol.bond(b);
    clusters.push_back({ { std::min(bd.begin, bd.end),
                           std::max(bd.begin, bd.end) },
                         { b },
                         ClusterKind::kBond,
                         -1 });
  }

  std::vector<std::vector<int>> owners(mol.num_atoms());
  for (int c = 0; c < static_cast<int>(clusters.size()); ++c)
    for (int a: clusters[c].atoms)
      owners[a].push_back(c);
  int non_singleton = static_cast<int>(clusters.size());
  std::vector<bool> has_singleton(mol.num_atoms(), false);
  for (int a = 0; a < mol.num_atoms(); ++a) {
    if (owners[a].size() >= 3 || owners[a].empty()) {
      has_singleton[a] = true;
      clusters.push_back({ { a }, {}, ClusterKind::kAtom, -1 });
    }
  }

  // (weight, i, j) candidates for the maximum spanning tree.
  std::vector<std::tuple<int, int, int>> candidates;
  for (int i = 0; i < non_singleton; ++i)
    for (int j = i + 1; j < non_singleton; ++j) {
      auto shared = sorted_intersection(clusters[i].atoms, clusters[j].atoms);
      bool linked = std::any_of(shared.begin(), shared.end(),
                                [&](int a) { return !has_singleton[a]; });
      if (linked)
        candidates.emplace_back(static_cast<int>(shared.size()), i, j);
    }
  for (int s = non_singleton; s < static_cast<int>(clusters.size()); ++s)
    for (int c: owners[clusters[s].atoms.front()])
      candidates.emplace_back(1, c, s);
  std::sort(candidates.begin(), candidates.end(),
            [](const auto &x, const auto &y) {
              if (std::get<0>(x) != std::get<0>(y))
                return std::get<0>(x) > std::get<0>(y);
              return std::make_pair(std::get<1>(x), std::get<2>(x))
                     < std::make_pair(std::get<1>(y), std::get<2>(y));
            });

  JunctionTree tree;
  for (Cluster &c: clusters)
    tree.add_node(std::move(c));
  DisjointSets sets(tree.size());
  for (auto [w, i, j]: candidates)
    if (sets.unite(i, j))
      tree.add_edge(i, j);
  if (!tree.is_tree())
    throw DataError("cluster graph is not connected");

  for (int i = 0; i < tree.size(); ++i) {
    const auto &atoms = tree.node(i).atoms;
    if (std::binary_search(atoms.begin(), atoms.end(), 0)) {
      tree.set_root(i);
      break;
    }
  }
  return tree;
}

Molecule cluster_molecule(const Molecule &mol, const Cluster &cluster) {
  Molecule out = submolecule(mol, cluster.atoms, cluster.bonds);
  if (cluster.kind != ClusterKind::kRing)
    for (int a = 0; a < out.num_atoms(); ++a)
      out.mutable_atom(a).aromatic = false;
  return out;
}

Traversal dfs_traversal(const JunctionTree &tree, ChildOrder order) {
  Traversal out;
  int n = tree.size();
  out.parent.assign(n, -1);
  if (n == 0)
    return out;
  auto children_of = [&](int v, int parent) {
    std::vector<int> kids;
    for (int w: tree.neighbors(v))
      if (w != parent)
        kids.push_back(w);
    if (order == ChildOrder::kByLabel) {
      std::sort(kids.begin(), kids.end(), [&](int a, int b) {
        const Cluster &ca = tree.node(a);
        const Cluster &cb = tree.node(b);
        return std::tie(ca.label, ca.atoms, a)
               < std::tie(cb.label, cb.atoms, b);
      });
    } else {
      std::sort(kids.begin(), kids.end());
    }
    return kids;
  };
  struct Frame {
    int node;
    std::vector<int> kids;
    std::size_t next;
  };
  int root = tree.root();
  std::vector<Frame> stack;
  stack.push_back({ root, children_of(root, -1), 0 });
  out.preorder.push_back(root);
  while (!stack.empty()) {
    Frame &f = stack.back();
    if (f.next < f.kids.size()) {
      int child = f.kids[f.next++];
      out.parent[child] = f.node;
      out.steps.push_back({ f.node, child, true });
      out.preorder.push_back(child);
      int from = f.node;
      stack.push_back({ child, children_of(child, from), 0 });
    } else {
      out.steps.push_back({ f.node, out.parent[f.node], false });
      stack.pop_back();
    }
  }
  return out;
}

}  // namespace g2g
