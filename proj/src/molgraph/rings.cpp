//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "g2g/molgraph/rings.h"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <set>

namespace g2g {
namespace {

using EdgeSet = std::vector<std::uint64_t>;

struct Candidate {
  EdgeSet edges;
  int size;
  std::vector<int> atoms;
};

int components(const Molecule &mol) {
  std::vector<int> seen(mol.num_atoms(), 0);
  int count = 0;
  for (int s = 0; s < mol.num_atoms(); ++s) {
    if (seen[s])
      continue;
    ++count;
    std::vector<int> stack { s };
    seen[s] = 1;
    while (!stack.empty()) {
      int a = stack.back();
      stack.pop_back();
      for (const Neighbor &nb: mol.neighbors(a))
        if (!seen[nb.atom]) {
          seen[nb.atom] = 1;
          stack.push_back(nb.atom);
        }
    }
  }
  return count;
}

}  // namespace

std::vector<Ring> minimum_cycle_basis(const Molecule &mol) {
  int n = mol.num_atoms();
  int m = mol.num_bonds();
  int rank = m - n + components(mol);
  if (rank <= 0)
    return {};

  std::vector<bool> ring_bond = ring_bond_mask(mol);
  std::vector<bool> ring_atom(n, false);
  for (int b = 0; b < m; ++b)
    if (ring_bond[b])
      ring_atom[mol.bond(b).begin] = ring_atom[mol.bond(b).end] = true;

  std::size_t words = (m + 63) / 64;
  std::vector<Candidate> cands;
  std::set<EdgeSet> seen;

  std::vector<int> dist(n), parent(n), parent_bond(n);
  for (int v = 0; v < n; ++v) {
    if (!ring_atom[v])
      continue;
    std::fill(dist.begin(), dist.end(), -1);
    dist[v] = 0;
    parent[v] = parent_bond[v] = -1;
    std::deque<int> queue { v };
    while (!queue.empty()) {
      int a = queue.front();
      queue.pop_front();
      for (const Neighbor &nb: mol.neighbors(a)) {
        if (!ring_bond[nb.bond] || dist[nb.atom] >= 0)
          continue;
        dist[nb.atom] = dist[a] + 1;
        parent[nb.atom] = a;
        parent_bond[nb.atom] = nb.bond;
        queue.push_back(nb.atom);
      }
    }
    for (int b = 0; b < m; ++b) {
      if (!ring_bond[b])
        continue;
      int x = mol.bond(b).begin, y = mol.bond(b).end;
      if (dist[x] < 0 || dist[y] < 0 || parent_bond[x] == b
          || parent_bond[y] == b)
        continue;
      std::vector<int> px, py;
      for (int a = x; a != v; a = parent[a])
        px.push_back(a);
      for (int a = y; a != v; a = parent[a])
        py.push_back(a);
      bool disjoint = true;
      for (int a: px)
        if (std::find(py.begin(), py.end(), a) != py.end())
          disjoint = false;
      if (!disjoint)
        continue;

      Candidate c;
      c.edges.assign(words, 0);
      auto mark = [&](int bond) {
        c.edges[bond / 64] |= std::uint64_t { 1 } << (bond % 64);
      };
      mark(b);
      for (int a: px)
        mark(parent_bond[a]);
      for (int a: py)
        mark(parent_bond[a]);
      if (!seen.insert(c.edges).second)
        continue;
      c.size = static_cast<int>(px.size() + py.size() + 1);
      c.atoms.push_back(v);
      c.atoms.insert(c.atoms.end(), px.rbegin(), px.rend());
      c.atoms.insert(c.atoms.end(), py.begin(), py.end());
      cands.push_back(std::move(c));
    }
  }
  std::sort(cands.begin(), cands.end(),
            [](const Candidate &a, const Candidate &b) {
              if (a.size != b.size)
                return a.size < b.size;
              return a.edges < b.edges;
            });

  // Greedy independence test over GF(2).
  std::vector<std::pair<int, EdgeSet>> basis;
  std::vector<Ring> out;
  for (const Candidate &c: cands) {
    EdgeSet v = c.edges;
    for (const auto &[pivot, row]: basis)
      if ((v[pivot / 64] >> (pivot % 64)) & 1)
        for (std::size_t w = 0; w < words; ++w)
          v[w] ^= row[w];
    int pivot = -1;
    for (std::size_t w = 0; w < words && pivot < 0; ++w)
      if (v[w] != 0)
        pivot = static_cast<int>(w * 64 + std::countr_zero(v[w]));
    if (pivot < 0)
      continue;
    for (auto &[p, row]: basis)
      if ((row[pivot / 64] >> (pivot % 64)) & 1)
        for (std::size_t w = 0; w < words; ++w)
          row[w] ^= v[w];
    basis.emplace_back(pivot, std::move(v));

    Ring ring;
    ring.atoms = c.atoms;
    for (int b = 0; b < m; ++b)
      if ((c.edges[b / 64] >> (b % 64)) & 1)
        ring.bonds.push_back(b);
    out.push_back(std::move(ring));
    if (static_cast<int>(out.size()) == rank)
      break;
  }
  return out;
}

}  // namespace g2g
