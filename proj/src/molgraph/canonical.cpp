//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

// Canonical SMILES by iterative neighborhood refinement with exhaustive
// tie-breaking. Branches that are images of explored ones under automorphisms
// discovered at earlier leaves are pruned.

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "g2g/molgraph/smiles.h"

namespace g2g {
namespace {

constexpr long kMaxLeaves = 200000;
constexpr std::size_t kMaxAutomorphisms = 256;

std::string atom_symbol(const Atom &atom) {
  const ElementInfo &info = element_info(atom.element);
  std::string sym = atom.element;
  if (atom.aromatic)
    for (char &c: sym)
      c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  bool bracket = !info.organic_subset || atom.charge != 0
                 || atom.hydrogens > 0;
  if (!bracket)
    return sym;
  std::string out = "[" + sym;
  if (atom.hydrogens > 0) {
    out += 'H';
    if (atom.hydrogens > 1)
      out += std::to_string(atom.hydrogens);
  }
  if (atom.charge != 0) {
    out += atom.charge > 0 ? '+' : '-';
    if (std::abs(atom.charge) > 1)
      out += std::to_string(std::abs(atom.charge));
  }
  out += ']';
  return out;
}

std::string bond_symbol(const Molecule &mol, int bond) {
  const Bond &bd = mol.bond(bond);
  bool both = mol.atom(bd.begin).aromatic && mol.atom(bd.end).aromatic;
  switch (bd.order) {
  case BondOrder::kSingle:
    return both ? "-" : "";
  case BondOrder::kDouble:
    return "=";
  case BondOrder::kTriple:
    return "#";
  case BondOrder::kAromatic:
    return both ? "" : ":";
  }
  return "";
}

class RankedWriter {
public:
  RankedWriter(const Molecule &mol, const std::vector<int> &rank)
      : mol_(mol), rank_(rank), n_(mol.num_atoms()) { }

  std::string write(std::vector<int> &order) {
    sorted_nbrs_.assign(n_, {});
    for (int a = 0; a < n_; ++a) {
      auto nb = mol_.neighbors(a);
      sorted_nbrs_[a].assign(nb.begin(), nb.end());
      std::sort(sorted_nbrs_[a].begin(), sorted_nbrs_[a].end(),
                [&](const Neighbor &x, const Neighbor &y) {
                  return rank_[x.atom] < rank_[y.atom];
                });
    }
    int start = static_cast<int>(
        std::min_element(rank_.begin(), rank_.end()) - rank_.begin());

    visited_.assign(n_, false);
    bond_seen_.assign(mol_.num_bonds(), false);
    children_.assign(n_, {});
    ring_at_.assign(n_, {});
    discover(start, -1);

    digit_of_bond_.assign(mol_.num_bonds(), -1);
    digit_used_.assign(100, false);
    out_.clear();
    order_.clear();
    emit(start);
    order = std::move(order_);
    return std::move(out_);
  }

private:
  void discover(int a, int parent_bond) {
    visited_[a] = true;
    for (const Neighbor &nb: sorted_nbrs_[a]) {
      if (nb.bond == parent_bond || bond_seen_[nb.bond])
        continue;
      bond_seen_[nb.bond] = true;
      if (visited_[nb.atom]) {
        ring_at_[a].push_back(nb);
        ring_at_[nb.atom].push_back({ a, nb.bond });
      } else {
        children_[a].push_back(nb);
        discover(nb.atom, nb.bond);
      }
    }
  }

  void emit(int a) {
    order_.push_back(a);
    out_ += atom_symbol(mol_.atom(a));
    auto &rings = ring_at_[a];
    std::sort(rings.begin(), rings.end(),
              [&](const Neighbor &x, const Neighbor &y) {
                return rank_[x.atom] < rank_[y.atom];
              });
    for (const Neighbor &nb: rings) {
      int d = digit_of_bond_[nb.bond];
      if (d >= 0) {
        digit_used_[d] = false;
      } else {
        d = 1;
        while (digit_used_[d])
          ++d;
        digit_used_[d] = true;
        digit_of_bond_[nb.bond] = d;
        out_ += bond_symbol(mol_, nb.bond);
      }
      out_ += d < 10 ? std::to_string(d) : "%" + std::to_string(d);
    }
    const auto &kids = children_[a];
    for (std::size_t i = 0; i < kids.size(); ++i) {
      bool branch = i + 1 < kids.size();
      if (branch)
        out_ += '(';
      out_ += bond_symbol(mol_, kids[i].bond);
      emit(kids[i].atom);
      if (branch)
        out_ += ')';
    }
  }

  const Molecule &mol_;
  const std::vector<int> &rank_;
  int n_;
  std::vector<std::vector<Neighbor>> sorted_nbrs_;
  std::vector<bool> visited_, bond_seen_;
  std::vector<std::vector<Neighbor>> children_, ring_at_;
  std::vector<int> digit_of_bond_;
  std::vector<bool> digit_used_;
  std::string out_;
  std::vector<int> order_;
};

int rank_by_keys(std::vector<int> &cls,
                 const std::vector<std::vector<std::int64_t>> &keys) {
  int n = static_cast<int>(keys.size());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](int a, int b) { return keys[a] < keys[b]; });
  int c = -1;
  for (int i = 0; i < n; ++i) {
    if (i == 0 || keys[idx[i]] != keys[idx[i - 1]])
      ++c;
    cls[idx[i]] = c;
  }
  return c + 1;
}

class CanonicalSearch {
public:
  CanonicalSearch(const Molecule &mol, std::span<const int> labels)
      : mol_(mol), labels_(labels.begin(), labels.end()),
        n_(mol.num_atoms()) { }

  CanonicalForm run() {
    std::vector<int> cls(n_);
    std::vector<std::vector<std::int64_t>> keys(n_);
    for (int a = 0; a < n_; ++a) {
      const Atom &at = mol_.atom(a);
      keys[a] = { labels_.empty() ? 0 : labels_[a],
                  element_info(at.element).atomic_number,
                  at.aromatic ? 1 : 0,
                  at.charge,
                  at.hydrogens,
                  mol_.degree(a) };
    }
    rank_by_keys(cls, keys);
    std::vector<int> prefix;
    search(std::move(cls), prefix);

    CanonicalForm out;
    out.smiles = best_smiles_;
    out.output_order = best_order_;
    return out;
  }

  const std::string &best_key() const { return best_key_; }

private:
  int refine(std::vector<int> &cls) const {
    std::vector<std::vector<std::int64_t>> keys(n_);
    for (int a = 0; a < n_; ++a)
      keys[a] = { cls[a] };
    int count = rank_by_keys(cls, keys);
    while (true) {
      for (int a = 0; a < n_; ++a) {
        auto &k = keys[a];
        k.clear();
        k.push_back(cls[a]);
        for (const Neighbor &nb: mol_.neighbors(a))
          k.push_back(static_cast<std::int64_t>(mol_.bond(nb.bond).order)
                          * (1LL << 32)
                      + cls[nb.atom]);
        std::sort(k.begin() + 1, k.end());
      }
      int next = rank_by_keys(cls, keys);
      if (next == count)
        return count;
      count = next;
    }
  }

  void search(std::vector<int> cls, std::vector<int> &prefix) {
    int count = refine(cls);
    if (count == n_) {
      leaf(cls);
      return;
    }
    std::vector<int> cell_size(count, 0);
    for (int c: cls)
      ++cell_size[c];
    int target = 0;
    while (cell_size[target] < 2)
      ++target;
    std::vector<int> cell;
    for (int a = 0; a < n_; ++a)
      if (cls[a] == target)
        cell.push_back(a);

    std::vector<int> explored;
    for (int v: cell) {
      if (pruned(v, explored, prefix))
        continue;
      explored.push_back(v);
      std::vector<int> child(n_);
      for (int a = 0; a < n_; ++a)
        child[a] = cls[a] * 2 + (a == v ? 0 : 1);
      prefix.push_back(v);
      search(std::move(child), prefix);
      prefix.pop_back();
    }
  }

  bool pruned(int v, const std::vector<int> &explored,
              const std::vector<int> &prefix) const {
    if (explored.empty() || autos_.empty())
      return false;
    std::vector<int> parent(n_);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x)
        x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto &g: autos_) {
      bool fixes = std::all_of(prefix.begin(), prefix.end(),
                               [&](int p) { return g[p] == p; });
      if (!fixes)
        continue;
      for (int a = 0; a < n_; ++a)
        parent[find(a)] = find(g[a]);
    }
    int rv = find(v);
    return std::any_of(explored.begin(), explored.end(),
                       [&](int e) { return find(e) == rv; });
  }

  void leaf(const std::vector<int> &rank) {
    if (++leaves_ > kMaxLeaves)
      throw DataError("canonicalization search exceeded its leaf budget");
    std::vector<int> order;
    std::string smiles = RankedWriter(mol_, rank).write(order);
    std::string key = smiles;
    if (!labels_.empty()) {
      key += '|';
      for (std::size_t i = 0; i < order.size(); ++i) {
        if (i > 0)
          key += ',';
        key += std::to_string(labels_[order[i]]);
      }
    }
    if (best_order_.empty() || key < best_key_) {
      best_key_ = std::move(key);
      best_smiles_ = std::move(smiles);
      best_order_ = std::move(order);
    } else if (key == best_key_ && autos_.size() < kMaxAutomorphisms) {
      std::vector<int> g(n_);
      for (int k = 0; k < n_; ++k)
        g[best_order_[k]] = order[k];
      autos_.push_back(std::move(g));
    }
  }

  const Molecule &mol_;
  std::vector<int> labels_;
  int n_;
  long leaves_ = 0;
  std::string best_key_, best_smiles_;
  std::vector<int> best_order_;
  std::vector<std::vector<int>> autos_;
};

}  // namespace

CanonicalForm canonical_form(const Molecule &mol,
                             std::span<const int> labels) {
  if (mol.num_atoms() == 0)
    return {};
  if (!labels.empty() && static_cast<int>(labels.size()) != mol.num_atoms())
    throw DataError("canonical label count does not match atom count");
  if (!mol.is_connected())
    throw DataError("cannot canonicalize a disconnected molecule");
  return CanonicalSearch(mol, labels).run();
}

std::string write_smiles(const Molecule &mol) {
  return canonical_form(mol).smiles;
}

std::string canonical_key(const Molecule &mol, std::span<const int> labels) {
  if (mol.num_atoms() == 0)
    return {};
  if (static_cast<int>(labels.size()) != mol.num_atoms())
    throw DataError("canonical label count does not match atom count");
  if (!mol.is_connected())
    throw DataError("cannot canonicalize a disconnected molecule");
  CanonicalSearch search(mol, labels);
  search.run();
  return search.best_key();
}

bool isomorphic(const Molecule &a, const Molecule &b) {
  if (a.num_atoms() != b.num_atoms() || a.num_bonds() != b.num_bonds())
    return false;
  return write_smiles(a) == write_smiles(b);
}

}  // namespace g2g
