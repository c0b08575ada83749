//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "g2g/molgraph/molecule.h"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <string>
#include <utility>

namespace g2g {
namespace {

constexpr std::array kValH {1};
constexpr std::array kValB {3};
constexpr std::array kValC {4};
constexpr std::array kValN {3};
constexpr std::array kValO {2};
constexpr std::array kValHalogen {1};
constexpr std::array kValSi {4};
constexpr std::array kValP {3, 5};
constexpr std::array kValS {2, 4, 6};

const std::array kElements {
  ElementInfo { "H", 1, 1.008, kValH, false, false },
  ElementInfo { "B", 5, 10.81, kValB, true, true },
  ElementInfo { "C", 6, 12.011, kValC, true, true },
  ElementInfo { "N", 7, 14.007, kValN, true, true },
  ElementInfo { "O", 8, 15.999, kValO, true, true },
  ElementInfo { "F", 9, 18.998, kValHalogen, true, false },
  ElementInfo { "Si", 14, 28.085, kValSi, false, false },
  ElementInfo { "P", 15, 30.974, kValP, true, true },
  ElementInfo { "S", 16, 32.06, kValS, true, true },
  ElementInfo { "Cl", 17, 35.45, kValHalogen, true, false },
  ElementInfo { "Se", 34, 78.971, kValS, false, true },
  ElementInfo { "Br", 35, 79.904, kValHalogen, true, false },
  ElementInfo { "I", 53, 126.904, kValHalogen, true, false },
};

int charge_shift(const ElementInfo &info, int charge) {
  switch (info.atomic_number) {
  case 5:
    return -charge;
  case 1:
  case 6:
  case 14:
    return -std::abs(charge);
  default:
    return charge;
  }
}

bool has_double_bond(const Molecule &mol, int atom) {
  for (const Neighbor &nb: mol.neighbors(atom))
    if (mol.bond(nb.bond).order == BondOrder::kDouble)
      return true;
  return false;
}

}  // namespace

const ElementInfo *find_element(std::string_view symbol) {
  for (const ElementInfo &e: kElements)
    if (e.symbol == symbol)
      return &e;
  return nullptr;
}

const ElementInfo &element_info(std::string_view symbol) {
  const ElementInfo *info = find_element(symbol);
  if (info == nullptr)
    throw DataError("unknown element '" + std::string(symbol) + "'");
  return *info;
}

int bond_valence(BondOrder order) {
  switch (order) {
  case BondOrder::kSingle:
  case BondOrder::kAromatic:
    return 1;
  case BondOrder::kDouble:
    return 2;
  case BondOrder::kTriple:
    return 3;
  }
  return 1;
}

int Molecule::add_atom(Atom atom) {
  element_info(atom.element);
  atoms_.push_back(std::move(atom));
  adj_.emplace_back();
  return num_atoms() - 1;
}

int Molecule::add_bond(int a, int b, BondOrder order) {
  if (a < 0 || b < 0 || a >= num_atoms() || b >= num_atoms())
    throw DataError("bond endpoint out of range");
  if (a == b)
    throw DataError("bond endpoints must be distinct");
  if (find_bond(a, b) >= 0)
    throw DataError("duplicate bond between atoms " + std::to_string(a)
                    + " and " + std::to_string(b));
  bonds_.push_back({ a, b, order });
  int idx = num_bonds() - 1;
  adj_[a].push_back({ b, idx });
  adj_[b].push_back({ a, idx });
  return idx;
}

int Molecule::find_bond(int a, int b) const {
  if (a < 0 || a >= num_atoms())
    return -1;
  for (const Neighbor &nb: adj_[a])
    if (nb.atom == b)
      return nb.bond;
  return -1;
}

bool Molecule::is_connected() const {
  if (atoms_.empty())
    return true;
  std::vector<bool> seen(atoms_.size(), false);
  std::vector<int> stack { 0 };
  seen[0] = true;
  int count = 1;
  while (!stack.empty()) {
    int a = stack.back();
    stack.pop_back();
    for (const Neighbor &nb: adj_[a]) {
      if (!seen[nb.atom]) {
        seen[nb.atom] = true;
        ++count;
        stack.push_back(nb.atom);
      }
    }
  }
  return count == num_atoms();
}

void Molecule::validate() const {
  if (atoms_.empty())
    throw DataError("empty molecule");
  if (!is_connected())
    throw DataError("multi-fragment molecules are not supported");
  auto violations = check_valence(*this);
  if (!violations.empty()) {
    const auto &v = violations.front();
    throw DataError("valence violation at atom " + std::to_string(v.atom)
                    + " (" + atoms_[v.atom].element + "): uses "
                    + std::to_string(v.used) + ", allowed "
                    + std::to_string(v.allowed));
  }
}

int bond_valence_sum(const Molecule &mol, int atom) {
  int sum = 0;
  for (const Neighbor &nb: mol.neighbors(atom))
    sum += bond_valence(mol.bond(nb.bond).order);
  return sum;
}

int max_valence(const Atom &atom) {
  const ElementInfo &info = element_info(atom.element);
  return std::max(0, info.valences.back() + charge_shift(info, atom.charge));
}

int implicit_hydrogens(const Molecule &mol, int atom) {
  const Atom &a = mol.atom(atom);
  if (a.hydrogens > 0)
    return 0;
  const ElementInfo &info = element_info(a.element);
  if (!info.organic_subset)
    return 0;
  int shift = charge_shift(info, a.charge);
  int used = bond_valence_sum(mol, atom);
  if (a.aromatic) {
    int lowest = info.valences.front() + shift;
    if (info.atomic_number == 6 ? !has_double_bond(mol, atom) : used < lowest)
      ++used;
  }
  for (int v: info.valences)
    if (v + shift >= used)
      return v + shift - used;
  return 0;
}

int total_hydrogens(const Molecule &mol, int atom) {
  return mol.atom(atom).hydrogens + implicit_hydrogens(mol, atom);
}

std::vector<ValenceViolation> check_valence(const Molecule &mol) {
  std::vector<ValenceViolation> out;
  for (int i = 0; i < mol.num_atoms(); ++i) {
    const Atom &a = mol.atom(i);
    int used = bond_valence_sum(mol, i) + a.hydrogens;
    if (a.aromatic && a.element == "C" && !has_double_bond(mol, i))
      ++used;
    int allowed = max_valence(a);
    if (used > allowed)
      out.push_back({ i, used, allowed });
  }
  return out;
}

std::vector<bool> ring_bond_mask(const Molecule &mol) {
  // Iterative bridge finding (Tarjan low-link).
  int n = mol.num_atoms();
  std::vector<bool> in_ring(mol.num_bonds(), true);
  std::vector<int> disc(n, -1), low(n, 0);
  int timer = 0;
  struct Frame {
    int atom;
    int parent_bond;
    std::size_t next;
  };
  for (int s = 0; s < n; ++s) {
    if (disc[s] >= 0)
      continue;
    std::vector<Frame> stack { { s, -1, 0 } };
    disc[s] = low[s] = timer++;
    while (!stack.empty()) {
      Frame &f = stack.back();
      auto nbrs = mol.neighbors(f.atom);
      if (f.next < nbrs.size()) {
        Neighbor nb = nbrs[f.next++];
        if (nb.bond == f.parent_bond)
          continue;
        if (disc[nb.atom] < 0) {
          disc[nb.atom] = low[nb.atom] = timer++;
          stack.push_back({ nb.atom, nb.bond, 0 });
        } else {
          low[f.atom] = std::min(low[f.atom], disc[nb.atom]);
        }
      } else {
        Frame done = f;
        stack.pop_back();
        if (!stack.empty()) {
          int p = stack.back().atom;
          low[p] = std::min(low[p], low[done.atom]);
          if (low[done.atom] > disc[p])
            in_ring[done.parent_bond] = false;
        }
      }
    }
  }
  return in_ring;
}

Molecule submolecule(const Molecule &mol, std::span<const int> atoms,
                     std::span<const int> bonds) {
  Molecule out;
  std::vector<int> local(mol.num_atoms(), -1);
  for (int a: atoms)
    local[a] = out.add_atom(mol.atom(a));
  for (int b: bonds) {
    const Bond &bd = mol.bond(b);
    if (local[bd.begin] < 0 || local[bd.end] < 0)
      throw DataError("submolecule bond outside the atom set");
    out.add_bond(local[bd.begin], local[bd.end], bd.order);
  }
  return out;
}

}  // namespace g2g
