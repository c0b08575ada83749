//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "g2g/evalkit/toy_corpus.h"

#include <optional>
#include <random>
#include <stdexcept>
#include <unordered_set>

#include "g2g/molgraph/smiles.h"

namespace g2g {
namespace {

constexpr const char *kCores[] = {
  "c1ccccc1", "C1CCCCC1", "C1CCCC1", "c1ccncc1", "C1CCNCC1",
  "C1CCOCC1", "CCC",      "CCCC",    "CC(C)C",   "CCOC",
  "CCNC",     "CC(=O)N",
};

constexpr const char *kChains[] = {
  "C", "CC", "O", "N", "F", "Cl", "C(=O)O", "CO", "C#N", "OC", "C(=O)N",
};

constexpr const char *kRings[] = {
  "c1ccccc1", "C1CC1", "C1CCCC1", "C1CCCCC1", "c1ccncc1", "C1CCOC1",
};

std::size_t pick(std::mt19937_64 &rng, std::size_t n) { return rng() % n; }

// Bonds atom 0 of `fragment` to a random atom of `mol` that still carries a
// hydrogen. Returns false when no such atom exists.
bool attach(Molecule &mol, const Molecule &fragment, std::mt19937_64 &rng) {
  std::vector<int> sites;
  for (int i = 0; i < mol.num_atoms(); ++i)
    if (mol.atom(i).charge == 0 && total_hydrogens(mol, i) > 0)
      sites.push_back(i);
  if (sites.empty())
    return false;
  int site = sites[pick(rng, sites.size())];
  const int base = mol.num_atoms();
  for (const Atom &a: fragment.atoms())
    mol.add_atom(a);
  for (const Bond &b: fragment.bonds())
    mol.add_bond(base + b.begin, base + b.end, b.order);
  mol.add_bond(site, base, BondOrder::kSingle);
  return true;
}

const Molecule &fragment(std::mt19937_64 &rng, bool ring) {
  static const std::vector<Molecule> chains = [] {
    std::vector<Molecule> v;
    for (const char *s: kChains)
      v.push_back(parse_smiles(s));
    return v;
  }();
  static const std::vector<Molecule> rings = [] {
    std::vector<Molecule> v;
    for (const char *s: kRings)
      v.push_back(parse_smiles(s));
    return v;
  }();
  const auto &pool = ring ? rings : chains;
  return pool[pick(rng, pool.size())];
}

// Grows `mol` by one substituent; nullopt when the result is invalid or
// too large.
std::optional<Molecule> grow(const Molecule &mol, std::mt19937_64 &rng,
                             int max_heavy) {
  Molecule next = mol;
  bool ring = pick(rng, 2) == 0;
  if (!attach(next, fragment(rng, ring), rng))
    return std::nullopt;
  if (next.num_atoms() > max_heavy || !check_valence(next).empty())
    return std::nullopt;
  return next;
}

}  // namespace

std::vector<std::string> toy_corpus(const ToyCorpusOptions &options) {
  if (options.size < 0 || options.variants < 0 || options.max_heavy_atoms < 3)
    throw std::invalid_argument("toy_corpus: bad options");
  std::mt19937_64 rng(options.seed);
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  auto emit = [&](const Molecule &m) {
    std::string s = write_smiles(m);
    if (static_cast<int>(out.size()) < options.size && seen.insert(s).second)
      out.push_back(std::move(s));
  };
  int stalled = 0;
  while (static_cast<int>(out.size()) < options.size) {
    const std::size_t before = out.size();
    Molecule base = parse_smiles(kCores[pick(rng, std::size(kCores))]);
    int extra = static_cast<int>(pick(rng, 3));
    for (int i = 0; i < extra; ++i)
      if (auto g = grow(base, rng, options.max_heavy_atoms))
        base = std::move(*g);
    emit(base);
    for (int v = 0; v < options.variants; ++v)
      if (auto g = grow(base, rng, options.max_heavy_atoms))
        emit(*g);
    stalled = out.size() == before ? stalled + 1 : 0;
    if (stalled > 10000)
      throw std::runtime_error("toy_corpus: fragment space exhausted");
  }
  return out;
}

}  // namespace g2g
