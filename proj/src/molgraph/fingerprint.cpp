//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "g2g/molgraph/fingerprint.h"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <utility>

namespace g2g {
namespace {

std::uint64_t mix(std::uint64_t x) {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t combine(std::uint64_t seed, std::uint64_t value) {
  return mix(seed ^ (mix(value) + 0x632be59bd9b4e019ULL + (seed << 6)
                     + (seed >> 2)));
}

}  // namespace

Fingerprint::Fingerprint(int radius, int nbits)
    : radius_(radius), nbits_(nbits) {
  if (radius < 0)
    throw std::invalid_argument("fingerprint radius must be non-negative");
  if (nbits <= 0 || !std::has_single_bit(static_cast<unsigned>(nbits)))
    throw std::invalid_argument("fingerprint width must be a power of two");
  words_.assign((nbits + 63) / 64, 0);
}

void Fingerprint::set(int bit) {
  words_[bit / 64] |= std::uint64_t { 1 } << (bit % 64);
}

bool Fingerprint::test(int bit) const {
  return (words_[bit / 64] >> (bit % 64)) & 1;
}

int Fingerprint::popcount() const {
  int n = 0;
  for (auto w: words_)
    n += std::popcount(w);
  return n;
}

Fingerprint morgan_fingerprint(const Molecule &mol, int radius, int nbits) {
  Fingerprint fp(radius, nbits);
  int n = mol.num_atoms();
  std::vector<bool> ring = ring_bond_mask(mol);
  std::vector<std::uint64_t> hash(n), next(n);
  for (int a = 0; a < n; ++a) {
    const Atom &at = mol.atom(a);
    bool in_ring = false;
    for (const Neighbor &nb: mol.neighbors(a))
      in_ring = in_ring || ring[nb.bond];
    std::uint64_t h = 0;
    h = combine(h, element_info(at.element).atomic_number);
    h = combine(h, mol.degree(a));
    h = combine(h, total_hydrogens(mol, a));
    h = combine(h, static_cast<std::uint64_t>(at.charge + 16));
    h = combine(h, at.aromatic ? 1 : 0);
    h = combine(h, in_ring ? 1 : 0);
    hash[a] = h;
  }
  auto fold = [&](std::uint64_t h) {
    fp.set(static_cast<int>(h & static_cast<std::uint64_t>(nbits - 1)));
  };
  for (auto h: hash)
    fold(h);

  std::vector<std::pair<std::uint64_t, std::uint64_t>> env;
  for (int r = 1; r <= radius; ++r) {
    for (int a = 0; a < n; ++a) {
      env.clear();
      for (const Neighbor &nb: mol.neighbors(a))
        env.emplace_back(static_cast<std::uint64_t>(mol.bond(nb.bond).order),
                         hash[nb.atom]);
      std::sort(env.begin(), env.end());
      std::uint64_t h = combine(static_cast<std::uint64_t>(r), hash[a]);
      for (const auto &[order, nh]: env)
        h = combine(combine(h, order), nh);
      next[a] = h;
    }
    std::swap(hash, next);
    for (auto h: hash)
      fold(h);
  }
  return fp;
}

double tanimoto(const Fingerprint &a, const Fingerprint &b) {
  if (a.nbits() != b.nbits() || a.radius() != b.radius())
    throw std::invalid_argument("tanimoto of fingerprints with different "
                                "parameters");
  int both = 0, either = 0;
  for (std::size_t i = 0; i < a.words().size(); ++i) {
    both += std::popcount(a.words()[i] & b.words()[i]);
    either += std::popcount(a.words()[i] | b.words()[i]);
  }
  if (either == 0)
    return 1.0;
  return static_cast<double>(both) / either;
}

double similarity(const Molecule &a, const Molecule &b) {
  return tanimoto(morgan_fingerprint(a), morgan_fingerprint(b));
}

}  // namespace g2g
