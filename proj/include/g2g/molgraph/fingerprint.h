//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef G2G_MOLGRAPH_FINGERPRINT_H_
#define G2G_MOLGRAPH_FINGERPRINT_H_

#include <cstdint>
#include <vector>

#include "g2g/molgraph/molecule.h"

namespace g2g {

inline constexpr int kDefaultFingerprintRadius = 2;
inline constexpr int kDefaultFingerprintBits = 2048;

/// Fixed-length bitset produced by a circular fingerprint of given radius.
class Fingerprint {
public:
  Fingerprint(int radius, int nbits);

  int radius() const { return radius_; }
  int nbits() const { return nbits_; }

  void set(int bit);
  bool test(int bit) const;
  int popcount() const;

  const std::vector<std::uint64_t> &words() const { return words_; }

  friend bool operator==(const Fingerprint &, const Fingerprint &) = default;

private:
  int radius_;
  int nbits_;
  std::vector<std::uint64_t> words_;
};

/// ECFP-style circular fingerprint. Atom environments up to `radius` bonds
/// are hashed from (element, heavy degree, total H, charge, aromaticity,
/// ring membership) and refined with sorted (bond order, neighbor hash)
/// lists; each environment hash is folded into `nbits` buckets.
/// `nbits` must be a power of two and `radius` non-negative.
Fingerprint morgan_fingerprint(const Molecule &mol,
                               int radius = kDefaultFingerprintRadius,
                               int nbits = kDefaultFingerprintBits);

/// |a & b| / |a | b|; 1.0 when both are empty. Throws std::invalid_argument
/// when the fingerprints were built with different parameters.
double tanimoto(const Fingerprint &a, const Fingerprint &b);

/// Tanimoto similarity of default Morgan fingerprints.
double similarity(const Molecule &a, const Molecule &b);

}  // namespace g2g

#endif  // G2G_MOLGRAPH_FINGERPRINT_H_
