//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef G2G_EVALKIT_ORACLE_H_
#define G2G_EVALKIT_ORACLE_H_

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "g2g/molgraph/molecule.h"

namespace g2g {

/// Property scorer over SMILES strings; nullopt marks a molecule the oracle
/// could not score.
class PropertyOracle {
public:
  virtual ~PropertyOracle() = default;
  virtual std::string name() const = 0;
  virtual std::vector<std::optional<double>>
  score(std::span<const std::string> smiles) const = 0;
};

/// Average molecular weight including implicit hydrogens.
double molecular_weight(const Molecule &mol);
/// Size of the minimum cycle basis.
int ring_count(const Molecule &mol);
int heavy_atom_count(const Molecule &mol);
/// F, Cl, Br and I atoms.
int halogen_count(const Molecule &mol);

/// Names accepted by builtin_oracle().
std::vector<std::string> builtin_oracle_names();
/// Throws std::invalid_argument for an unknown name.
std::unique_ptr<PropertyOracle> builtin_oracle(std::string_view name);

/// Runs `command` through the shell once per score() call, feeding one
/// SMILES per line on standard input and reading one real per line from
/// standard output. Lines that are not finite numbers yield nullopt; a
/// non-zero exit status or a line-count mismatch throws DataError.
std::unique_ptr<PropertyOracle> external_oracle(std::string command);

}  // namespace g2g

#endif  // G2G_EVALKIT_ORACLE_H_
