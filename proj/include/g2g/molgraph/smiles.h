//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef G2G_MOLGRAPH_SMILES_H_
#define G2G_MOLGRAPH_SMILES_H_

#include <cstddef>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "g2g/molgraph/molecule.h"

namespace g2g {

class SmilesError: public DataError {
public:
  SmilesError(const std::string &what, std::size_t position);

  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

/// Parses a single-fragment SMILES string. Parsing stops at the first
/// whitespace character. Stereo markers are dropped (a note is appended to
/// `warnings` when given); isotopes, atom classes, wildcards and dot-separated
/// fragments are rejected. The result has passed Molecule::validate().
Molecule parse_smiles(std::string_view text,
                      std::vector<std::string> *warnings = nullptr);

/// Canonical SMILES. Isomorphic molecules produce identical strings.
std::string write_smiles(const Molecule &mol);

/// Canonical key of a molecule whose atoms carry extra integer labels. Two
/// (molecule, labels) pairs have equal keys iff a label-preserving
/// isomorphism exists.
std::string canonical_key(const Molecule &mol, std::span<const int> labels);

struct CanonicalForm {
  std::string smiles;
  // Atom index written at each position of `smiles`.
  std::vector<int> output_order;
};

CanonicalForm canonical_form(const Molecule &mol,
                             std::span<const int> labels = {});

/// True when the molecules are isomorphic as attributed graphs.
bool isomorphic(const Molecule &a, const Molecule &b);

struct SmilesLine {
  std::size_t line_number;
  std::string smiles;
};

/// Reads one SMILES per line; blank lines and lines starting with '#' are
/// skipped, and anything after the first whitespace is ignored.
std::vector<SmilesLine> read_smiles_lines(std::istream &in);

}  // namespace g2g

#endif  // G2G_MOLGRAPH_SMILES_H_
