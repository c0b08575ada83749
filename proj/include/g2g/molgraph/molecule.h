//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef G2G_MOLGRAPH_MOLECULE_H_
#define G2G_MOLGRAPH_MOLECULE_H_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "g2g/errors.h"

namespace g2g {

struct ElementInfo {
  std::string_view symbol;
  int atomic_number;
  double weight;
  // Allowed neutral valences, ascending.
  std::span<const int> valences;
  bool organic_subset;
  bool aromatic_allowed;
};

/// Returns nullptr for unknown symbols. Lookup is case sensitive.
const ElementInfo *find_element(std::string_view symbol);

/// Throws DataError for unknown symbols.
const ElementInfo &element_info(std::string_view symbol);

enum class BondOrder : std::uint8_t {
  kSingle = 1,
  kDouble = 2,
  kTriple = 3,
  kAromatic = 4,
};

/// Contribution of a bond to the valence sum; aromatic bonds count as 1.
int bond_valence(BondOrder order);

struct Atom {
  std::string element;
  int charge = 0;
  // Hydrogens written explicitly (bracket atoms). Organic-subset atoms keep 0
  // and get implicit hydrogens from the valence table.
  int hydrogens = 0;
  bool aromatic = false;

  friend bool operator==(const Atom &, const Atom &) = default;
};

struct Bond {
  int begin;
  int end;
  BondOrder order;

  int other(int atom) const { return atom == begin ? end : begin; }
};

struct Neighbor {
  int atom;
  int bond;
};

/// Attributed undirected graph of atoms and bonds.
///
/// Structural invariants (distinct endpoints, one bond per pair) are enforced
/// on insertion. Chemical invariants (connectivity, valence) are checked by
/// validate() and by the SMILES parser.
class Molecule {
public:
  int add_atom(Atom atom);
  int add_bond(int a, int b, BondOrder order);

  int num_atoms() const { return static_cast<int>(atoms_.size()); }
  int num_bonds() const { return static_cast<int>(bonds_.size()); }

  const std::vector<Atom> &atoms() const { return atoms_; }
  const std::vector<Bond> &bonds() const { return bonds_; }
  const Atom &atom(int i) const { return atoms_[i]; }
  Atom &mutable_atom(int i) { return atoms_[i]; }
  const Bond &bond(int i) const { return bonds_[i]; }
  void set_bond_order(int bond, BondOrder order) { bonds_[bond].order = order; }

  std::span<const Neighbor> neighbors(int atom) const { return adj_[atom]; }
  int degree(int atom) const { return static_cast<int>(adj_[atom].size()); }

  /// Bond index between a and b, or -1.
  int find_bond(int a, int b) const;

  bool is_connected() const;

  /// Throws DataError when the molecule is empty, disconnected or violates
  /// the valence table.
  void validate() const;

private:
  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<std::vector<Neighbor>> adj_;
};

/// Sum of bond valences around an atom (aromatic bonds count 1).
int bond_valence_sum(const Molecule &mol, int atom);

/// Valence capacity after the formal-charge shift.
int max_valence(const Atom &atom);

/// Hydrogens implied by the valence table for atoms without explicit ones.
int implicit_hydrogens(const Molecule &mol, int atom);

/// Explicit plus implicit hydrogens.
int total_hydrogens(const Molecule &mol, int atom);

struct ValenceViolation {
  int atom;
  int used;
  int allowed;
};

/// Empty iff every atom fits the valence table. Aromatic carbons without an
/// exocyclic double bond reserve one unit for their pi contribution;
/// aromatic heteroatoms may donate a lone pair instead.
std::vector<ValenceViolation> check_valence(const Molecule &mol);

/// Bonds that lie on at least one cycle (i.e. are not bridges).
std::vector<bool> ring_bond_mask(const Molecule &mol);

/// Copy of the induced subgraph on `atoms` (in the given order) restricted
/// to `bonds`.
Molecule submolecule(const Molecule &mol, std::span<const int> atoms,
                     std::span<const int> bonds);

}  // namespace g2g

#endif  // G2G_MOLGRAPH_MOLECULE_H_
