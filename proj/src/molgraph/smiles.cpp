//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "g2g/molgraph/smiles.h"

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <utility>

namespace g2g {

SmilesError::SmilesError(const std::string &what, std::size_t position)
    : DataError("SMILES error at position " + std::to_string(position) + ": "
                + what),
      position_(position) { }

namespace {

bool is_space(char c) {
  return std::isspace(static_cast<unsigned char>(c)) != 0;
}

bool is_digit(char c) {
  return std::isdigit(static_cast<unsigned char>(c)) != 0;
}

class SmilesParser {
public:
  SmilesParser(std::string_view text, std::vector<std::string> *warnings)
      : s_(text), warnings_(warnings) { }

  Molecule parse() {
    while (pos_ < s_.size() && !is_space(s_[pos_]))
      step();

    if (mol_.num_atoms() == 0)
      throw SmilesError("empty SMILES", pos_);
    if (pending_)
      throw SmilesError("dangling bond symbol", pending_pos_);
    if (!branches_.empty())
      throw SmilesError("unclosed branch", pos_);
    if (!rings_.empty())
      throw SmilesError("unmatched ring closure "
                            + std::to_string(rings_.begin()->first),
                        rings_.begin()->second.pos);

    resolve_aromaticity();
    mol_.validate();
    return std::move(mol_);
  }

private:
  struct RingOpen {
    int atom;
    std::optional<BondOrder> order;
    std::size_t pos;
  };

  void step() {
    char c = s_[pos_];
    switch (c) {
    case '(':
      if (prev_ < 0)
        throw SmilesError("branch before any atom", pos_);
      if (pending_)
        throw SmilesError("bond symbol before branch", pos_);
      branches_.push_back(prev_);
      ++pos_;
      return;
    case ')':
      if (branches_.empty())
        throw SmilesError("unmatched ')'", pos_);
      if (pending_)
        throw SmilesError("dangling bond symbol", pending_pos_);
      prev_ = branches_.back();
      branches_.pop_back();
      ++pos_;
      return;
    case '-':
      set_pending(BondOrder::kSingle);
      return;
    case '=':
      set_pending(BondOrder::kDouble);
      return;
    case '#':
      set_pending(BondOrder::kTriple);
      return;
    case ':':
      set_pending(BondOrder::kAromatic);
      return;
    case '/':
    case '\\':
      warn_stereo();
      set_pending(BondOrder::kSingle);
      return;
    case '.':
      throw SmilesError("multi-fragment SMILES are not supported", pos_);
    case '*':
      throw SmilesError("wildcard atoms are not supported", pos_);
    case '[':
      bracket_atom();
      return;
    case '%':
      ++pos_;
      if (pos_ + 2 > s_.size() || !is_digit(s_[pos_])
          || !is_digit(s_[pos_ + 1]))
        throw SmilesError("'%' must be followed by two digits", pos_ - 1);
      ring_closure((s_[pos_] - '0') * 10 + (s_[pos_ + 1] - '0'), pos_ - 1);
      pos_ += 2;
      return;
    default:
      break;
    }
    if (is_digit(c)) {
      ring_closure(c - '0', pos_);
      ++pos_;
      return;
    }
    organic_atom();
  }

  void set_pending(BondOrder order) {
    if (prev_ < 0)
      throw SmilesError("bond symbol before any atom", pos_);
    if (pending_)
      throw SmilesError("consecutive bond symbols", pos_);
    pending_ = order;
    pending_pos_ = pos_;
    ++pos_;
  }

  void warn_stereo() {
    if (!stereo_warned_ && warnings_ != nullptr)
      warnings_->push_back("stereochemistry markers were ignored");
    stereo_warned_ = true;
  }

  void organic_atom() {
    std::size_t start = pos_;
    char c = s_[pos_];
    Atom atom;
    if (c == 'C' && pos_ + 1 < s_.size() && s_[pos_ + 1] == 'l') {
      atom.element = "Cl";
      pos_ += 2;
    } else if (c == 'B' && pos_ + 1 < s_.size() && s_[pos_ + 1] == 'r') {
      atom.element = "Br";
      pos_ += 2;
    } else {
      switch (c) {
      case 'B':
      case 'C':
      case 'N':
      case 'O':
      case 'P':
      case 'S':
      case 'F':
      case 'I':
        atom.element = std::string(1, c);
        break;
      case 'b':
      case 'c':
      case 'n':
      case 'o':
      case 'p':
      case 's':
        atom.element = std::string(1, static_cast<char>(std::toupper(c)));
        atom.aromatic = true;
        break;
      default:
        throw SmilesError(std::string("unexpected character '") + c + "'",
                          pos_);
      }
      ++pos_;
    }
    add_atom(std::move(atom), start);
  }

  void bracket_atom() {
    std::size_t start = pos_;
    ++pos_;
    auto at_end = [&] {
      if (pos_ >= s_.size())
        throw SmilesError("unterminated bracket atom", start);
    };
    at_end();
    if (is_digit(s_[pos_]))
      throw SmilesError("isotopes are not supported", pos_);

    Atom atom;
    char c = s_[pos_];
    if (std::islower(static_cast<unsigned char>(c))) {
      atom.aromatic = true;
      if (s_.substr(pos_, 2) == "se") {
        atom.element = "Se";
        pos_ += 2;
      } else {
        atom.element = std::string(1, static_cast<char>(std::toupper(c)));
        ++pos_;
      }
    } else if (std::isupper(static_cast<unsigned char>(c))) {
      if (pos_ + 1 < s_.size()
          && std::islower(static_cast<unsigned char>(s_[pos_ + 1]))
          && find_element(s_.substr(pos_, 2)) != nullptr) {
        atom.element = std::string(s_.substr(pos_, 2));
        pos_ += 2;
      } else {
        atom.element = std::string(1, c);
        ++pos_;
      }
    } else {
      throw SmilesError("expected element symbol", pos_);
    }
    const ElementInfo *info = find_element(atom.element);
    if (info == nullptr)
      throw SmilesError("unknown element '" + atom.element + "'", start + 1);
    if (atom.aromatic && !info->aromatic_allowed)
      throw SmilesError("element cannot be aromatic", start + 1);

    at_end();
    if (s_[pos_] == '@') {
      warn_stereo();
      while (pos_ < s_.size() && s_[pos_] == '@')
        ++pos_;
      at_end();
    }
    if (s_[pos_] == 'H') {
      ++pos_;
      at_end();
      atom.hydrogens = 1;
      if (is_digit(s_[pos_])) {
        atom.hydrogens = s_[pos_] - '0';
        ++pos_;
      }
    }
    at_end();
    if (s_[pos_] == '+' || s_[pos_] == '-') {
      char sign = s_[pos_];
      int mag = 1;
      ++pos_;
      at_end();
      if (is_digit(s_[pos_])) {
        mag = s_[pos_] - '0';
        ++pos_;
      } else {
        while (pos_ < s_.size() && s_[pos_] == sign) {
          ++mag;
          ++pos_;
        }
      }
      atom.charge = sign == '+' ? mag : -mag;
    }
    at_end();
    if (s_[pos_] == ':')
      throw SmilesError("atom classes are not supported", pos_);
    if (s_[pos_] != ']')
      throw SmilesError("expected ']'", pos_);
    ++pos_;
    add_atom(std::move(atom), start);
  }

  void add_atom(Atom atom, std::size_t at) {
    int idx = mol_.add_atom(std::move(atom));
    if (prev_ >= 0) {
      add_bond(prev_, idx, pending_, at);
    } else if (pending_) {
      throw SmilesError("bond symbol before any atom", pending_pos_);
    }
    pending_.reset();
    prev_ = idx;
  }

  void add_bond(int a, int b, std::optional<BondOrder> order, std::size_t at) {
    if (a == b)
      throw SmilesError("ring closure to the same atom", at);
    if (mol_.find_bond(a, b) >= 0)
      throw SmilesError("duplicate bond", at);
    int bond = mol_.add_bond(a, b, order.value_or(BondOrder::kSingle));
    implicit_.resize(bond + 1, false);
    implicit_[bond] = !order.has_value();
  }

  void ring_closure(int number, std::size_t at) {
    if (prev_ < 0)
      throw SmilesError("ring closure before any atom", at);
    auto it = rings_.find(number);
    if (it == rings_.end()) {
      rings_.emplace(number, RingOpen { prev_, pending_, at });
    } else {
      std::optional<BondOrder> order = pending_;
      if (it->second.order) {
        if (order && *order != *it->second.order)
          throw SmilesError("conflicting ring-closure bond orders", at);
        order = it->second.order;
      }
      add_bond(it->second.atom, prev_, order, at);
      rings_.erase(it);
    }
    pending_.reset();
  }

  void resolve_aromaticity() {
    std::vector<bool> ring = ring_bond_mask(mol_);
    for (int b = 0; b < mol_.num_bonds(); ++b) {
      const Bond &bd = mol_.bond(b);
      bool both = mol_.atom(bd.begin).aromatic && mol_.atom(bd.end).aromatic;
      if (implicit_[b] && both && ring[b])
        mol_.set_bond_order(b, BondOrder::kAromatic);
      if (mol_.bond(b).order == BondOrder::kAromatic && (!both || !ring[b]))
        throw SmilesError("aromatic bond outside an aromatic ring", 0);
    }
    for (int a = 0; a < mol_.num_atoms(); ++a) {
      if (!mol_.atom(a).aromatic)
        continue;
      bool in_ring = false;
      for (const Neighbor &nb: mol_.neighbors(a))
        in_ring = in_ring || ring[nb.bond];
      if (!in_ring)
        throw SmilesError("non-ring atom marked aromatic", 0);
    }
  }

  std::string_view s_;
  std::vector<std::string> *warnings_;
  std::size_t pos_ = 0;
  Molecule mol_;
  std::vector<bool> implicit_;
  std::map<int, RingOpen> rings_;
  std::vector<int> branches_;
  int prev_ = -1;
  std::optional<BondOrder> pending_;
  std::size_t pending_pos_ = 0;
  bool stereo_warned_ = false;
};

}  // namespace

Molecule parse_smiles(std::string_view text,
                      std::vector<std::string> *warnings) {
  return SmilesParser(text, warnings).parse();
}

std::vector<SmilesLine> read_smiles_lines(std::istream &in) {
  std::vector<SmilesLine> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::size_t b = 0;
    while (b < line.size() && is_space(line[b]))
      ++b;
    if (b == line.size() || line[b] == '#')
      continue;
    std::size_t e = b;
    while (e < line.size() && !is_space(line[e]))
      ++e;
    out.push_back({ number, line.substr(b, e - b) });
  }
  return out;
}

}  // namespace g2g
