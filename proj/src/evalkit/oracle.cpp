//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "g2g/evalkit/oracle.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include <sys/wait.h>
#include <unistd.h>

#include "g2g/errors.h"
#include "g2g/molgraph/rings.h"
#include "g2g/molgraph/smiles.h"

namespace g2g {
namespace {

using Scorer = std::function<double(const Molecule &)>;

class BuiltinOracle: public PropertyOracle {
public:
  BuiltinOracle(std::string name, Scorer scorer)
      : name_(std::move(name)), scorer_(std::move(scorer)) { }

  std::string name() const override { return name_; }

  std::vector<std::optional<double>>
  score(std::span<const std::string> smiles) const override {
    std::vector<std::optional<double>> out;
    out.reserve(smiles.size());
    for (const std::string &s: smiles) {
      try {
        out.emplace_back(scorer_(parse_smiles(s)));
      } catch (const DataError &) {
        out.emplace_back(std::nullopt);
      }
    }
    return out;
  }

private:
  std::string name_;
  Scorer scorer_;
};

std::optional<double> parse_real(const std::string &line) {
  std::istringstream in(line);
  double v;
  if (!(in >> v) || !std::isfinite(v))
    return std::nullopt;
  std::string rest;
  if (in >> rest)
    return std::nullopt;
  return v;
}

class TempFile {
public:
  TempFile() {
    std::string pattern =
        (std::filesystem::temp_directory_path() / "g2g-oracle-XXXXXX").string();
    fd_ = mkstemp(pattern.data());
    if (fd_ < 0)
      throw DataError("oracle: cannot create temporary file");
    path_ = pattern;
  }
  ~TempFile() {
    close(fd_);
    std::remove(path_.c_str());
  }
  TempFile(const TempFile &) = delete;
  TempFile &operator=(const TempFile &) = delete;
  const std::string &path() const { return path_; }

private:
  int fd_;
  std::string path_;
};

std::string shell_quote(const std::string &s) {
  std::string out = "'";
  for (char c: s) {
    if (c == '\'')
      out += "'\\''";
    else
      out += c;
  }
  return out + "'";
}

class ExternalOracle: public PropertyOracle {
public:
  explicit ExternalOracle(std::string command) : command_(std::move(command)) {
    if (command_.empty())
      throw std::invalid_argument("external oracle: empty command");
  }

  std::string name() const override { return "external:" + command_; }

  std::vector<std::optional<double>>
  score(std::span<const std::string> smiles) const override {
    if (smiles.empty())
      return {};
    TempFile input;
    {
      std::ofstream out(input.path());
      for (const std::string &s: smiles)
        out << s << '\n';
      if (!out)
        throw DataError("external oracle: cannot write input");
    }
    std::string line = "(" + command_ + ") < " + shell_quote(input.path());
    FILE *pipe = popen(line.c_str(), "r");
    if (pipe == nullptr)
      throw DataError("external oracle: cannot start '" + command_ + "'");
    std::string text;
    char buffer[4096];
    std::size_t n;
    while ((n = std::fread(buffer, 1, sizeof buffer, pipe)) > 0)
      text.append(buffer, n);
    int status = pclose(pipe);
    if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0)
      throw DataError("external oracle: '" + command_ + "' failed");
    std::vector<std::optional<double>> out;
    std::istringstream lines(text);
    std::string l;
    while (std::getline(lines, l))
      out.push_back(parse_real(l));
    if (out.size() != smiles.size())
      throw DataError("external oracle: expected "
                      + std::to_string(smiles.size()) + " lines, got "
                      + std::to_string(out.size()));
    return out;
  }

private:
  std::string command_;
};

}  // namespace

double molecular_weight(const Molecule &mol) {
  const double hydrogen = element_info("H").weight;
  double w = 0;
  for (int i = 0; i < mol.num_atoms(); ++i)
    w += element_info(mol.atom(i).element).weight
         + hydrogen * total_hydrogens(mol, i);
  return w;
}

int ring_count(const Molecule &mol) {
  return static_cast<int>(minimum_cycle_basis(mol).size());
}

int heavy_atom_count(const Molecule &mol) {
  int n = 0;
  for (const Atom &a: mol.atoms())
    n += a.element != "H";
  return n;
}

int halogen_count(const Molecule &mol) {
  int n = 0;
  for (const Atom &a: mol.atoms())
    n += a.element == "F" || a.element == "Cl" || a.element == "Br"
         || a.element == "I";
  return n;
}

std::vector<std::string> builtin_oracle_names() {
  return { "molecular_weight", "ring_count", "heavy_atom_count",
           "halogen_count" };
}

std::unique_ptr<PropertyOracle> builtin_oracle(std::string_view name) {
  Scorer s;
  if (name == "molecular_weight")
    s = molecular_weight;
  else if (name == "ring_count")
    s = [](const Molecule &m) { return double(ring_count(m)); };
  else if (name == "heavy_atom_count")
    s = [](const Molecule &m) { return double(heavy_atom_count(m)); };
  else if (name == "halogen_count")
    s = [](const Molecule &m) { return double(halogen_count(m)); };
  else
    throw std::invalid_argument("unknown oracle: " + std::string(name));
  return std::make_unique<BuiltinOracle>(std::string(name), std::move(s));
}

std::unique_ptr<PropertyOracle> external_oracle(std::string command) {
  return std::make_unique<ExternalOracle>(std::move(command));
}

}  // namespace g2g
