//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "g2g/evalkit/report.h"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "g2g/errors.h"
#include "g2g/molgraph/fingerprint.h"
#include "g2g/molgraph/smiles.h"
#include "g2g/text_io.h"

namespace g2g {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_real(std::optional<double> v) {
  if (!v)
    return "-";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, *v);
  return std::string(buf, r.ptr);
}

std::optional<double> parse_field(const std::string &s, std::size_t line) {
  if (s == "-")
    return std::nullopt;
  double v;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw DataError("report line " + std::to_string(line) + ": bad number '"
                    + s + "'");
  return v;
}

std::vector<std::string> split_tabs(const std::string &line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos)
      return out;
    start = tab + 1;
  }
}

bool has_smiles(const Candidate &c) { return c.smiles.has_value(); }

double parse_double(const std::string &s) {
  std::size_t used = 0;
  double v = std::stod(s, &used);
  if (used != s.size())
    throw std::invalid_argument("bad number: " + s);
  return v;
}

}  // namespace

std::string format_report(std::span<const SourceRecord> records) {
  std::size_t k = 0;
  for (const SourceRecord &r: records)
    k = std::max(k, r.candidates.size());
  std::ostringstream out;
  out << "source\tsource_score";
  for (std::size_t i = 1; i <= k; ++i)
    out << "\tcandidate_" << i << "\tsimilarity_" << i << "\tscore_" << i;
  out << '\n';
  for (const SourceRecord &r: records) {
    out << r.source << '\t' << format_real(r.source_score);
    for (std::size_t i = 0; i < k; ++i) {
      Candidate c = i < r.candidates.size() ? r.candidates[i] : Candidate{};
      out << '\t' << c.smiles.value_or("-") << '\t'
          << format_real(c.similarity) << '\t' << format_real(c.score);
    }
    out << '\n';
  }
  return out.str();
}

void write_report(const std::filesystem::path &path,
                  std::span<const SourceRecord> records) {
  write_file_atomic(path, format_report(records));
}

std::vector<SourceRecord> parse_report(const std::string &text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw DataError("report: missing header");
  std::vector<std::string> header = split_tabs(line);
  if (header.size() < 2 || header[0] != "source" || (header.size() - 2) % 3)
    throw DataError("report: malformed header");
  const std::size_t k = (header.size() - 2) / 3;
  std::vector<SourceRecord> out;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty())
      continue;
    std::vector<std::string> f = split_tabs(line);
    if (f.size() != header.size())
      throw DataError("report line " + std::to_string(number) + ": expected "
                      + std::to_string(header.size()) + " fields");
    SourceRecord r;
    r.source = f[0];
    r.source_score = parse_field(f[1], number);
    for (std::size_t i = 0; i < k; ++i) {
      Candidate c;
      if (f[2 + 3 * i] != "-")
        c.smiles = f[2 + 3 * i];
      c.similarity = parse_field(f[3 + 3 * i], number);
      c.score = parse_field(f[4 + 3 * i], number);
      r.candidates.push_back(std::move(c));
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<SourceRecord> read_report(const std::filesystem::path &path) {
  return parse_report(read_file(path));
}

void score_report(std::vector<SourceRecord> &records,
                  const PropertyOracle &oracle) {
  std::vector<std::string> smiles;
  for (const SourceRecord &r: records) {
    smiles.push_back(r.source);
    for (const Candidate &c: r.candidates)
      if (c.smiles)
        smiles.push_back(*c.smiles);
  }
  std::vector<std::optional<double>> scores = oracle.score(smiles);
  std::size_t next = 0;
  for (SourceRecord &r: records) {
    r.source_score = scores[next++];
    std::optional<Fingerprint> source_fp;
    try {
      source_fp = morgan_fingerprint(parse_smiles(r.source));
    } catch (const DataError &) {
    }
    for (Candidate &c: r.candidates) {
      c.similarity.reset();
      c.score.reset();
      if (!c.smiles)
        continue;
      c.score = scores[next++];
      try {
        Fingerprint fp = morgan_fingerprint(parse_smiles(*c.smiles));
        if (source_fp)
          c.similarity = tanimoto(*source_fp, fp);
      } catch (const DataError &) {
        c.score.reset();
      }
    }
  }
}

bool TargetPredicate::operator()(double source, double candidate) const {
  switch (kind) {
  case Kind::kAlways:
    return true;
  case Kind::kImprovement:
    return candidate - source >= threshold;
  case Kind::kRange:
    return candidate >= low && candidate <= high;
  }
  return false;
}

TargetPredicate TargetPredicate::parse(const std::string &text) {
  TargetPredicate p;
  try {
    if (text == "always")
      return p;
    if (text.rfind("improvement:", 0) == 0) {
      p.kind = Kind::kImprovement;
      p.threshold = parse_double(text.substr(12));
      return p;
    }
    if (text.rfind("range:", 0) == 0) {
      std::string rest = text.substr(6);
      std::size_t colon = rest.find(':');
      if (colon != std::string::npos) {
        p.kind = Kind::kRange;
        p.low = parse_double(rest.substr(0, colon));
        p.high = parse_double(rest.substr(colon + 1));
        return p;
      }
    }
  } catch (const std::exception &) {
  }
  throw std::invalid_argument("bad predicate '" + text
                              + "' (always, improvement:<t>, range:<lo>:<hi>)");
}

std::string TargetPredicate::to_string() const {
  switch (kind) {
  case Kind::kAlways:
    return "always";
  case Kind::kImprovement:
    return "improvement:" + format_real(threshold);
  case Kind::kRange:
    return "range:" + format_real(low) + ":" + format_real(high);
  }
  return {};
}

bool valid_candidate(const Candidate &c) {
  return c.smiles && c.score && c.similarity;
}

double success_rate(std::span<const SourceRecord> records, double delta,
                    const TargetPredicate &predicate) {
  if (records.empty())
    return 0;
  std::size_t hits = 0;
  for (const SourceRecord &r: records) {
    double source = r.source_score.value_or(kNaN);
    for (const Candidate &c: r.candidates) {
      if (valid_candidate(c) && *c.similarity >= delta
          && predicate(source, *c.score)) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(records.size());
}

MeanStd improvement(std::span<const SourceRecord> records, double delta) {
  MeanStd out;
  if (records.empty())
    return out;
  std::vector<double> gains;
  for (const SourceRecord &r: records) {
    std::optional<double> best;
    if (r.source_score) {
      for (const Candidate &c: r.candidates) {
        if (!valid_candidate(c) || *c.similarity < delta)
          continue;
        double g = *c.score - *r.source_score;
        if (!best || g > *best)
          best = g;
      }
    }
    gains.push_back(best.value_or(0.0));
  }
  double n = static_cast<double>(gains.size());
  for (double g: gains)
    out.mean += g;
  out.mean /= n;
  for (double g: gains)
    out.std += (g - out.mean) * (g - out.mean);
  out.std = std::sqrt(out.std / n);
  return out;
}

double smiles_similarity(const std::string &a, const std::string &b) {
  return similarity(parse_smiles(a), parse_smiles(b));
}

double diversity(std::span<const SourceRecord> records,
                 const SimilarityFn &sim) {
  double total = 0;
  std::size_t counted = 0;
  for (const SourceRecord &r: records) {
    std::vector<const std::string *> valid;
    for (const Candidate &c: r.candidates)
      if (has_smiles(c))
        valid.push_back(&*c.smiles);
    if (valid.size() < 2)
      continue;
    double sum = 0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < valid.size(); ++i) {
      for (std::size_t j = i + 1; j < valid.size(); ++j) {
        sum += 1.0 - sim(*valid[i], *valid[j]);
        ++pairs;
      }
    }
    total += sum / static_cast<double>(pairs);
    ++counted;
  }
  return counted ? total / static_cast<double>(counted) : 0.0;
}

Novelty novelty(const std::set<std::string> &generated,
                const std::set<std::string> &training_targets) {
  if (training_targets.empty())
    throw std::invalid_argument("novelty: empty training target set");
  std::size_t shared = 0;
  for (const std::string &s: generated)
    shared += training_targets.count(s);
  Novelty n;
  n.over_training = 1.0 - static_cast<double>(shared)
                              / static_cast<double>(training_targets.size());
  n.over_generated =
      generated.empty() ? kNaN
                        : 1.0 - static_cast<double>(shared)
                                    / static_cast<double>(generated.size());
  return n;
}

std::set<std::string> generated_set(std::span<const SourceRecord> records) {
  std::set<std::string> out;
  for (const SourceRecord &r: records) {
    for (const Candidate &c: r.candidates) {
      if (!c.smiles)
        continue;
      try {
        out.insert(write_smiles(parse_smiles(*c.smiles)));
      } catch (const DataError &) {
      }
    }
  }
  return out;
}

EvalReport evaluate_report(std::span<const SourceRecord> records, double delta,
                           const TargetPredicate &predicate,
                           const std::set<std::string> &training_targets) {
  EvalReport e;
  e.sources = records.size();
  for (const SourceRecord &r: records) {
    e.candidates += r.candidates.size();
    for (const Candidate &c: r.candidates)
      e.failed_decodes += !c.smiles;
  }
  e.delta = delta;
  e.predicate = predicate.to_string();
  e.success = success_rate(records, delta, predicate);
  e.improvement = improvement(records, delta);
  e.diversity = diversity(records);
  if (!training_targets.empty())
    e.novelty = novelty(generated_set(records), training_targets);
  return e;
}

nlohmann::json to_json(const EvalReport &r) {
  nlohmann::json j = {
    { "sources", r.sources },
    { "candidates", r.candidates },
    { "failed_decodes", r.failed_decodes },
    { "delta", r.delta },
    { "predicate", r.predicate },
    { "success_rate", r.success },
    { "improvement_mean", r.improvement.mean },
    { "improvement_std", r.improvement.std },
    { "diversity", r.diversity },
  };
  if (r.novelty) {
    j["novelty"] = r.novelty->over_training;
    if (std::isnan(r.novelty->over_generated))
      j["novelty_over_generated"] = nullptr;
    else
      j["novelty_over_generated"] = r.novelty->over_generated;
  } else {
    j["novelty"] = nullptr;
    j["novelty_over_generated"] = nullptr;
  }
  return j;
}

std::string format_text(const EvalReport &r) {
  std::ostringstream out;
  out.precision(4);
  out << std::fixed;
  out << "sources          " << r.sources << '\n'
      << "candidates       " << r.candidates << " (" << r.failed_decodes
      << " failed decodes)\n"
      << "similarity >=    " << r.delta << '\n'
      << "predicate        " << r.predicate << '\n'
      << "success rate     " << r.success << '\n'
      << "improvement      " << r.improvement.mean << " +- "
      << r.improvement.std << '\n'
      << "diversity        " << r.diversity << '\n';
  if (r.novelty)
    out << "novelty          " << r.novelty->over_training
        << " (over generated: " << r.novelty->over_generated << ")\n";
  else
    out << "novelty          n/a (no training targets)\n";
  return out.str();
}

}  // namespace g2g
