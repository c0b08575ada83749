//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cstdlib>
#include <iostream>
#include <map>
#include <stdexcept>

#include <CLI11.hpp>

#include "g2g/cli/pipeline.h"
#include "g2g/cli/run_config.h"
#include "g2g/errors.h"
#include "g2g/evalkit/toy_corpus.h"
#include "g2g/molgraph/smiles.h"
#include "g2g/text_io.h"

namespace g2g {
namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kNumeric = 3 };

class UsageError: public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

const std::string &require(const std::string &value, const char *key,
                           const char *command) {
  if (value.empty())
    throw UsageError(std::string(command) + ": '" + key + "' is required");
  return value;
}

void print_log(const std::vector<std::string> &log) {
  for (const std::string &l: log)
    std::cerr << "warning: " << l << '\n';
}

std::vector<Molecule> parse_all(const std::vector<std::string> &smiles,
                                const std::string &what) {
  std::vector<Molecule> out;
  for (std::size_t i = 0; i < smiles.size(); ++i) {
    try {
      out.push_back(parse_smiles(smiles[i]));
    } catch (const DataError &e) {
      throw DataError(what + " molecule " + std::to_string(i + 1) + ": "
                      + e.what());
    }
  }
  return out;
}

void run_vocab(const RunConfig &c) {
  auto mols = parse_all(read_smiles_file(require(c.corpus, "corpus", "vocab")),
                        c.corpus);
  ClusterVocab vocab = build_vocab(mols);
  write_vocab(vocab, require(c.vocab, "vocab", "vocab"));
  std::cerr << "vocab: " << vocab.size() << " clusters from " << mols.size()
            << " molecules\n";
}

void run_curate(const RunConfig &c) {
  std::vector<std::string> corpus =
      read_smiles_file(require(c.corpus, "corpus", "curate"));
  const std::string &out = require(c.pairs, "pairs", "curate");
  CurateOptions opt;
  opt.similarity = c.similarity;
  opt.rule = parse_rule(c.rule);
  if (!c.exclude.empty())
    opt.excluded = read_smiles_file(c.exclude);
  auto oracle = make_oracle(c.oracle);
  CurationResult r = curate_pairs(corpus, *oracle, opt);
  print_log(r.log);
  write_pairs(out, r.pairs);
  std::cerr << "curate: " << r.pairs.size() << " pairs\n";
}

void run_train(const RunConfig &c) {
  ClusterVocab vocab = read_vocab(require(c.vocab, "vocab", "train"));
  std::vector<PairLine> lines = read_pairs(require(c.pairs, "pairs", "train"));
  const std::string &dir = require(c.checkpoint_dir, "checkpoint_dir", "train");
  std::vector<std::string> log;
  std::vector<PreparedPair> pairs = prepare_pairs(lines, vocab, &log);
  print_log(log);
  if (pairs.empty())
    throw DataError("train: no usable pairs in " + c.pairs);
  std::filesystem::create_directories(dir);
  write_file_atomic(std::filesystem::path(dir) / "config.txt",
                    format_config(c));
  Model model(c.model, std::move(vocab), c.seed);
  std::unique_ptr<AdversarialRegularizer> adv;
  if (c.adversarial)
    adv = std::make_unique<AdversarialRegularizer>(model, c.gan, c.seed);
  std::vector<EpochReport> reports =
      train(model, pairs, effective_train_config(c), adv.get());
  for (const EpochReport &r: reports)
    std::cerr << "epoch " << r.epoch << "  loss " << r.mean_loss << "  lr "
              << r.lr << "  steps " << r.steps << "  " << r.checkpoint.string()
              << '\n';
}

std::filesystem::path resolve_checkpoint(const RunConfig &c) {
  if (!c.checkpoint.empty())
    return c.checkpoint;
  if (c.checkpoint_dir.empty())
    throw UsageError("translate: 'checkpoint' or 'checkpoint_dir' is required");
  for (int epoch = 999; epoch >= 1; --epoch) {
    auto p = checkpoint_path(c.checkpoint_dir, epoch);
    if (std::filesystem::exists(p))
      return p;
  }
  throw DataError("translate: no checkpoint in " + c.checkpoint_dir);
}

void run_translate(const RunConfig &c) {
  std::vector<std::string> test =
      read_smiles_file(require(c.test, "test", "translate"));
  const std::string &out = require(c.report, "report", "translate");
  LoadedModel loaded = load_model(resolve_checkpoint(c));
  std::vector<std::string> log;
  std::vector<SourceRecord> records =
      translate_sources(*loaded.model, test, c.k, c.seed, &log);
  print_log(log);
  write_report(out, records);
  std::cerr << "translate: " << records.size() << " sources, K = " << c.k
            << '\n';
}

void run_evaluate(const RunConfig &c) {
  std::vector<SourceRecord> records =
      read_report(require(c.report, "report", "evaluate"));
  TargetPredicate predicate = TargetPredicate::parse(c.predicate);
  auto oracle = make_oracle(c.oracle);
  score_report(records, *oracle);
  std::set<std::string> targets;
  if (!c.pairs.empty()) {
    std::vector<PairLine> lines = read_pairs(c.pairs);
    targets = pair_targets(lines);
  }
  EvalReport e = evaluate_report(records, c.similarity, predicate, targets);
  nlohmann::json j = to_json(e);
  j["oracle"] = oracle->name();
  if (!c.metrics.empty())
    write_file_atomic(c.metrics, j.dump(2) + "\n");
  if (!c.output.empty())
    write_report(c.output, records);
  std::cout << format_text(e);
}

void run_toy_corpus(const RunConfig &c) {
  ToyCorpusOptions opt;
  opt.size = c.toy_size;
  opt.seed = c.seed;
  std::string text;
  for (const std::string &s: toy_corpus(opt))
    text += s + "\n";
  write_file_atomic(require(c.output, "output", "toy-corpus"), text);
}

void run_config(const RunConfig &c) {
  std::string text = format_config(c);
  if (c.output.empty())
    std::cout << text;
  else
    write_file_atomic(c.output, text);
}

std::string flag_name(std::string key) {
  for (char &ch: key)
    if (ch == '_')
      ch = '-';
  return "--" + key;
}

int run(int argc, char **argv) {
  CLI::App app{ "Molecule-to-molecule translation with junction-tree "
                "encoder-decoders" };
  app.require_subcommand(1);
  app.set_version_flag("--version", "graph2graph 1.0.0");

  struct Command {
    const char *name;
    const char *help;
    void (*fn)(const RunConfig &);
  };
  const Command commands[] = {
    { "vocab", "Build the cluster vocabulary of a corpus", run_vocab },
    { "curate", "Extract training pairs from a scored corpus", run_curate },
    { "train", "Train a translation model on a pair file", run_train },
    { "translate", "Translate test molecules into a report", run_translate },
    { "evaluate", "Score a report and print the metrics", run_evaluate },
    { "toy-corpus", "Write a generated corpus of small molecules",
      run_toy_corpus },
    { "config", "Print the effective configuration", run_config },
  };

  std::string config_file;
  std::map<std::string, std::string> flags;
  std::vector<std::pair<CLI::App *, const Command *>> subs;
  for (const Command &cmd: commands) {
    CLI::App *sub = app.add_subcommand(cmd.name, cmd.help);
    sub->add_option("--config", config_file,
                    "File of 'key = value' lines; flags override it");
    for (const std::string &key: config_keys()) {
      sub->add_option_function<std::string>(
          flag_name(key),
          [&flags, key](const std::string &v) { flags[key] = v; },
          "config key " + key);
    }
    subs.push_back({ sub, &cmd });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  RunConfig config;
  if (const char *env = std::getenv("GRAPH2GRAPH_SEED"))
    set_config_value(config, "seed", env);
  if (!config_file.empty())
    apply_config_file(config, config_file);
  for (const auto &[key, value]: flags)
    set_config_value(config, key, value);

  for (const auto &[sub, cmd]: subs) {
    if (sub->parsed()) {
      cmd->fn(config);
      return kOk;
    }
  }
  return kUsage;
}

}  // namespace
}  // namespace g2g

int main(int argc, char **argv) {
  try {
    return g2g::run(argc, argv);
  } catch (const g2g::NumericError &e) {
    std::cerr << "graph2graph: numeric failure: " << e.what() << '\n';
    return g2g::kNumeric;
  } catch (const g2g::DataError &e) {
    std::cerr << "graph2graph: " << e.what() << '\n';
    return g2g::kData;
  } catch (const std::invalid_argument &e) {
    std::cerr << "graph2graph: " << e.what() << '\n';
    return g2g::kUsage;
  } catch (const std::exception &e) {
    std::cerr << "graph2graph: " << e.what() << '\n';
    return g2g::kData;
  }
}
