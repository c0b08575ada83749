//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef G2G_CLI_RUN_CONFIG_H_
#define G2G_CLI_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "g2g/advreg/adversarial.h"
#include "g2g/evalkit/curate.h"
#include "g2g/evalkit/report.h"
#include "g2g/vjtnn/model.h"
#include "g2g/vjtnn/train.h"

namespace g2g {

/// Every setting of every command. Each key has a default; text form is
/// one "key = value" line per key.
struct RunConfig {
  std::uint64_t seed = 0;

  ModelConfig model;
  TrainConfig train;
  bool adversarial = false;
  AdversarialConfig gan;

  std::string oracle = "ring_count";
  double similarity = 0.4;
  std::string rule = "improvement:1";
  std::string predicate = "improvement:1";
  int k = 20;
  int toy_size = 500;

  std::string corpus;
  std::string vocab;
  std::string pairs;
  std::string exclude;
  std::string checkpoint_dir;
  std::string checkpoint;
  std::string test;
  std::string report;
  std::string metrics;
  std::string output;
};

/// Key names in output order.
std::vector<std::string> config_keys();

/// Sets one key from text. Throws std::invalid_argument for an unknown key
/// or a value that does not parse.
void set_config_value(RunConfig &config, const std::string &key,
                      const std::string &value);
std::string get_config_value(const RunConfig &config, const std::string &key);

/// Applies "key = value" lines; blank lines and '#' comments are ignored.
/// Throws std::invalid_argument with the line number on any error.
void apply_config_text(RunConfig &config, const std::string &text);
void apply_config_file(RunConfig &config, const std::filesystem::path &path);

/// All keys, round-trippable through apply_config_text().
std::string format_config(const RunConfig &config);

/// Copies the seed into the training configuration.
TrainConfig effective_train_config(const RunConfig &config);

/// "builtin name" or "external:<command>".
std::unique_ptr<PropertyOracle> make_oracle(const std::string &spec);
/// "improvement:<t>" or "range:<src lo>:<src hi>:<tgt lo>:<tgt hi>".
CurationRule parse_rule(const std::string &text);

}  // namespace g2g

#endif  // G2G_CLI_RUN_CONFIG_H_
