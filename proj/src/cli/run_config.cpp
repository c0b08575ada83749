//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "g2g/cli/run_config.h"

#include <charconv>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "g2g/text_io.h"

namespace g2g {
namespace {

struct Key {
  std::string name;
  std::function<void(RunConfig &, const std::string &)> set;
  std::function<std::string(const RunConfig &)> get;
};

template <typename T>
T parse_number(const std::string &text) {
  T v{};
  auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size())
    throw std::invalid_argument("'" + text + "' is not a number");
  return v;
}

template <typename T>
std::string format_number(T v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

template <typename T, typename Access>
Key number_key(std::string name, Access access, T min) {
  return { name,
           [access, min, name](RunConfig &c, const std::string &v) {
             T x = parse_number<T>(v);
             if (!(x >= min))
               throw std::invalid_argument(name + " must be at least "
                                           + format_number(min));
             access(c) = x;
           },
           [access](const RunConfig &c) {
             return format_number(access(const_cast<RunConfig &>(c)));
           } };
}

template <typename Access>
Key string_key(std::string name, Access access) {
  return { std::move(name),
           [access](RunConfig &c, const std::string &v) { access(c) = v; },
           [access](const RunConfig &c) {
             return access(const_cast<RunConfig &>(c));
           } };
}

template <typename Access>
Key bool_key(std::string name, Access access) {
  return { name,
           [access, name](RunConfig &c, const std::string &v) {
             if (v == "true" || v == "1")
               access(c) = true;
             else if (v == "false" || v == "0")
               access(c) = false;
             else
               throw std::invalid_argument(name + " must be true or false");
           },
           [access](const RunConfig &c) {
             return std::string(access(const_cast<RunConfig &>(c)) ? "true"
                                                                   : "false");
           } };
}

#define FIELD(expr) [](RunConfig &c) -> auto & { return c.expr; }

const std::vector<Key> &keys() {
  static const std::vector<Key> table = {
    number_key<std::uint64_t>("seed", FIELD(seed), 0),
    number_key<int>("hidden_dim", FIELD(model.hidden_dim), 1),
    number_key<int>("latent_dim", FIELD(model.latent_dim), 1),
    number_key<int>("graph_iterations", FIELD(model.graph_iterations), 1),
    number_key<int>("tree_iterations", FIELD(model.tree_iterations), 1),
    number_key<int>("assembly_iterations", FIELD(model.assembly_iterations), 1),
    number_key<double>("kl_weight", FIELD(model.kl_weight), 0.0),
    number_key<int>("max_nodes", FIELD(model.max_nodes), 1),
    { "precision",
      [](RunConfig &c, const std::string &v) {
        if (v == "float32")
          c.model.precision = Precision::kFloat32;
        else if (v == "float64")
          c.model.precision = Precision::kFloat64;
        else
          throw std::invalid_argument("precision must be float32 or float64");
      },
      [](const RunConfig &c) {
        return std::string(c.model.precision == Precision::kFloat32
                               ? "float32"
                               : "float64");
      } },
    number_key<int>("epochs", FIELD(train.epochs), 1),
    number_key<double>("lr", FIELD(train.lr), 0.0),
    number_key<double>("lr_decay", FIELD(train.lr_decay), 0.0),
    number_key<int>("batch_size", FIELD(train.batch_size), 1),
    number_key<long>("max_steps", FIELD(train.max_steps), 0),
    bool_key("adversarial", FIELD(adversarial)),
    number_key<double>("gan_weight", FIELD(gan.gan_weight), 0.0),
    number_key<int>("disc_iters", FIELD(gan.disc_iters), 1),
    number_key<int>("disc_warmup", FIELD(gan.disc_warmup), 0),
    bool_key("gan_real_gradient", FIELD(gan.real_gradient)),
    number_key<double>("gp_weight", FIELD(gan.gp_weight), 0.0),
    number_key<int>("gan_start_epoch", FIELD(gan.gan_start_epoch), 1),
    number_key<double>("disc_lr", FIELD(gan.disc_lr), 0.0),
    number_key<int>("disc_hidden", FIELD(gan.disc.hidden), 1),
    number_key<int>("disc_layers", FIELD(gan.disc.layers), 1),
    number_key<double>("disc_slope", FIELD(gan.disc.slope), 0.0),
    string_key("oracle", FIELD(oracle)),
    number_key<double>("similarity", FIELD(similarity), 0.0),
    string_key("rule", FIELD(rule)),
    string_key("predicate", FIELD(predicate)),
    number_key<int>("k", FIELD(k), 1),
    number_key<int>("toy_size", FIELD(toy_size), 1),
    string_key("corpus", FIELD(corpus)),
    string_key("vocab", FIELD(vocab)),
    string_key("pairs", FIELD(pairs)),
    string_key("exclude", FIELD(exclude)),
    string_key("checkpoint_dir", FIELD(checkpoint_dir)),
    string_key("checkpoint", FIELD(checkpoint)),
    string_key("test", FIELD(test)),
    string_key("report", FIELD(report)),
    string_key("metrics", FIELD(metrics)),
    string_key("output", FIELD(output)),
  };
  return table;
}

#undef FIELD

const Key &find_key(const std::string &name) {
  for (const Key &k: keys())
    if (k.name == name)
      return k;
  throw std::invalid_argument("unknown config key '" + name + "'");
}

std::string trim(const std::string &s) {
  const char *ws = " \t\r";
  std::size_t b = s.find_first_not_of(ws);
  if (b == std::string::npos)
    return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

double parse_real(const std::string &s) { return parse_number<double>(s); }

}  // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const Key &k: keys())
    out.push_back(k.name);
  return out;
}

void set_config_value(RunConfig &config, const std::string &key,
                      const std::string &value) {
  const Key &k = find_key(key);
  try {
    k.set(config, value);
  } catch (const std::invalid_argument &e) {
    throw std::invalid_argument(key + ": " + e.what());
  }
}

std::string get_config_value(const RunConfig &config, const std::string &key) {
  return find_key(key).get(config);
}

void apply_config_text(RunConfig &config, const std::string &text) {
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#')
      continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(number)
                                  + ": expected key = value");
    try {
      set_config_value(config, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    } catch (const std::invalid_argument &e) {
      throw std::invalid_argument("config line " + std::to_string(number)
                                  + ": " + e.what());
    }
  }
}

void apply_config_file(RunConfig &config, const std::filesystem::path &path) {
  apply_config_text(config, read_file(path));
}

std::string format_config(const RunConfig &config) {
  std::string out;
  for (const Key &k: keys())
    out += k.name + " = " + k.get(config) + "\n";
  return out;
}

TrainConfig effective_train_config(const RunConfig &config) {
  TrainConfig t = config.train;
  t.seed = config.seed;
  t.checkpoint_dir = config.checkpoint_dir;
  return t;
}

std::unique_ptr<PropertyOracle> make_oracle(const std::string &spec) {
  const std::string prefix = "external:";
  if (spec.rfind(prefix, 0) == 0)
    return external_oracle(spec.substr(prefix.size()));
  return builtin_oracle(spec);
}

CurationRule parse_rule(const std::string &text) {
  auto fields = [](const std::string &s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string f;
    while (std::getline(in, f, ':'))
      out.push_back(f);
    return out;
  };
  std::vector<std::string> f = fields(text);
  try {
    if (f.size() == 2 && f[0] == "improvement")
      return ImprovementRule{ parse_real(f[1]) };
    if (f.size() == 5 && f[0] == "range")
      return RangeRule{ parse_real(f[1]), parse_real(f[2]), parse_real(f[3]),
                        parse_real(f[4]) };
  } catch (const std::invalid_argument &) {
  }
  throw std::invalid_argument(
      "bad rule '" + text
      + "' (improvement:<t> or range:<src lo>:<src hi>:<tgt lo>:<tgt hi>)");
}

}  // namespace g2g
