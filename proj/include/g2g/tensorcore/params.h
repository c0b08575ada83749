//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef G2G_TENSORCORE_PARAMS_H_
#define G2G_TENSORCORE_PARAMS_H_

#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "g2g/tensorcore/tape.h"

namespace g2g {

enum class Precision {
  // Parameters are rounded to 32-bit floats after every update.
  kFloat32,
  kFloat64,
};

struct Parameter {
  std::string name;
  Mat value;
  Mat grad;
  // Adam first and second moments.
  Mat m;
  Mat v;
};

enum class Init {
  kGlorot,
  kZero,
};

/// Named parameters in insertion order.
class ParamStore {
public:
  explicit ParamStore(Precision precision = Precision::kFloat32,
                      std::string label = "model")
      : precision_(precision), label_(std::move(label)) { }
  ParamStore(const ParamStore &) = delete;
  ParamStore &operator=(const ParamStore &) = delete;

  /// Creates a parameter; names must be unique.
  Parameter &create(const std::string &name, Eigen::Index rows,
                    Eigen::Index cols, Init init, std::mt19937_64 &rng);
  Parameter &get(const std::string &name);
  const Parameter &get(const std::string &name) const;
  bool contains(const std::string &name) const;

  std::vector<Parameter *> parameters();
  std::vector<const Parameter *> parameters() const;
  std::size_t size() const { return order_.size(); }
  std::size_t scalar_count() const;

  /// Distinguishes stores saved into one checkpoint.
  const std::string &label() const { return label_; }
  Precision precision() const { return precision_; }
  void set_precision(Precision p);
  /// Applies the storage precision to every value and moment.
  void round_to_storage();

  void zero_grad();
  /// Sum of squared gradients.
  double grad_norm_squared() const;

  /// Adam step counter.
  long step() const { return step_; }
  void set_step(long s) { step_ = s; }

private:
  Precision precision_;
  std::string label_;
  std::map<std::string, std::unique_ptr<Parameter>> by_name_;
  std::vector<Parameter *> order_;
  long step_ = 0;
};

/// Uniform in [-a, a] with a = sqrt(6 / (fan_in + fan_out)).
void glorot_uniform(Mat &m, std::mt19937_64 &rng);

/// Uniform double in [0, 1) from 53 random bits; stable across standard
/// library implementations.
double uniform01(std::mt19937_64 &rng);
/// Standard normal draw via Box-Muller on uniform01.
double standard_normal(std::mt19937_64 &rng);

}  // namespace g2g

#endif  // G2G_TENSORCORE_PARAMS_H_
