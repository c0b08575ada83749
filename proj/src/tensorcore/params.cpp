//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "g2g/tensorcore/params.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace g2g {
namespace {

void round_mat(Mat &m) {
  for (Eigen::Index i = 0; i < m.size(); ++i)
    m.data()[i] = static_cast<double>(static_cast<float>(m.data()[i]));
}

}  // namespace

Parameter &ParamStore::create(const std::string &name, Eigen::Index rows,
                              Eigen::Index cols, Init init,
                              std::mt19937_64 &rng) {
  if (by_name_.count(name))
    throw std::invalid_argument("duplicate parameter: " + name);
  auto p = std::make_unique<Parameter>();
  p->name = name;
  p->value = Mat::Zero(rows, cols);
  if (init == Init::kGlorot)
    glorot_uniform(p->value, rng);
  p->grad = Mat::Zero(rows, cols);
  p->m = Mat::Zero(rows, cols);
  p->v = Mat::Zero(rows, cols);
  if (precision_ == Precision::kFloat32)
    round_mat(p->value);
  Parameter *raw = p.get();
  by_name_.emplace(name, std::move(p));
  order_.push_back(raw);
  return *raw;
}

Parameter &ParamStore::get(const std::string &name) {
  auto it = by_name_.find(name);
  if (it == by_name_.end())
    throw std::out_of_range("unknown parameter: " + name);
  return *it->second;
}

const Parameter &ParamStore::get(const std::string &name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end())
    throw std::out_of_range("unknown parameter: " + name);
  return *it->second;
}

bool ParamStore::contains(const std::string &name) const {
  return by_name_.count(name) != 0;
}

std::vector<Parameter *> ParamStore::parameters() { return order_; }

std::vector<const Parameter *> ParamStore::parameters() const {
  return { order_.begin(), order_.end() };
}

std::size_t ParamStore::scalar_count() const {
  std::size_t n = 0;
  for (const Parameter *p: order_)
    n += static_cast<std::size_t>(p->value.size());
  return n;
}

void ParamStore::set_precision(Precision p) {
  precision_ = p;
  round_to_storage();
}

void ParamStore::round_to_storage() {
  if (precision_ != Precision::kFloat32)
    return;
  for (Parameter *p: order_) {
    round_mat(p->value);
    round_mat(p->m);
    round_mat(p->v);
  }
}

void ParamStore::zero_grad() {
  for (Parameter *p: order_)
    p->grad.setZero();
}

double ParamStore::grad_norm_squared() const {
  double s = 0;
  for (const Parameter *p: order_)
    s += p->grad.squaredNorm();
  return s;
}

void glorot_uniform(Mat &m, std::mt19937_64 &rng) {
  double a = std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols()));
  for (Eigen::Index i = 0; i < m.size(); ++i)
    m.data()[i] = (2.0 * uniform01(rng) - 1.0) * a;
}

double uniform01(std::mt19937_64 &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double standard_normal(std::mt19937_64 &rng) {
  double u1 = uniform01(rng);
  double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(1.0 - u1))
         * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace g2g
