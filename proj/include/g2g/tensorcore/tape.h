//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef G2G_TENSORCORE_TAPE_H_
#define G2G_TENSORCORE_TAPE_H_

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace g2g {

/// Dense row-major matrix; every tensor in the model is two-dimensional.
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                          Eigen::RowMajor>;

class ShapeError: public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct Parameter;
class Tape;

/// Handle to a value recorded on a Tape.
class Var {
public:
  Var() = default;
  Var(Tape *tape, int id) : tape_(tape), id_(id) { }

  const Mat &value() const;
  const Mat &grad() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  double scalar() const { return value()(0, 0); }

  Tape *tape() const { return tape_; }
  int id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

private:
  Tape *tape_ = nullptr;
  int id_ = -1;
};

/// Records operations in creation order and replays their adjoints in
/// reverse. Arithmetic is carried out in double precision.
class Tape {
public:
  Tape() = default;
  Tape(const Tape &) = delete;
  Tape &operator=(const Tape &) = delete;

  Var constant(Mat value);
  Var constant(double value);
  /// Leaf bound to a parameter; backward() accumulates into its gradient.
  /// Repeated calls return the same leaf, holding the value of the first.
  Var param(Parameter &p);

  /// Seeds d(out)/d(out) = 1 for a 1x1 `out` and accumulates gradients.
  void backward(Var out);

  /// When enabled, every recorded value is checked for NaN/Inf.
  void set_finite_checks(bool on) { finite_checks_ = on; }

  int size() const { return static_cast<int>(nodes_.size()); }
  bool requires_grad(Var v) const { return nodes_[v.id()].requires_grad; }

  // Op construction interface.
  struct Node {
    Mat value;
    Mat grad;
    bool requires_grad = false;
    std::function<void(Tape &)> backward;
  };
  Var record(Mat value, bool requires_grad,
             std::function<void(Tape &)> backward);
  Node &node(int id) { return nodes_[id]; }
  const Node &node(int id) const { return nodes_[id]; }
  /// Gradient slot of a node, allocated lazily with zeros.
  Mat &grad_of(int id);

private:
  std::vector<Node> nodes_;
  std::unordered_map<const Parameter *, int> param_nodes_;
  bool finite_checks_ = false;
};

// Elementwise and broadcasting arithmetic. `b` may have the shape of `a`,
// be a 1 x cols row (broadcast over rows) or 1 x 1.
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var scale(Var a, double s);
Var add_scalar(Var a, double s);
/// 1 - a.
Var one_minus(Var a);
/// Multiplies row i of `a` by w(i, 0); `w` is rows x 1.
Var scale_rows(Var a, Var w);

Var matmul(Var a, Var b);
/// a * b^T.
Var matmul_nt(Var a, Var b);
/// Rowwise dot product, rows x 1.
Var row_dot(Var a, Var b);

Var concat_cols(std::span<const Var> parts);
Var concat_rows(std::span<const Var> parts);
Var slice_cols(Var a, Eigen::Index start, Eigen::Index count);
Var slice_rows(Var a, Eigen::Index start, Eigen::Index count);

/// Row r of the result is row index[r] of `a`.
Var gather_rows(Var a, std::span<const int> index);
/// Result has `rows` rows; row index[r] accumulates row r of `a`. Rows are
/// added in the order given.
Var scatter_add_rows(Var a, std::span<const int> index, Eigen::Index rows);

/// Column sums, 1 x cols.
Var sum_rows(Var a);
/// Row sums, rows x 1.
Var sum_cols(Var a);
Var sum_all(Var a);
Var mean_all(Var a);

Var relu(Var a);
Var leaky_relu(Var a, double slope);
Var tanh(Var a);
Var sigmoid(Var a);
Var exp(Var a);
Var log(Var a);
Var sqrt(Var a);
Var square(Var a);

Var softmax_rows(Var a);
Var log_softmax_rows(Var a);
/// Log-sum-exp of each row, rows x 1.
Var logsumexp_rows(Var a);
/// Softmax over entries of a column vector grouped by segment id; entries
/// of one segment sum to 1.
Var segment_softmax(Var a, std::span<const int> segment, int segments);
/// Log-sum-exp per segment of a column vector, segments x 1.
Var segment_logsumexp(Var a, std::span<const int> segment, int segments);
/// log(1 + exp(a)).
Var softplus(Var a);

/// Forward: 1 where a > threshold, else 0. Backward: passes the upstream
/// gradient where 0 <= a <= 1 (hard-sigmoid surrogate of unit slope).
Var straight_through_gate(Var a, double threshold);

}  // namespace g2g

#endif  // G2G_TENSORCORE_TAPE_H_
