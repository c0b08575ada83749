//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "g2g/tensorcore/tape.h"

#include <algorithm>
#include <cmath>

#include "g2g/errors.h"
#include "g2g/tensorcore/params.h"

namespace g2g {
namespace {

std::string shape(const Mat &m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_tape(Var a, Var b) {
  if (a.tape() != b.tape() || a.tape() == nullptr)
    throw ShapeError("operands belong to different tapes");
}

bool needs(Tape &t, int id) { return t.node(id).requires_grad; }

enum class Broadcast {
  kSame,
  kRow,
  kScalar,
};

Broadcast broadcast_kind(const Mat &a, const Mat &b, const char *op) {
  if (a.rows() == b.rows() && a.cols() == b.cols())
    return Broadcast::kSame;
  if (b.rows() == 1 && b.cols() == a.cols())
    return Broadcast::kRow;
  if (b.rows() == 1 && b.cols() == 1)
    return Broadcast::kScalar;
  throw ShapeError(std::string(op) + ": cannot broadcast " + shape(b)
                   + " onto " + shape(a));
}

// Reduces a full-shape gradient to the shape of a broadcast operand.
void accumulate_broadcast(Mat &target, const Mat &g, Broadcast kind) {
  switch (kind) {
  case Broadcast::kSame:
    target += g;
    break;
  case Broadcast::kRow:
    target += g.colwise().sum();
    break;
  case Broadcast::kScalar:
    target(0, 0) += g.sum();
    break;
  }
}

Mat expand(const Mat &a, const Mat &b, Broadcast kind) {
  switch (kind) {
  case Broadcast::kSame:
    return b;
  case Broadcast::kRow:
    return b.replicate(a.rows(), 1);
  case Broadcast::kScalar:
    return Mat::Constant(a.rows(), a.cols(), b(0, 0));
  }
  return b;
}

template<typename Fn>
Var unary(Var a, Mat value, Fn derivative) {
  Tape &t = *a.tape();
  int ia = a.id();
  bool rg = t.node(ia).requires_grad;
  Var out = t.record(std::move(value), rg, nullptr);
  if (rg) {
    int io = out.id();
    t.node(io).backward = [ia, io, derivative](Tape &tp) {
      const Mat &g = tp.node(io).grad;
      tp.grad_of(ia).array() += derivative(tp.node(ia).value,
                                           tp.node(io).value, g)
                                    .array();
    };
  }
  return out;
}

void check_segments(std::span<const int> segment, Eigen::Index rows,
                    int segments, const char *op) {
  if (static_cast<Eigen::Index>(segment.size()) != rows)
    throw ShapeError(std::string(op) + ": segment count mismatch");
  for (int s: segment)
    if (s < 0 || s >= segments)
      throw ShapeError(std::string(op) + ": segment id out of range");
}

}  // namespace

const Mat &Var::value() const { return tape_->node(id_).value; }

const Mat &Var::grad() const { return tape_->grad_of(id_); }

Var Tape::record(Mat value, bool requires_grad,
                 std::function<void(Tape &)> backward) {
  if (finite_checks_ && !value.allFinite())
    throw NumericError("non-finite value recorded on the tape");
  nodes_.push_back({ std::move(value), Mat(), requires_grad,
                     std::move(backward) });
  return Var(this, size() - 1);
}

Mat &Tape::grad_of(int id) {
  Node &n = nodes_[id];
  if (n.grad.rows() != n.value.rows() || n.grad.cols() != n.value.cols())
    n.grad = Mat::Zero(n.value.rows(), n.value.cols());
  return n.grad;
}

Var Tape::constant(Mat value) {
  return record(std::move(value), false, nullptr);
}

Var Tape::constant(double value) {
  return record(Mat::Constant(1, 1, value), false, nullptr);
}

Var Tape::param(Parameter &p) {
  auto it = param_nodes_.find(&p);
  if (it != param_nodes_.end())
    return Var(this, it->second);
  Var out = record(p.value, true, nullptr);
  param_nodes_.emplace(&p, out.id());
  int io = out.id();
  Parameter *ptr = &p;
  nodes_[io].backward = [ptr, io](Tape &t) { ptr->grad += t.node(io).grad; };
  return out;
}

void Tape::backward(Var out) {
  if (out.tape() != this)
    throw ShapeError("backward: variable from another tape");
  if (out.rows() != 1 || out.cols() != 1)
    throw ShapeError("backward: output must be 1x1, got " + shape(out.value()));
  for (Node &n: nodes_)
    n.grad.resize(0, 0);
  grad_of(out.id())(0, 0) = 1.0;
  for (int id = out.id(); id >= 0; --id) {
    Node &n = nodes_[id];
    if (!n.requires_grad || !n.backward || n.grad.size() == 0)
      continue;
    n.backward(*this);
  }
}

Var add(Var a, Var b) {
  require_same_tape(a, b);
  Tape &t = *a.tape();
  Broadcast kind = broadcast_kind(a.value(), b.value(), "add");
  Mat v = a.value();
  switch (kind) {
  case Broadcast::kSame:
    v += b.value();
    break;
  case Broadcast::kRow:
    v.rowwise() += b.value().row(0);
    break;
  case Broadcast::kScalar:
    v.array() += b.scalar();
    break;
  }
  int ia = a.id(), ib = b.id();
  bool rg = needs(t, ia) || needs(t, ib);
  Var out = t.record(std::move(v), rg, nullptr);
  if (rg) {
    int io = out.id();
    t.node(io).backward = [ia, ib, io, kind](Tape &tp) {
      const Mat &g = tp.node(io).grad;
      if (needs(tp, ia))
        tp.grad_of(ia) += g;
      if (needs(tp, ib))
        accumulate_broadcast(tp.grad_of(ib), g, kind);
    };
  }
  return out;
}

Var sub(Var a, Var b) { return add(a, scale(b, -1.0)); }

Var mul(Var a, Var b) {
  require_same_tape(a, b);
  Tape &t = *a.tape();
  Broadcast kind = broadcast_kind(a.value(), b.value(), "mul");
  Mat bb = expand(a.value(), b.value(), kind);
  Mat v = a.value().cwiseProduct(bb);
  int ia = a.id(), ib = b.id();
  bool rg = needs(t, ia) || needs(t, ib);
  Var out = t.record(std::move(v), rg, nullptr);
  if (rg) {
    int io = out.id();
    t.node(io).backward = [ia, ib, io, kind](Tape &tp) {
      const Mat &g = tp.node(io).grad;
      const Mat &av = tp.node(ia).value;
      if (needs(tp, ia))
        tp.grad_of(ia) += g.cwiseProduct(expand(av, tp.node(ib).value, kind));
      if (needs(tp, ib))
        accumulate_broadcast(tp.grad_of(ib), g.cwiseProduct(av), kind);
    };
  }
  return out;
}

Var scale(Var a, double s) {
  return unary(a, a.value() * s, [s](const Mat &, const Mat &, const Mat &g) {
    return Mat(g * s);
  });
}

Var add_scalar(Var a, double s) {
  Mat v = a.value();
  v.array() += s;
  return unary(a, std::move(v),
               [](const Mat &, const Mat &, const Mat &g) { return g; });
}

Var one_minus(Var a) { return add_scalar(scale(a, -1.0), 1.0); }

Var scale_rows(Var a, Var w) {
  require_same_tape(a, w);
  if (w.cols() != 1 || w.rows() != a.rows())
    throw ShapeError("scale_rows: weights must be " + std::to_string(a.rows())
                     + "x1, got " + shape(w.value()));
  Tape &t = *a.tape();
  Mat v = a.value().array().colwise() * w.value().col(0).array();
  int ia = a.id(), iw = w.id();
  bool rg = needs(t, ia) || needs(t, iw);
  Var out = t.record(std::move(v), rg, nullptr);
  if (rg) {
    int io = out.id();
    t.node(io).backward = [ia, iw, io](Tape &tp) {
      const Mat &g = tp.node(io).grad;
      if (needs(tp, ia))
        tp.grad_of(ia).array() +=
            g.array().colwise() * tp.node(iw).value.col(0).array();
      if (needs(tp, iw))
        tp.grad_of(iw).col(0) +=
            g.cwiseProduct(tp.node(ia).value).rowwise().sum();
    };
  }
  return out;
}

Var matmul(Var a, Var b) {
  require_same_tape(a, b);
  if (a.cols() != b.rows())
    throw ShapeError("matmul: " + shape(a.value()) + " * " + shape(b.value()));
  Tape &t = *a.tape();
  Mat v = a.value() * b.value();
  int ia = a.id(), ib = b.id();
  bool rg = needs(t, ia) || needs(t, ib);
  Var out = t.record(std::move(v), rg, nullptr);
  if (rg) {
    int io = out.id();
    t.node(io).backward = [ia, ib, io](Tape &tp) {
      const Mat &g = tp.node(io).grad;
      if (needs(tp, ia))
        tp.grad_of(ia).noalias() += g * tp.node(ib).value.transpose();
      if (needs(tp, ib))
        tp.grad_of(ib).noalias() += tp.node(ia).value.transpose() * g;
    };
  }
  return out;
}

Var matmul_nt(Var a, Var b) {
  require_same_tape(a, b);
  if (a.cols() != b.cols())
    throw ShapeError("matmul_nt: " + shape(a.value()) + " * "
                     + shape(b.value()) + "^T");
  Tape &t = *a.tape();
  Mat v = a.value() * b.value().transpose();
  int ia = a.id(), ib = b.id();
  bool rg = needs(t, ia) || needs(t, ib);
  Var out = t.record(std::move(v), rg, nullptr);
  if (rg) {
    int io = out.id();
    t.node(io).backward = [ia, ib, io](Tape &tp) {
      const Mat &g = tp.node(io).grad;
      if (needs(tp, ia))
        tp.grad_of(ia).noalias() += g * tp.node(ib).value;
      if (needs(tp, ib))
        tp.grad_of(ib).noalias() += g.transpose() * tp.node(ia).value;
    };
  }
  return out;
}

Var row_dot(Var a, Var b) {
  require_same_tape(a, b);
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError("row_dot: " + shape(a.value()) + " vs " + shape(b.value()));
  Tape &t = *a.tape();
  Mat v = a.value().cwiseProduct(b.value()).rowwise().sum();
  int ia = a.id(), ib = b.id();
  bool rg = needs(t, ia) || needs(t, ib);
  Var out = t.record(std::move(v), rg, nullptr);
  if (rg) {
    int io = out.id();
    t.node(io).backward = [ia, ib, io](Tape &tp) {
      const Mat &g = tp.node(io).grad;
      if (needs(tp, ia))
        tp.grad_of(ia).array() +=
            tp.node(ib).value.array().colwise() * g.col(0).array();
      if (needs(tp, ib))
        tp.grad_of(ib).array() +=
            tp.node(ia).value.array().colwise() * g.col(0).array();
    };
  }
  return out;
}

Var concat_cols(std::span<const Var> parts) {
  if (parts.empty())
    throw ShapeError("concat_cols: no inputs");
  Tape &t = *parts[0].tape();
  Eigen::Index rows = parts[0].rows(), cols = 0;
  bool rg = false;
  std::vector<int> ids;
  for (Var p: parts) {
    require_same_tape(parts[0], p);
    if (p.rows() != rows)
      throw ShapeError("concat_cols: row mismatch");
    cols += p.cols();
    rg = rg || needs(t, p.id());
    ids.push_back(p.id());
  }
  Mat v(rows, cols);
  Eigen::Index at = 0;
  for (Var p: parts) {
    v.middleCols(at, p.cols()) = p.value();
    at += p.cols();
  }
  Var out = t.record(std::move(v), rg, nullptr);
  if (rg) {
    int io = out.id();
    t.node(io).backward = [ids, io](Tape &tp) {
      const Mat &g = tp.node(io).grad;
      Eigen::Index at = 0;
      for (int id: ids) {
        Eigen::Index c = tp.node(id).value.cols();
        if (needs(tp, id))
          tp.grad_of(id) += g.middleCols(at, c);
        at += c;
      }
    };
  }
  return out;
}

Var concat_rows(std::span<const Var> parts) {
  if (parts.empty())
    throw ShapeError("concat_rows: no inputs");
  Tape &t = *parts[0].tape();
  Eigen::Index cols = parts[0].cols(), rows = 0;
  bool rg = false;
  std::vector<int> ids;
  for (Var p: parts) {
    require_same_tape(parts[0], p);
    if (p.cols() != cols)
      throw ShapeError("concat_rows: column mismatch");
    rows += p.rows();
    rg = rg || needs(t, p.id());
    ids.push_back(p.id());
  }
  Mat v(rows, cols);
  Eigen::Index at = 0;
  for (Var p: parts) {
    v.middleRows(at, p.rows()) = p.value();
    at += p.rows();
  }
  Var out = t.record(std::move(v), rg, nullptr);
  if (rg) {
    int io = out.id();
    t.node(io).backward = [ids, io](Tape &tp) {
      const Mat &g = tp.node(io).grad;
      Eigen::Index at = 0;
      for (int id: ids) {
        Eigen::Index r = tp.node(id).value.rows();
        if (needs(tp, id))
          tp.grad_of(id) += g.middleRows(at, r);
        at += r;
      }
    };
  }
  return out;
}

Var slice_cols(Var a, Eigen::Index start, Eigen::Index count) {
  if (start < 0 || count < 0 || start + count > a.cols())
    throw ShapeError("slice_cols: out of range");
  Tape &t = *a.tape();
  int ia = a.id();
  bool rg = needs(t, ia);
  Var out = t.record(a.value().middleCols(start, count), rg, nullptr);
  if (rg) {
    int io = out.id();
    t.node(io).backward = [ia, io, start, count](Tape &tp) {
      tp.grad_of(ia).middleCols(start, count) += tp.node(io).grad;
    };
  }
  return out;
}

Var slice_rows(Var a, Eigen::Index start, Eigen::Index count) {
  if (start < 0 || count < 0 || start + count > a.rows())
    throw ShapeError("slice_rows: out of range");
  Tape &t = *a.tape();
  int ia = a.id();
  bool rg = needs(t, ia);
  Var out = t.record(a.value().middleRows(start, count), rg, nullptr);
  if (rg) {
    int io = out.id();
    t.node(io).backward = [ia, io, start, count](Tape &tp) {
      tp.grad_of(ia).middleRows(start, count) += tp.node(io).grad;
    };
  }
  return out;
}

Var gather_rows(Var a, std::span<const int> index) {
  Tape &t = *a.tape();
  const Mat &av = a.value();
  Mat v(static_cast<Eigen::Index>(index.size()), av.cols());
  for (std::size_t r = 0; r < index.size(); ++r) {
    if (index[r] < 0 || index[r] >= av.rows())
      throw ShapeError("gather_rows: index out of range");
    v.row(r) = av.row(index[r]);
  }
  int ia = a.id();
  bool rg = needs(t, ia);
  Var out = t.record(std::move(v), rg, nullptr);
  if (rg) {
    int io = out.id();
    std::vector<int> idx(index.begin(), index.end());
    t.node(io).backward = [ia, io, idx](Tape &tp) {
      const Mat &g = tp.node(io).grad;
      Mat &ga = tp.grad_of(ia);
      for (std::size_t r = 0; r < idx.size(); ++r)
        ga.row(idx[r]) += g.row(r);
    };
  }
  return out;
}

Var scatter_add_rows(Var a, std::span<const int> index, Eigen::Index rows) {
  Tape &t = *a.tape();
  const Mat &av = a.value();
  if (static_cast<Eigen::Index>(index.size()) != av.rows())
    throw ShapeError("scatter_add_rows: index count mismatch");
  Mat v = Mat::Zero(rows, av.cols());
  for (std::size_t r = 0; r < index.size(); ++r) {
    if (index[r] < 0 || index[r] >= rows)
      throw ShapeError("scatter_add_rows: index out of range");
    v.row(index[r]) += av.row(r);
  }
  int ia = a.id();
  bool rg = needs(t, ia);
  Var out = t.record(std::move(v), rg, nullptr);
  if (rg) {
    int io = out.id();
    std::vector<int> idx(index.begin(), index.end());
    t.node(io).backward = [ia, io, idx](Tape &tp) {
      const Mat &g = tp.node(io).grad;
      Mat &ga = tp.grad_of(ia);
      for (std::size_t r = 0; r < idx.size(); ++r)
        ga.row(r) += g.row(idx[r]);
    };
  }
  return out;
}

Var sum_rows(Var a) {
  return unary(a, a.value().colwise().sum(),
               [](const Mat &av, const Mat &, const Mat &g) {
                 return Mat(g.replicate(av.rows(), 1));
               });
}

Var sum_cols(Var a) {
  return unary(a, a.value().rowwise().sum(),
               [](const Mat &av, const Mat &, const Mat &g) {
                 return Mat(g.replicate(1, av.cols()));
               });
}

Var sum_all(Var a) {
  return unary(a, Mat::Constant(1, 1, a.value().sum()),
               [](const Mat &av, const Mat &, const Mat &g) {
                 return Mat(Mat::Constant(av.rows(), av.cols(), g(0, 0)));
               });
}

Var mean_all(Var a) {
  double n = static_cast<double>(a.value().size());
  if (n == 0)
    throw ShapeError("mean_all: empty input");
  return scale(sum_all(a), 1.0 / n);
}

Var relu(Var a) {
  return unary(a, a.value().cwiseMax(0.0),
               [](const Mat &av, const Mat &, const Mat &g) {
                 return Mat((av.array() > 0.0).select(g, 0.0));
               });
}

Var leaky_relu(Var a, double slope) {
  Mat v = (a.value().array() > 0.0).select(a.value(), a.value() * slope);
  return unary(a, std::move(v),
               [slope](const Mat &av, const Mat &, const Mat &g) {
                 return Mat((av.array() > 0.0).select(g, g * slope));
               });
}

Var tanh(Var a) {
  return unary(a, a.value().array().tanh().matrix(),
               [](const Mat &, const Mat &y, const Mat &g) {
                 return Mat(g.array() * (1.0 - y.array().square()));
               });
}

Var sigmoid(Var a) {
  Mat v = a.value().unaryExpr([](double x) {
    if (x >= 0)
      return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
  });
  return unary(a, std::move(v), [](const Mat &, const Mat &y, const Mat &g) {
    return Mat(g.array() * y.array() * (1.0 - y.array()));
  });
}

Var exp(Var a) {
  return unary(a, a.value().array().exp().matrix(),
               [](const Mat &, const Mat &y, const Mat &g) {
                 return Mat(g.cwiseProduct(y));
               });
}

Var log(Var a) {
  return unary(a, a.value().array().log().matrix(),
               [](const Mat &av, const Mat &, const Mat &g) {
                 return Mat(g.array() / av.array());
               });
}

Var sqrt(Var a) {
  return unary(a, a.value().array().sqrt().matrix(),
               [](const Mat &, const Mat &y, const Mat &g) {
                 return Mat(g.array() * 0.5 / y.array());
               });
}

Var square(Var a) {
  return unary(a, a.value().array().square().matrix(),
               [](const Mat &av, const Mat &, const Mat &g) {
                 return Mat(2.0 * g.cwiseProduct(av));
               });
}

Var softmax_rows(Var a) {
  Mat v = a.value();
  for (Eigen::Index r = 0; r < v.rows(); ++r) {
    double m = v.row(r).maxCoeff();
    v.row(r) = (v.row(r).array() - m).exp().matrix();
    v.row(r) /= v.row(r).sum();
  }
  return unary(a, std::move(v), [](const Mat &, const Mat &y, const Mat &g) {
    Mat dot = g.cwiseProduct(y).rowwise().sum();
    return Mat(y.array() * (g.array().colwise() - dot.col(0).array()));
  });
}

Var logsumexp_rows(Var a) {
  const Mat &av = a.value();
  Mat v(av.rows(), 1);
  for (Eigen::Index r = 0; r < av.rows(); ++r) {
    double m = av.row(r).maxCoeff();
    v(r, 0) = m + std::log((av.row(r).array() - m).exp().sum());
  }
  return unary(a, std::move(v), [](const Mat &av, const Mat &y, const Mat &g) {
    Mat out = (av.array().colwise() - y.col(0).array()).exp();
    return Mat(out.array().colwise() * g.col(0).array());
  });
}

Var log_softmax_rows(Var a) {
  Var lse = logsumexp_rows(a);
  Tape &t = *a.tape();
  // a - lse broadcast over columns.
  Mat ones = Mat::Ones(1, a.cols());
  return sub(a, matmul(lse, t.constant(ones)));
}

Var segment_softmax(Var a, std::span<const int> segment, int segments) {
  if (a.cols() != 1)
    throw ShapeError("segment_softmax: expects a column vector");
  check_segments(segment, a.rows(), segments, "segment_softmax");
  const Mat &av = a.value();
  std::vector<double> mx(segments, -INFINITY), total(segments, 0.0);
  for (std::size_t k = 0; k < segment.size(); ++k)
    mx[segment[k]] = std::max(mx[segment[k]], av(k, 0));
  Mat v(av.rows(), 1);
  for (std::size_t k = 0; k < segment.size(); ++k) {
    v(k, 0) = std::exp(av(k, 0) - mx[segment[k]]);
    total[segment[k]] += v(k, 0);
  }
  for (std::size_t k = 0; k < segment.size(); ++k)
    v(k, 0) /= total[segment[k]];
  std::vector<int> seg(segment.begin(), segment.end());
  return unary(a, std::move(v),
               [seg, segments](const Mat &, const Mat &y, const Mat &g) {
                 std::vector<double> dot(segments, 0.0);
                 for (std::size_t k = 0; k < seg.size(); ++k)
                   dot[seg[k]] += g(k, 0) * y(k, 0);
                 Mat out(y.rows(), 1);
                 for (std::size_t k = 0; k < seg.size(); ++k)
                   out(k, 0) = y(k, 0) * (g(k, 0) - dot[seg[k]]);
                 return out;
               });
}

Var segment_logsumexp(Var a, std::span<const int> segment, int segments) {
  if (a.cols() != 1)
    throw ShapeError("segment_logsumexp: expects a column vector");
  check_segments(segment, a.rows(), segments, "segment_logsumexp");
  const Mat &av = a.value();
  std::vector<double> mx(segments, -INFINITY), total(segments, 0.0);
  for (std::size_t k = 0; k < segment.size(); ++k)
    mx[segment[k]] = std::max(mx[segment[k]], av(k, 0));
  for (std::size_t k = 0; k < segment.size(); ++k)
    total[segment[k]] += std::exp(av(k, 0) - mx[segment[k]]);
  Mat v(segments, 1);
  for (int s = 0; s < segments; ++s) {
    if (total[s] == 0.0)
      throw ShapeError("segment_logsumexp: empty segment");
    v(s, 0) = mx[s] + std::log(total[s]);
  }
  Tape &t = *a.tape();
  int ia = a.id();
  bool rg = needs(t, ia);
  Var out = t.record(std::move(v), rg, nullptr);
  if (rg) {
    int io = out.id();
    std::vector<int> seg(segment.begin(), segment.end());
    t.node(io).backward = [ia, io, seg](Tape &tp) {
      const Mat &g = tp.node(io).grad;
      const Mat &y = tp.node(io).value;
      const Mat &x = tp.node(ia).value;
      Mat &ga = tp.grad_of(ia);
      for (std::size_t k = 0; k < seg.size(); ++k)
        ga(k, 0) += g(seg[k], 0) * std::exp(x(k, 0) - y(seg[k], 0));
    };
  }
  return out;
}

Var softplus(Var a) {
  Mat v = a.value().unaryExpr([](double x) {
    return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
  });
  return unary(a, std::move(v), [](const Mat &av, const Mat &, const Mat &g) {
    Mat s = av.unaryExpr([](double x) {
      return x >= 0 ? 1.0 / (1.0 + std::exp(-x))
                    : std::exp(x) / (1.0 + std::exp(x));
    });
    return Mat(g.cwiseProduct(s));
  });
}

Var straight_through_gate(Var a, double threshold) {
  Mat v = (a.value().array() > threshold).cast<double>().matrix();
  return unary(a, std::move(v), [](const Mat &av, const Mat &, const Mat &g) {
    return Mat((av.array() >= 0.0 && av.array() <= 1.0).select(g, 0.0));
  });
}

}  // namespace g2g
