//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef G2G_TENSORCORE_ADAM_H_
#define G2G_TENSORCORE_ADAM_H_

#include "g2g/tensorcore/params.h"

namespace g2g {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// One bias-corrected Adam update of every parameter from its gradient;
/// increments the store's step counter.
void adam_step(ParamStore &store, const AdamConfig &config);

/// Learning rate after `epochs` completed epochs of multiplicative decay.
double annealed_lr(double base, double decay, int epochs);

}  // namespace g2g

#endif  // G2G_TENSORCORE_ADAM_H_
