//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "g2g/tensorcore/adam.h"

#include <cmath>

namespace g2g {

void adam_step(ParamStore &store, const AdamConfig &config) {
  long t = store.step() + 1;
  store.set_step(t);
  double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(t));
  double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(t));
  for (Parameter *p: store.parameters()) {
    p->m = config.beta1 * p->m + (1.0 - config.beta1) * p->grad;
    p->v = config.beta2 * p->v
           + (1.0 - config.beta2) * p->grad.cwiseProduct(p->grad);
    p->value.array() -= config.lr * (p->m.array() / c1)
                        / ((p->v.array() / c2).sqrt() + config.epsilon);
  }
  store.round_to_storage();
}

double annealed_lr(double base, double decay, int epochs) {
  double lr = base;
  for (int e = 0; e < epochs; ++e)
    lr *= decay;
  return lr;
}

}  // namespace g2g
