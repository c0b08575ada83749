//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef G2G_ERRORS_H_
#define G2G_ERRORS_H_

#include <stdexcept>

namespace g2g {

/// Malformed or chemically unusable input data.
class DataError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Non-finite values or diverging numerics.
class NumericError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace g2g

#endif  // G2G_ERRORS_H_
