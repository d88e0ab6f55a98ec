// Copyright 2026 The Auto-GDA Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "autogda/certainty.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace autogda {
namespace {

void check_label(int y_hat) {
  if (y_hat != 0 && y_hat != 1) {
    throw DomainError("hard label must be 0 or 1, got " +
                      std::to_string(y_hat));
  }
}

void check_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw DomainError(std::string(what) + " must lie in [0, 1], got " +
                      std::to_string(v));
  }
}

// Beta parameters from the miss mass d = |r - y_hat| in (0, 1). Working in
// d rather than r makes the y_hat = 0 and y_hat = 1 solutions exact mirror
// images of each other.
BetaParams params_from_miss(double d, int y_hat) {
  double on_label = 1.0;
  double off_label = 1.0;
  if (d <= 0.5) {
    on_label += (1.0 - 2.0 * d) / d;  // mode on y_hat
  } else {
    off_label += (2.0 * d - 1.0) / (1.0 - d);  // mode on 1 - y_hat
  }
  return y_hat == 1 ? BetaParams{on_label, off_label}
                    : BetaParams{off_label, on_label};
}

double clamp_miss(double d) {
  return std::clamp(d, kCertaintyClamp, 1.0 - kCertaintyClamp);
}

}  // namespace

BetaParams solve_beta_params(double r, int y_hat) {
  check_label(y_hat);
  check_unit(r, "certainty");
  const double d = y_hat == 1 ? 1.0 - r : r;
  return params_from_miss(clamp_miss(d), y_hat);
}

double ldiv(double r, int y_hat) {
  check_label(y_hat);
  check_unit(r, "certainty");
  const double d = y_hat == 1 ? 1.0 - r : r;
  if (d == 0.0) return 0.0;  // limit q -> infinity
  const BetaParams p = params_from_miss(clamp_miss(d), y_hat);
  const double on_label = y_hat == 1 ? p.alpha : p.beta;
  return std::max(0.0, digamma(p.alpha + p.beta) - digamma(on_label));
}

double update_certainty(double r_parent, double t_link) {
  check_unit(r_parent, "parent certainty");
  check_unit(t_link, "link score");
  const double r = r_parent * t_link + (1.0 - r_parent) * (1.0 - t_link);
  return std::clamp(r, 0.0, 1.0);
}

}  // namespace autogda
