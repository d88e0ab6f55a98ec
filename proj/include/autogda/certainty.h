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

#ifndef AUTOGDA_CERTAINTY_H_
#define AUTOGDA_CERTAINTY_H_

// Label-uncertainty calculus for synthetic samples.
//
// A sample carries a hard label y in {0, 1} and an entailment certainty r,
// the running estimate of P(true label = 1). The label-correctness penalty
// (LDiv) is the expected KL divergence between the assumed label
// distribution Bernoulli(y) and Bernoulli(phi), phi ~ Beta(alpha, beta),
// where the Beta hyperprior has mean r and its mode on a label.
//
// With hard labels the Bernoulli entropy vanishes and
//   LDiv = -y psi(alpha) - (1 - y) psi(beta) + psi(alpha + beta).
// Writing s for the certainty mass on the assigned label (s = r when y = 1,
// s = 1 - r when y = 0):
//   s >= 1/2  (mode at y):      LDiv = (1 - s) / s
//   s <  1/2  (mode at 1 - y):  LDiv = psi(1 / s) - psi(1)
// The branches meet at s = 1/2 with LDiv = 1 (the uniform Beta(1, 1)).

#include <cmath>
#include <concepts>
#include <limits>
#include <string>

#include "autogda/errors.h"

namespace autogda {

// Digamma psi(x) for x > 0.
//
// Shifts x upward with psi(x) = psi(x + 1) - 1/x until x >= 10, then uses
// the asymptotic series
//   psi(x) ~ ln x - 1/(2x) - sum_k B_2k / (2k x^2k).
// Truncated after x^-14, the series error at x >= 10 is below 1e-17.
template <std::floating_point T>
T digamma(T x) {
  if (!std::isfinite(x) || x <= T(0)) {
    throw DomainError("digamma: argument must be finite and positive, got " +
                      std::to_string(static_cast<double>(x)));
  }
  // Small integers go through psi(n) = H_{n-1} - gamma, which makes unit
  // steps such as psi(2) - psi(1) exact.
  if (x <= T(10) && x == std::floor(x)) {
    T h = T(0);
    for (int k = 1; k < static_cast<int>(x); ++k) h += T(1) / T(k);
    return h - T(0.577215664901532860606512090082402431L);
  }
  T shift = T(0);
  while (x < T(10)) {
    shift += T(1) / x;
    x += T(1);
  }
  const T inv = T(1) / x;
  const T inv2 = inv * inv;
  // B_2k / (2k) for k = 1..7.
  const T series =
      inv2 *
      (T(1) / T(12) -
       inv2 * (T(1) / T(120) -
               inv2 * (T(1) / T(252) -
                       inv2 * (T(1) / T(240) -
                               inv2 * (T(1) / T(132) -
                                       inv2 * (T(691) / T(32760) -
                                               inv2 * (T(1) / T(12))))))));
  return std::log(x) - T(0.5) * inv - series - shift;
}

struct BetaParams {
  double alpha = 1.0;
  double beta = 1.0;

  double mean() const { return alpha / (alpha + beta); }
};

// Certainties are clamped into [kCertaintyClamp, 1 - kCertaintyClamp]
// before the Beta solve. This bounds LDiv by psi(1e6) - psi(1) ~ 14.39.
inline constexpr double kCertaintyClamp = 1e-6;

// Beta hyperprior with mean r (after clamping) and mode on a label.
//
// If the certainty mass s on y_hat is at least 1/2 the mode sits on y_hat;
// otherwise it sits on 1 - y_hat, which keeps q >= 0 and the mean
// constraint. With m the mode label, q = (1 - 2r) / (r - m),
// alpha = q m + 1 and beta = q (1 - m) + 1.
//
// Throws DomainError if r is not in [0, 1] or y_hat is not 0/1.
BetaParams solve_beta_params(double r, int y_hat);

// Label-correctness penalty LDiv(r, y_hat) >= 0.
//
// Exactly 0 when r equals y_hat; otherwise computed through the Beta solve
// and digamma. Label symmetric: ldiv(r, 1) == ldiv(1 - r, 0) bit for bit,
// since both branches depend on r only through |r - y_hat|.
double ldiv(double r, int y_hat);

// Certainty of a mutated claim: r_parent t + (1 - r_parent)(1 - t), with t
// the link teacher's probability that the parent entails the child.
double update_certainty(double r_parent, double t_link);

}  // namespace autogda

#endif  // AUTOGDA_CERTAINTY_H_
