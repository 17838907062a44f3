// Copyright 2026 The fidsus Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fidsus/kernels.hpp"

#include <array>

namespace fidsus {
namespace {

// Taylor coefficients of tanh(x)/x for x^4, x^6, ..., x^42.
constexpr std::array<double, 20> kTanhRatioTail = {
    0.13333333333333333,     -0.053968253968253971,   0.021869488536155203,
    -0.0088632355299021973,  0.0035921280365724811,   -0.0014558343870513183,
    0.00059002744094558595,  -0.00023912911424355248, 9.6915379569294509e-05,
    -3.9278323883316833e-05, 1.5918905069328964e-05,  -6.4516892156554306e-06,
    2.6147711512907546e-06,  -1.0597268320104654e-06, 4.2949110782738057e-07,
    -1.7406618963571648e-07, 7.0546369464009681e-08,  -2.859136662305254e-08,
    1.1587644432798853e-08,  -4.6962953982309016e-09,
};

constexpr double kLongSeriesLimit = 0.5;

}  // namespace

double kernel_xcothx_inv(double x, double series_switch) {
  const double ax = std::abs(x);
  const double x2 = x * x;
  if (ax < series_switch) return (1.0 - x2 / 3.0) + 2.0 * x2 * x2 / 15.0;
  if (ax < kLongSeriesLimit) {
    double tail = 0.0;
    for (auto it = kTanhRatioTail.rbegin(); it != kTanhRatioTail.rend(); ++it)
      tail = tail * x2 + *it;
    return (1.0 - x2 / 3.0) + x2 * x2 * tail;
  }
  return std::tanh(ax) / ax;
}

}  // namespace fidsus
