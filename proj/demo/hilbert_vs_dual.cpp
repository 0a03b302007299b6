// Copyright 2026 The flagmetric Authors
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

// Compares the dual cross-ratio metric with the Hilbert metric on a regular
// hexagon: the two agree once the 1/2 in front of the log is accounted for.

#include <cmath>
#include <iomanip>
#include <iostream>
#include <numbers>

#include "flagmetric/flagmetric.hpp"

int main() {
  namespace fm = flagmetric;
  std::vector<Eigen::VectorXd> hexagon;
  for (int k = 0; k < 6; ++k) {
    const double a = std::numbers::pi * k / 3.0;
    hexagon.push_back(Eigen::Vector2d(std::cos(a), std::sin(a)));
  }
  const fm::Domain domain = fm::Domain::polytope(hexagon);
  const fm::CaratheodoryMetric metric(domain);
  const fm::GrassmannPoint origin = domain.point(Eigen::Vector2d::Zero());
  std::cout << std::setprecision(12) << "t, 2*C(0, x_t), H(0, x_t)\n";
  for (double t : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
    const fm::GrassmannPoint x = domain.point(Eigen::Vector2d(t * 0.6, t * 0.5));
    std::cout << t << ", " << 2.0 * metric(origin, x).value << ", " << fm::hilbert_metric_line(domain, origin, x)
              << '\n';
  }
}
