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

// A fiber of Flag(1, 2; R^4) -> Gr_1(R^4) contains a flag that is not opposite
// to the reference flag, so a bounded chart domain meets the fiber in a set
// reaching the domain boundary.

#include <iomanip>
#include <iostream>

#include "flagmetric/flagmetric.hpp"

int main() {
  namespace fm = flagmetric;
  const int n = 4;
  const std::vector<int> dims{1, 2};
  const fm::FlagDomainSpec spec = fm::FlagDomainSpec::standard(n, dims, {0.5, 0.5});
  const fm::FullFlag f0 = fm::FullFlag::from_basis(Eigen::MatrixXd::Identity(n, n), dims);
  const fm::EscapeWitness w = fm::fiber_escape_witness(n, dims, 1, f0.subspaces()[0], spec.reference);
  std::cout << "witness 2-plane (pairing " << w.pairing << "):\n" << w.flag.subspaces()[1].rep() << "\n\n";
  const fm::FiberDemo demo = fm::fiber_boundary_demo(spec, f0, 12);
  std::cout << std::setprecision(6) << "step, s, margin, distance to exit flag, drift of the fixed line\n";
  for (std::size_t k = 0; k < demo.flags.size(); ++k)
    std::cout << k << ", " << demo.parameter[k] << ", " << demo.margin[k] << ", " << demo.distance_to_limit[k] << ", "
              << demo.projection_drift[k] << '\n';
}
