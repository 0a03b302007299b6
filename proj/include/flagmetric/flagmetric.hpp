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

#ifndef FLAGMETRIC_FLAGMETRIC_HPP
#define FLAGMETRIC_FLAGMETRIC_HPP

#include "flagmetric/errors.hpp"
#include "flagmetric/geometry.hpp"
#include "flagmetric/parallel.hpp"
#include "flagmetric/domain.hpp"
#include "flagmetric/duality.hpp"
#include "flagmetric/symmetric.hpp"
#include "flagmetric/metrics.hpp"
#include "flagmetric/rigidity.hpp"
#include "flagmetric/render.hpp"

#endif  // FLAGMETRIC_FLAGMETRIC_HPP
