// Copyright 2026 The QPH Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <random>

#include "qph/state.hpp"

namespace qph {

using Rng = std::mt19937_64;

/// Haar-random pure state: a normalized vector of i.i.d. complex Gaussians.
Qustring random_qustring(int size_n, Rng &rng);

/// Haar-random unitary from the QR decomposition of a complex Ginibre matrix,
/// with the phases of R's diagonal folded back into Q.
CMatrix random_unitary(std::size_t dim, Rng &rng);

CVector gaussian_vector(std::size_t dim, Rng &rng);

}  // namespace qph
