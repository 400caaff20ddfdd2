// Copyright 2026 The nhsense Authors
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

#pragma once

#include <cstdint>
#include <utility>

#include "nhsense/model.hpp"

namespace nhsense {

struct BathRealization {
  CMat Y;
  CMat Z;
  double achieved_noise = 0.0;     // S_II[0] of the realized baths (vacuum)
  double target_min_noise = 0.0;   // quantum limit for this H̃ and Δ
  double residual = 0.0;           // ‖H̃[0] − H̃‖_F of the rebuilt model
};

/// Intermediate matrices of the construction, exposed for inspection.
/// P and N are the images χYY†χ† and χZZ†χ†.
struct BathConstruction {
  CMat h;
  CMat border;     // X∓₁ (zero when skipped)
  CMat remainder;  // h ± X∓₁ restricted to have a vanishing first row/column
  CMat split_plus;
  CMat split_minus;
  CMat P;
  CMat N;
  int branch = 0;  // −1: h₁₁ < 0, +1: h₁₁ > 0, 0: h₁₁ and its row negligible
  double rho = 0.0;
};

/// h = χ·[(H̃ − H̃†)/2i + (κ/2)e₁₁]·χ† with χ = iκ(ΔI − H̃)⁻¹.
CMat h_matrix(const CMat& htilde, double kappa, double Delta);

/// Builds the bordered, padded and remainder matrices for h.
BathConstruction decompose_h(const CMat& h, double kappa);

/// Minimum-noise bath realization of H̃ at detuning Delta. The returned
/// model carries H = (H̃ + H̃†)/2, the constructed Y and Z, V, Delta and
/// beta.
std::pair<SensorModel, BathRealization> construct_min_noise(const CMat& htilde, double kappa, double Delta,
                                                            const CMat& v, double beta = 0.0);

/// Naive realization with a random PSD matrix K = RR† added to both YY† and
/// ZZ†. scale = 0 reproduces from_hamiltonian.
SensorModel random_realization(const CMat& htilde, double kappa, std::uint64_t seed, const CMat& v,
                               double scale = 1.0);

}  // namespace nhsense
