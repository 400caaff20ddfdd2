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

#include <span>
#include <vector>

#include "nhsense/model.hpp"

namespace nhsense {

/// χ̃[ω;Δ;ε] together with the point at which it was evaluated.
struct SusceptibilityResult {
  CMat chi;
  double omega = 0.0;
  double Delta = 0.0;
  double epsilon = 0.0;
};

struct IntensitySpectrum {
  std::vector<double> detunings;
  std::vector<double> intensities;
  std::vector<double> resonance_detunings;
};

/// χ̃ = iκ[(ω+Δ)I − H̃[ε]]⁻¹ by direct inversion.
SusceptibilityResult susceptibility(const SensorModel& model, double omega, double Delta, double epsilon);

/// Same quantity at ω = 0 through −iκ·adj(−ΔI + H̃)/Π_j(−Δ + Ω_j).
/// Independent of the direct inverse; used as a cross-check.
SusceptibilityResult susceptibility_eigenform(const SensorModel& model, double Delta, double epsilon);

/// χ(Δ) ≡ χ̃[0;Δ;0].
CMat chi_at(const SensorModel& model, double Delta);

/// λ = i(β/κ)(χVχ)₁₁ at the model's detuning.
cplx lambda_response(const SensorModel& model);

/// Optimal homodyne phase φ = −arg λ in (−π, π]. Throws ZeroResponse if λ = 0.
double homodyne_phase(const SensorModel& model);

/// ⟨I⟩ = √(2κ)·Re[e^{iφ}β(1 − χ̃₁₁[0;Δ;ε])], with φ fixed at ε = 0.
double avg_homodyne_current(const SensorModel& model, double epsilon);

/// Mean reflected field ⟨B_out⟩ = β(1 − χ̃₁₁[0;Δ;ε]).
cplx mean_output_field(const SensorModel& model, double epsilon);

/// Coherent output intensity P[Δ] = β²|1 − χ₁₁|² at detuning Delta.
double output_intensity(const SensorModel& model, double Delta, double epsilon);

/// Sample P over an ascending grid and locate resonance features.
///
/// A feature is an interior local extremum of the sampled curve (sign change
/// of the discrete first difference) lying on the resonant side of the
/// far-detuned level β²: dips below it or peaks above it. Shoulders between
/// two dips are not features. Positions are refined by a parabola through
/// the extremal triple.
IntensitySpectrum intensity_spectrum(const SensorModel& model, std::span<const double> grid, double epsilon);

/// n evenly spaced points on [lo, hi] (n ≥ 2), endpoints included.
std::vector<double> linear_grid(double lo, double hi, std::size_t n);

}  // namespace nhsense
