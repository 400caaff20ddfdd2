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

#include <vector>

#include "nhsense/model.hpp"

namespace nhsense {

/// First and symmetrized second moments of the output temporal mode
/// B = τ^{-1/2}∫₀^τ B_out dt, in quadrature form.
struct GaussianMoments {
  Eigen::Vector2d u = Eigen::Vector2d::Zero();
  Eigen::Matrix2d W = Eigen::Matrix2d::Zero();
  double tau = 0.0;
  double epsilon = 0.0;
};

struct Tone {
  double Delta = 0.0;
  double beta = 0.0;
};

struct ToneSet {
  std::vector<Tone> tones;

  /// Tones at the given detunings, each carrying nbar_tot / N photons.
  static ToneSet equal_photons(const SensorModel& model, const std::vector<double>& detunings, double nbar_tot);
  /// Tones with prescribed per-tone photon numbers.
  static ToneSet with_photons(const SensorModel& model, const std::vector<double>& detunings,
                              const std::vector<double>& photons);
  /// n̄_j = (β_j²/κ)(χ†(Δ_j)χ(Δ_j))₁₁.
  std::vector<double> photon_numbers(const SensorModel& model) const;
};

struct ToneRates {
  double gamma_actual = 0.0;
  double gamma_opt = 0.0;
};

GaussianMoments output_moments(const SensorModel& model, double epsilon, double tau);

/// F = (∂u/∂ε)ᵀW⁻¹(∂u/∂ε) at ε = 0, with the derivative taken analytically:
/// ∂χ̃₁₁/∂ε = −i(χVχ)₁₁/κ. The covariance-derivative term is not included.
double qfi_single(const SensorModel& model, double tau);

/// Sum of independent per-tone contributions (long-τ limit). Throws
/// DuplicateTones when two detunings coincide.
double qfi_multitone(const SensorModel& model, const ToneSet& tones, double tau);

/// Per-photon rates Γ̃(Δ_j) with the model's baths and with the quantum
/// limited noise at that detuning.
ToneRates per_tone_rate(const SensorModel& model, double Delta_j);

}  // namespace nhsense
