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

#include <map>
#include <string>

#include "nhsense/model.hpp"

namespace nhsense {

/// Scalar performance of one model at one drive setting. Rates carry the
/// κ² normalization of SNR = (ε²/κ²)·τ·Γ.
struct MetricsReport {
  double nbar_tot = 0.0;
  double signal_power = 0.0;
  double s_epsilon = 0.0;
  double noise_psd = 0.0;
  double noise_psd_min = 0.0;
  double gamma_meas = 0.0;
  double gamma_opt = 0.0;
  std::map<std::string, double> bounds;
  std::map<std::string, bool> flags;
};

struct ReciprocalBounds {
  double signal_bound = 0.0;  // (1/4)·S_ε·|χ₁₁|²
  double rate_bound = 0.0;    // 16κ·n̄_tot
};

/// n̄_tot = (β²/κ)(χ†χ)₁₁: coherent photons only.
double photon_number(const SensorModel& model);

/// S = 2(β²/κ)|(χVχ)₁₁|²ε²τ².
double signal_power(const SensorModel& model, double epsilon, double tau);

/// S_ε = 8ε²τ²n̄, the ideal single-mode dispersive signal.
double s_epsilon(double epsilon, double tau, double nbar_tot);

/// Zero-frequency symmetrized homodyne noise S_II[0] with the model's own
/// baths and occupancies. Vacuum baths give (κ/2)(1 + (4/κ)(χYY†χ†)₁₁).
double noise_psd(const SensorModel& model);

/// Same, with the drive detuned to Delta instead of the model's detuning.
double noise_psd_at(const SensorModel& model, double Delta);

/// (κ/2)(1 + 2Θ[|1−χ₁₁|²−1](|1−χ₁₁|²−1)).
double min_noise_for(cplx chi11, double kappa);
double min_noise(const SensorModel& model);

/// Γ_meas = 2κ³|λ|²/S_II[0], using the realized or the minimum noise.
double measurement_rate(const SensorModel& model, bool use_min_noise);

/// Γ_opt: the rate with the quantum-limited noise for this H̃.
double optimal_rate(const SensorModel& model);

/// f(χ₁₁) = |χ₁₁|²/(1 + 2Θ[|1−χ₁₁|²−1](|1−χ₁₁|²−1)); maximal (=4) at χ₁₁ = 2.
double f_chi(cplx chi11);

/// Requires a reciprocal two-mode model with V = [[0, ½], [½, 0]].
ReciprocalBounds reciprocal_bounds(const SensorModel& model, double epsilon, double tau);

/// κ·n̄_tot·|χ₁₂|² for a fully directional (χ₂₁ = 0) coupling sensor.
double directional_bound(const SensorModel& model);

/// 4κ·n̄_tot·f(χ₁₁) for V = e₁₁.
double freq_shift_bound(const SensorModel& model);

/// Everything above for one model; bounds and flags are filled where they
/// apply.
MetricsReport metrics_report(const SensorModel& model, double epsilon, double tau);

/// V = [[0, ½], [½, 0]] (Hermitian coupling between modes 1 and 2).
CMat coupling_perturbation();
bool is_coupling_perturbation(const CMat& v);
bool is_frequency_perturbation(const CMat& v);

}  // namespace nhsense
