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

#include <optional>
#include <string>
#include <vector>

#include "nhsense/model.hpp"

namespace nhsense {

/// Parameters of the two-mode families. All rates in the same units as
/// kappa; gamma > 0 is local loss, gamma < 0 local gain.
struct TwoModeParams {
  double kappa = 1.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  cplx J = 0.0;
  double nu2 = 0.0;
};

enum class BathChoice { MinNoise, Naive };

/// One mode, H̃ = −i(κ+γ₁)/2, V = e₁₁.
SensorModel single_mode(double kappa, double gamma1);

/// H̃ = [[−i(κ+γ₁)/2, J], [J*, −iγ₂/2]] with local baths, V coupling the modes.
SensorModel reciprocal_two_mode(const TwoModeParams& p);

/// H̃ = [[−i(κ+γ₁)/2, J], [0, ν₂ − iγ₂/2]], V coupling the modes. Baths are
/// built at detuning Delta.
SensorModel directional_two_mode(const TwoModeParams& p, BathChoice baths = BathChoice::MinNoise,
                                 double Delta = 0.0);

/// Passive directional pair: both modes lose into one chiral channel
/// z = (√(γ₁/2), √(γ₂/2))ᵀ, with the Hermitian coupling −i√(γ₁γ₂)/2 chosen
/// so that H̃₂₁ vanishes and H̃₁₂ = −i√(γ₁γ₂).
SensorModel chiral_waveguide(double kappa, double gamma1, double gamma2);

/// Coupling at which the reciprocal pair has a stable exceptional point.
double ep_condition(double kappa, double gamma1, double gamma2);

/// Spectrum of H̃[ε], sorted by real part then imaginary part. Works for
/// unstable models.
std::vector<cplx> eigenvalues(const SensorModel& model, double epsilon);

/// Ω₊[ε] − Ω₋[ε] for a two-mode model (last minus first sorted eigenvalue).
cplx splitting(const SensorModel& model, double epsilon);

/// Ω±[ε] of the directional family in closed form, (Ω₋, Ω₊).
std::pair<cplx, cplx> directional_eigenvalues(const TwoModeParams& p, double epsilon);

struct JordanForm {
  CMat T;
  CMat T_inverse;
  CMat HJ;  // T·H̃·T⁻¹
  CMat VJ;  // T·e₁₁·T⁻¹
  cplx omega0;
};

/// Basis change bringing the EP-tuned reciprocal pair to upper-triangular
/// Jordan form. The perturbation transformed is the mode-1 frequency shift.
JordanForm jordan_transform(const TwoModeParams& p);

/// Copy of model with beta set so that n̄_tot = nbar at the model's detuning.
SensorModel with_photon_number(const SensorModel& model, double nbar);

struct PresetInfo {
  std::string name;
  std::string description;
  bool min_noise_baths = false;  // baths are defined as the optimum at the drive detuning
};

std::vector<PresetInfo> preset_list();

/// Named model, normalized to n̄_tot = 1 at Δ = 0. J overrides the
/// coupling of presets that have one.
SensorModel preset(const std::string& name, std::optional<double> J = std::nullopt);

}  // namespace nhsense
