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

#include "nhsense/cmatrix.hpp"

namespace nhsense {

/// Models whose spectrum comes closer than this (in units of kappa) to the
/// real axis are rejected for steady-state analysis.
inline constexpr double kStabilityMargin = 1e-9;

/// Thermal occupancies of the input noises. Empty vectors mean vacuum for
/// every channel of that kind.
struct ThermalOccupancy {
  double waveguide = 0.0;
  std::vector<double> gain;  // one per column of Y
  std::vector<double> loss;  // one per column of Z

  bool is_vacuum() const;
  double gain_at(Eigen::Index j) const { return gain.empty() ? 0.0 : gain[static_cast<std::size_t>(j)]; }
  double loss_at(Eigen::Index j) const { return loss.empty() ? 0.0 : loss[static_cast<std::size_t>(j)]; }
};

/// Complete description of one sensing problem: the Hermitian mode
/// couplings, the gain (Y) and loss (Z) bath couplings, the readout
/// waveguide rate on mode 1, the perturbation matrix and the drive.
///
/// Treated as an immutable value; operations never modify a model.
struct SensorModel {
  CMat H;  // Hermitian, M×M, H(0,0) = 0 by the frequency-reference convention
  CMat Y;  // M×N_Y
  CMat Z;  // M×N_Z
  double kappa = 1.0;
  CMat V;  // Hermitian, M×M
  double Delta = 0.0;
  double beta = 0.0;
  ThermalOccupancy nbar_th;
  /// Effective Hamiltonian supplied alongside the baths (e.g. from a JSON
  /// file). Only used by validate() to report the decomposition residual.
  std::optional<CMat> supplied_htilde;

  Eigen::Index modes() const { return H.rows(); }
  Eigen::Index gain_baths() const { return Y.cols(); }
  Eigen::Index loss_baths() const { return Z.cols(); }
};

struct ValidationReport {
  double decomposition_residual = 0.0;
  double stability_margin_found = 0.0;
  bool stable = false;
  bool reciprocal = false;
  std::vector<std::string> messages;
};

/// Throws ShapeMismatch or InvalidModel when fields are inconsistent.
void check_model(const SensorModel& model);

/// H̃[ε] = H + εV + i(YY† − ZZ† − (κ/2)e₁₁).
CMat build_htilde(const SensorModel& model, double epsilon);

/// (H̃ − H̃†)/2i + (κ/2)e₁₁, i.e. the part that the baths must realize
/// as YY† − ZZ†.
CMat bath_balance(const CMat& htilde, double kappa);

/// −max_j Im Ω_j over the spectrum of H̃.
double stability_margin(const CMat& htilde);

/// Throws Unstable when the margin is below kStabilityMargin·κ.
void require_stable(const CMat& htilde, double kappa);

ValidationReport validate(const SensorModel& model);

/// Model with the naive bath realization obtained by splitting the
/// anti-Hermitian part of H̃ into its positive and negative spectral parts.
/// Generally not minimum-noise.
SensorModel from_hamiltonian(const CMat& htilde, double kappa, const CMat& v);

}  // namespace nhsense
