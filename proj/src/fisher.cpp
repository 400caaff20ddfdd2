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

#include "nhsense/fisher.hpp"

#include <algorithm>
#include <cmath>

#include "nhsense/metrics.hpp"
#include "nhsense/response.hpp"

namespace nhsense {

namespace {

constexpr double kToneSeparation = 1e-12;

double photon_weight(const SensorModel& model, double Delta) {
  const CMat chi = chi_at(model, Delta);
  return (chi.adjoint() * chi)(0, 0).real();
}

Eigen::Vector2d quadratures(cplx z) { return {z.real(), z.imag()}; }

}  // namespace

ToneSet ToneSet::equal_photons(const SensorModel& model, const std::vector<double>& detunings, double nbar_tot) {
  std::vector<double> photons(detunings.size(), detunings.empty() ? 0.0 : nbar_tot / static_cast<double>(detunings.size()));
  return with_photons(model, detunings, photons);
}

ToneSet ToneSet::with_photons(const SensorModel& model, const std::vector<double>& detunings,
                              const std::vector<double>& photons) {
  if (detunings.size() != photons.size()) throw Error(ErrorCode::ShapeMismatch, "one photon number per tone");
  ToneSet set;
  for (std::size_t j = 0; j < detunings.size(); ++j) {
    if (!(photons[j] >= 0.0)) throw Error(ErrorCode::InvalidArgument, "photon numbers must be >= 0");
    const double beta = std::sqrt(model.kappa * photons[j] / photon_weight(model, detunings[j]));
    set.tones.push_back({detunings[j], beta});
  }
  return set;
}

std::vector<double> ToneSet::photon_numbers(const SensorModel& model) const {
  std::vector<double> out;
  out.reserve(tones.size());
  for (const auto& t : tones) out.push_back(t.beta * t.beta / model.kappa * photon_weight(model, t.Delta));
  return out;
}

GaussianMoments output_moments(const SensorModel& model, double epsilon, double tau) {
  if (!(tau > 0.0)) throw Error(ErrorCode::InvalidArgument, "tau must be positive");
  const CMat chi = susceptibility(model, 0.0, model.Delta, epsilon).chi;
  GaussianMoments g;
  g.u = std::sqrt(2.0 * tau) * model.beta * quadratures(1.0 - chi(0, 0));
  g.W = (noise_psd(model) / model.kappa) * Eigen::Matrix2d::Identity();
  g.tau = tau;
  g.epsilon = epsilon;
  return g;
}

double qfi_single(const SensorModel& model, double tau) {
  const GaussianMoments g = output_moments(model, 0.0, tau);
  const CMat chi = chi_at(model, model.Delta);
  const cplx dchi11 = -kI * (chi * model.V * chi)(0, 0) / model.kappa;
  const Eigen::Vector2d du = std::sqrt(2.0 * tau) * model.beta * quadratures(-dchi11);
  return du.dot(g.W.inverse() * du);
}

double qfi_multitone(const SensorModel& model, const ToneSet& tones, double tau) {
  std::vector<double> detunings;
  for (const auto& t : tones.tones) detunings.push_back(t.Delta);
  std::sort(detunings.begin(), detunings.end());
  for (std::size_t j = 1; j < detunings.size(); ++j) {
    if (detunings[j] - detunings[j - 1] <= kToneSeparation * model.kappa) {
      throw Error(ErrorCode::DuplicateTones, "two tones share the detuning " + std::to_string(detunings[j]));
    }
  }
  double total = 0.0;
  for (const auto& t : tones.tones) {
    SensorModel tone_model = model;
    tone_model.Delta = t.Delta;
    tone_model.beta = t.beta;
    total += qfi_single(tone_model, tau);
  }
  return total;
}

ToneRates per_tone_rate(const SensorModel& model, double Delta_j) {
  const CMat chi = chi_at(model, Delta_j);
  const double response = 2.0 * model.kappa * model.kappa * std::norm((chi * model.V * chi)(0, 0));
  const double weight = (chi.adjoint() * chi)(0, 0).real();
  return {response / (noise_psd_at(model, Delta_j) * weight), response / (min_noise_for(chi(0, 0), model.kappa) * weight)};
}

}  // namespace nhsense
