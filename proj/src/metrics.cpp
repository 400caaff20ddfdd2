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

#include "nhsense/metrics.hpp"

#include <cmath>

#include "nhsense/response.hpp"

namespace nhsense {

namespace {

double reflection_excess(cplx chi11) { return std::norm(1.0 - chi11) - 1.0; }

// 1 + 2Θ[x]x, with Θ[x] = 1 only for x > 0.
double gain_noise_factor(cplx chi11) {
  const double x = reflection_excess(chi11);
  return 1.0 + (x > 0.0 ? 2.0 * x : 0.0);
}

double photon_weight(const CMat& chi) { return (chi.adjoint() * chi)(0, 0).real(); }

void require_two_mode_coupling(const SensorModel& model, const char* op) {
  if (model.modes() != 2) throw Error(ErrorCode::WrongDimension, std::string(op) + " needs a two-mode model");
  if (!is_coupling_perturbation(model.V)) {
    throw Error(ErrorCode::WrongPerturbation, std::string(op) + " needs V = [[0, 1/2], [1/2, 0]]");
  }
}

}  // namespace

CMat coupling_perturbation() { return cmatrix::from_rows({{0.0, 0.5}, {0.5, 0.0}}); }

bool is_coupling_perturbation(const CMat& v) {
  return v.rows() == 2 && v.cols() == 2 && (v - coupling_perturbation()).norm() <= 1e-12;
}

bool is_frequency_perturbation(const CMat& v) {
  return v.rows() == v.cols() && v.rows() >= 1 && (v - cmatrix::unit(v.rows(), 0, 0)).norm() <= 1e-12;
}

double photon_number(const SensorModel& model) {
  const CMat chi = chi_at(model, model.Delta);
  return model.beta * model.beta / model.kappa * photon_weight(chi);
}

double signal_power(const SensorModel& model, double epsilon, double tau) {
  if (!(tau > 0.0)) throw Error(ErrorCode::InvalidArgument, "tau must be positive");
  const CMat chi = chi_at(model, model.Delta);
  const double response = std::norm((chi * model.V * chi)(0, 0));
  return 2.0 * model.beta * model.beta / model.kappa * response * epsilon * epsilon * tau * tau;
}

double s_epsilon(double epsilon, double tau, double nbar_tot) {
  if (!(tau > 0.0)) throw Error(ErrorCode::InvalidArgument, "tau must be positive");
  return 8.0 * epsilon * epsilon * tau * tau * nbar_tot;
}

double noise_psd_at(const SensorModel& model, double Delta) {
  const CMat chi = chi_at(model, Delta);
  const auto& th = model.nbar_th;
  double total = 0.5 * model.kappa;
  if (model.gain_baths() > 0) {
    const CVec gain_row = (chi.row(0) * model.Y).transpose();
    for (Eigen::Index j = 0; j < gain_row.size(); ++j) total += 2.0 * std::norm(gain_row(j)) * (th.gain_at(j) + 1.0);
  }
  if (model.loss_baths() > 0 && !th.loss.empty()) {
    const CVec loss_row = (chi.row(0) * model.Z).transpose();
    for (Eigen::Index j = 0; j < loss_row.size(); ++j) total += 2.0 * std::norm(loss_row(j)) * th.loss_at(j);
  }
  total += model.kappa * th.waveguide * std::norm(1.0 - chi(0, 0));
  return total;
}

double noise_psd(const SensorModel& model) { return noise_psd_at(model, model.Delta); }

double min_noise_for(cplx chi11, double kappa) { return 0.5 * kappa * gain_noise_factor(chi11); }

double min_noise(const SensorModel& model) { return min_noise_for(chi_at(model, model.Delta)(0, 0), model.kappa); }

double measurement_rate(const SensorModel& model, bool use_min_noise) {
  const double noise = use_min_noise ? min_noise(model) : noise_psd(model);
  const double k = model.kappa;
  return 2.0 * k * k * k * std::norm(lambda_response(model)) / noise;
}

double optimal_rate(const SensorModel& model) {
  const CMat chi = chi_at(model, model.Delta);
  const double nbar = model.beta * model.beta / model.kappa * photon_weight(chi);
  if (nbar == 0.0) return 0.0;
  const double response = std::norm((chi * model.V * chi)(0, 0));
  return 4.0 * model.kappa * nbar * response / (photon_weight(chi) * gain_noise_factor(chi(0, 0)));
}

double f_chi(cplx chi11) { return std::norm(chi11) / gain_noise_factor(chi11); }

ReciprocalBounds reciprocal_bounds(const SensorModel& model, double epsilon, double tau) {
  require_two_mode_coupling(model, "reciprocal_bounds");
  if (!validate(model).reciprocal) throw Error(ErrorCode::NotReciprocal, "|H12| != |H21|");
  const CMat chi = chi_at(model, model.Delta);
  const double nbar = model.beta * model.beta / model.kappa * photon_weight(chi);
  return {0.25 * s_epsilon(epsilon, tau, nbar) * std::norm(chi(0, 0)), 16.0 * model.kappa * nbar};
}

double directional_bound(const SensorModel& model) {
  require_two_mode_coupling(model, "directional_bound");
  const CMat chi = chi_at(model, model.Delta);
  if (std::abs(chi(1, 0)) > 1e-10) throw Error(ErrorCode::NotDirectional, "chi21 does not vanish");
  const double nbar = model.beta * model.beta / model.kappa * photon_weight(chi);
  return model.kappa * nbar * std::norm(chi(0, 1));
}

double freq_shift_bound(const SensorModel& model) {
  if (!is_frequency_perturbation(model.V)) throw Error(ErrorCode::WrongPerturbation, "needs V = e11");
  const CMat chi = chi_at(model, model.Delta);
  const double nbar = model.beta * model.beta / model.kappa * photon_weight(chi);
  return 4.0 * model.kappa * nbar * f_chi(chi(0, 0));
}

MetricsReport metrics_report(const SensorModel& model, double epsilon, double tau) {
  MetricsReport r;
  const CMat chi = chi_at(model, model.Delta);
  r.nbar_tot = photon_number(model);
  r.signal_power = signal_power(model, epsilon, tau);
  r.s_epsilon = s_epsilon(epsilon, tau, r.nbar_tot);
  r.noise_psd = noise_psd(model);
  r.noise_psd_min = min_noise(model);
  r.gamma_meas = measurement_rate(model, false);
  r.gamma_opt = optimal_rate(model);

  const bool reciprocal = validate(model).reciprocal;
  r.flags["reciprocal"] = reciprocal;
  r.flags["has_reflection_gain"] = reflection_excess(chi(0, 0)) > 0.0;

  if (model.modes() == 2 && is_coupling_perturbation(model.V)) {
    if (reciprocal) {
      const auto b = reciprocal_bounds(model, epsilon, tau);
      r.bounds["reciprocal_signal"] = b.signal_bound;
      r.bounds["reciprocal_rate"] = b.rate_bound;
    }
    if (std::abs(chi(1, 0)) <= 1e-10) r.bounds["directional_rate"] = directional_bound(model);
  }
  if (is_frequency_perturbation(model.V)) r.bounds["freq_shift_rate"] = freq_shift_bound(model);
  return r;
}

}  // namespace nhsense
