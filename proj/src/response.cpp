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

#include "nhsense/response.hpp"

#include <cmath>
#include <algorithm>
#include <numbers>

namespace nhsense {

namespace {

CMat detuned_resolvent_matrix(const CMat& htilde, double frequency) {
  const Eigen::Index n = htilde.rows();
  return frequency * CMat::Identity(n, n) - htilde;
}

}  // namespace

SusceptibilityResult susceptibility(const SensorModel& model, double omega, double Delta, double epsilon) {
  const CMat htilde = build_htilde(model, epsilon);
  require_stable(htilde, model.kappa);
  const CMat inv = cmatrix::inverse(detuned_resolvent_matrix(htilde, omega + Delta));
  return {kI * model.kappa * inv, omega, Delta, epsilon};
}

SusceptibilityResult susceptibility_eigenform(const SensorModel& model, double Delta, double epsilon) {
  const CMat htilde = build_htilde(model, epsilon);
  require_stable(htilde, model.kappa);
  const Eigen::Index n = htilde.rows();
  const CMat shifted = htilde - Delta * CMat::Identity(n, n);
  cplx denominator = 1.0;
  for (const cplx& omega_j : cmatrix::eigenvalues(htilde)) denominator *= (omega_j - Delta);
  if (std::abs(denominator) == 0.0) throw Error(ErrorCode::SingularMatrix, "drive on an eigenvalue");
  return {-kI * model.kappa * cmatrix::adjugate(shifted) / denominator, 0.0, Delta, epsilon};
}

CMat chi_at(const SensorModel& model, double Delta) { return susceptibility(model, 0.0, Delta, 0.0).chi; }

cplx lambda_response(const SensorModel& model) {
  const CMat chi = chi_at(model, model.Delta);
  const cplx chi_v_chi = (chi * model.V * chi)(0, 0);
  return kI * (model.beta / model.kappa) * chi_v_chi;
}

double homodyne_phase(const SensorModel& model) {
  const cplx lambda = lambda_response(model);
  if (std::abs(lambda) == 0.0) throw Error(ErrorCode::ZeroResponse, "lambda vanishes at this drive point");
  const double phi = -std::arg(lambda);
  return phi <= -std::numbers::pi ? std::numbers::pi : phi;
}

cplx mean_output_field(const SensorModel& model, double epsilon) {
  const CMat chi = susceptibility(model, 0.0, model.Delta, epsilon).chi;
  return model.beta * (1.0 - chi(0, 0));
}

double avg_homodyne_current(const SensorModel& model, double epsilon) {
  const double phi = homodyne_phase(model);
  return std::sqrt(2.0 * model.kappa) * std::real(std::polar(1.0, phi) * mean_output_field(model, epsilon));
}

double output_intensity(const SensorModel& model, double Delta, double epsilon) {
  const CMat chi = susceptibility(model, 0.0, Delta, epsilon).chi;
  return model.beta * model.beta * std::norm(1.0 - chi(0, 0));
}

IntensitySpectrum intensity_spectrum(const SensorModel& model, std::span<const double> grid, double epsilon) {
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw Error(ErrorCode::InvalidArgument, "detuning grid must be ascending");
  }
  IntensitySpectrum out;
  out.detunings.assign(grid.begin(), grid.end());
  out.intensities.reserve(grid.size());
  for (const double delta : grid) out.intensities.push_back(output_intensity(model, delta, epsilon));

  const auto& p = out.intensities;
  const double baseline = model.beta * model.beta;
  const double floor = 1e-9 * baseline;
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    const double left = p[i] - p[i - 1];
    const double right = p[i + 1] - p[i];
    const bool is_min = left < 0.0 && right > 0.0;
    const bool is_max = left > 0.0 && right < 0.0;
    if (!(is_min && p[i] < baseline - floor) && !(is_max && p[i] > baseline + floor)) continue;
    // Vertex of the parabola through the three samples.
    const double x0 = grid[i - 1], x1 = grid[i], x2 = grid[i + 1];
    const double d1 = (p[i] - p[i - 1]) / (x1 - x0);
    const double d2 = (p[i + 1] - p[i]) / (x2 - x1);
    const double curvature = (d2 - d1) / (x2 - x0);
    double vertex = x1;
    if (curvature != 0.0) vertex = 0.5 * (x0 + x1) - d1 / (2.0 * curvature);
    out.resonance_detunings.push_back(std::clamp(vertex, x0, x2));
  }
  return out;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  if (n < 2 || !(hi > lo)) throw Error(ErrorCode::InvalidArgument, "grid needs n >= 2 and hi > lo");
  std::vector<double> g(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo + step * static_cast<double>(i);
  g.back() = hi;
  return g;
}

}  // namespace nhsense
