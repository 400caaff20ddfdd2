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

#include "nhsense/catalog.hpp"

#include <algorithm>
#include <cmath>

#include "nhsense/bathopt.hpp"
#include "nhsense/metrics.hpp"
#include "nhsense/response.hpp"

namespace nhsense {

namespace {

constexpr double kEpTolerance = 1e-10;

// One column per nonzero local rate: loss columns for γ > 0, gain columns
// for γ < 0.
void add_local_bath(Eigen::Index n, Eigen::Index mode, double gamma, std::vector<CVec>& gain,
                    std::vector<CVec>& loss) {
  if (gamma == 0.0) return;
  CVec col = CVec::Zero(n);
  col(mode) = std::sqrt(std::abs(gamma) / 2.0);
  (gamma > 0.0 ? loss : gain).push_back(col);
}

CMat columns(Eigen::Index n, const std::vector<CVec>& cols) {
  CMat out(n, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = cols[j];
  return out;
}

CMat directional_htilde(const TwoModeParams& p) {
  return cmatrix::from_rows({{-kI * (p.kappa + p.gamma1) / 2.0, p.J}, {0.0, p.nu2 - kI * p.gamma2 / 2.0}});
}

}  // namespace

SensorModel single_mode(double kappa, double gamma1) {
  std::vector<CVec> gain, loss;
  add_local_bath(1, 0, gamma1, gain, loss);
  SensorModel m;
  m.H = CMat::Zero(1, 1);
  m.Y = columns(1, gain);
  m.Z = columns(1, loss);
  m.kappa = kappa;
  m.V = CMat::Identity(1, 1);
  require_stable(build_htilde(m, 0.0), kappa);
  return m;
}

SensorModel reciprocal_two_mode(const TwoModeParams& p) {
  std::vector<CVec> gain, loss;
  add_local_bath(2, 0, p.gamma1, gain, loss);
  add_local_bath(2, 1, p.gamma2, gain, loss);
  SensorModel m;
  m.H = cmatrix::from_rows({{0.0, p.J}, {std::conj(p.J), 0.0}});
  m.Y = columns(2, gain);
  m.Z = columns(2, loss);
  m.kappa = p.kappa;
  m.V = coupling_perturbation();
  require_stable(build_htilde(m, 0.0), p.kappa);
  return m;
}

SensorModel directional_two_mode(const TwoModeParams& p, BathChoice baths, double Delta) {
  const CMat htilde = directional_htilde(p);
  if (baths == BathChoice::Naive) {
    SensorModel m = from_hamiltonian(htilde, p.kappa, coupling_perturbation());
    m.Delta = Delta;
    return m;
  }
  return construct_min_noise(htilde, p.kappa, Delta, coupling_perturbation()).first;
}

SensorModel chiral_waveguide(double kappa, double gamma1, double gamma2) {
  if (!(gamma1 > 0.0) || !(gamma2 > 0.0)) throw Error(ErrorCode::InvalidRate, "chiral rates must be positive");
  const double g = std::sqrt(gamma1 * gamma2);
  SensorModel m;
  m.H = cmatrix::from_rows({{0.0, -kI * g / 2.0}, {kI * g / 2.0, 0.0}});
  m.Y = CMat(2, 0);
  m.Z = CMat(2, 1);
  m.Z << std::sqrt(gamma1 / 2.0), std::sqrt(gamma2 / 2.0);
  m.kappa = kappa;
  m.V = coupling_perturbation();
  require_stable(build_htilde(m, 0.0), kappa);
  return m;
}

double ep_condition(double kappa, double gamma1, double gamma2) {
  if (!(kappa + gamma1 + gamma2 > 0.0)) throw Error(ErrorCode::UnstableEP, "kappa + gamma1 + gamma2 must be > 0");
  return (kappa + gamma1 - gamma2) / 4.0;
}

std::vector<cplx> eigenvalues(const SensorModel& model, double epsilon) {
  auto vals = cmatrix::eigenvalues(build_htilde(model, epsilon));
  std::sort(vals.begin(), vals.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return vals;
}

cplx splitting(const SensorModel& model, double epsilon) {
  if (model.modes() != 2) throw Error(ErrorCode::WrongDimension, "splitting needs a two-mode model");
  const auto vals = eigenvalues(model, epsilon);
  return vals[1] - vals[0];
}

std::pair<cplx, cplx> directional_eigenvalues(const TwoModeParams& p, double epsilon) {
  const cplx centre = p.nu2 / 2.0 - kI * (p.kappa + p.gamma1 + p.gamma2) / 4.0;
  const cplx half_gap = p.nu2 / 2.0 + kI * (p.kappa + p.gamma1 - p.gamma2) / 4.0;
  const cplx root = std::sqrt(p.J * epsilon / 2.0 + epsilon * epsilon / 4.0 + half_gap * half_gap);
  return {centre - root, centre + root};
}

JordanForm jordan_transform(const TwoModeParams& p) {
  const double j_ep = ep_condition(p.kappa, p.gamma1, p.gamma2);
  if (std::abs(p.J - j_ep) > kEpTolerance * p.kappa) {
    throw Error(ErrorCode::NotAtEP, "J differs from the EP coupling " + std::to_string(j_ep));
  }
  const SensorModel m = reciprocal_two_mode(p);
  JordanForm f;
  f.T = 0.5 * cmatrix::from_rows({{1.0, -kI}, {-kI, 1.0}});
  f.T_inverse = cmatrix::from_rows({{1.0, kI}, {kI, 1.0}});
  f.HJ = f.T * build_htilde(m, 0.0) * f.T_inverse;
  f.VJ = f.T * cmatrix::unit(2, 0, 0) * f.T_inverse;
  f.omega0 = -kI * (p.kappa + p.gamma1 + p.gamma2) / 4.0;
  return f;
}

SensorModel with_photon_number(const SensorModel& model, double nbar) {
  const CMat chi = chi_at(model, model.Delta);
  SensorModel out = model;
  out.beta = std::sqrt(nbar * model.kappa / (chi.adjoint() * chi)(0, 0).real());
  return out;
}

std::vector<PresetInfo> preset_list() {
  return {
      {"fig2-recip-nogain", "reciprocal EP pair, gamma1=0, gamma2=0.2, J=0.2"},
      {"fig2-recip-gain", "reciprocal EP pair with gain, gamma1=0, gamma2=-0.3, J=0.325"},
      {"fig2-nonrecip", "directional pair, gamma1=1, gamma2=0.5, J=1.5, nu2=0, min-noise baths", true},
      {"fig3-amplifier", "reciprocal amplifier, gamma1=-0.84, gamma2=0.16, J=0.325"},
      {"fig5-splitting", "directional pair, gamma1=0.5, gamma2=1, nu2=4, J=20 (override with --J)"},
      {"chiral", "chiral waveguide pair, gamma1=1, gamma2=0.2"},
      {"single-mode", "ideal one-mode dispersive sensor, V=e11"},
  };
}

SensorModel preset(const std::string& name, std::optional<double> J) {
  SensorModel m;
  if (name == "fig2-recip-nogain") {
    m = reciprocal_two_mode({1.0, 0.0, 0.2, J.value_or(0.2), 0.0});
  } else if (name == "fig2-recip-gain") {
    m = reciprocal_two_mode({1.0, 0.0, -0.3, J.value_or(0.325), 0.0});
  } else if (name == "fig2-nonrecip") {
    m = directional_two_mode({1.0, 1.0, 0.5, J.value_or(1.5), 0.0});
  } else if (name == "fig3-amplifier") {
    m = reciprocal_two_mode({1.0, -0.84, 0.16, J.value_or(0.325), 0.0});
  } else if (name == "fig5-splitting") {
    m = directional_two_mode({1.0, 0.5, 1.0, J.value_or(20.0), 4.0}, BathChoice::Naive);
  } else if (name == "chiral") {
    m = chiral_waveguide(1.0, 1.0, 0.2);
  } else if (name == "single-mode") {
    m = single_mode(1.0, 0.0);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown preset '" + name + "'");
  }
  return with_photon_number(m, 1.0);
}

}  // namespace nhsense
