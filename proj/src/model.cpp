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

#include "nhsense/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nhsense {

bool ThermalOccupancy::is_vacuum() const {
  const auto zero = [](double n) { return n == 0.0; };
  return waveguide == 0.0 && std::all_of(gain.begin(), gain.end(), zero) &&
         std::all_of(loss.begin(), loss.end(), zero);
}

void check_model(const SensorModel& m) {
  const Eigen::Index n = m.H.rows();
  if (n < 1 || m.H.cols() != n) throw Error(ErrorCode::ShapeMismatch, "H must be non-empty and square");
  if (m.V.rows() != n || m.V.cols() != n) throw Error(ErrorCode::ShapeMismatch, "V must match H");
  if (m.Y.rows() != n) throw Error(ErrorCode::ShapeMismatch, "Y must have one row per mode");
  if (m.Z.rows() != n) throw Error(ErrorCode::ShapeMismatch, "Z must have one row per mode");
  if (!cmatrix::is_hermitian(m.H)) throw Error(ErrorCode::InvalidModel, "H is not Hermitian");
  if (!cmatrix::is_hermitian(m.V)) throw Error(ErrorCode::InvalidModel, "V is not Hermitian");
  if (!(m.kappa > 0.0) || !std::isfinite(m.kappa)) throw Error(ErrorCode::InvalidModel, "kappa must be positive");
  if (!(m.beta >= 0.0) || !std::isfinite(m.beta)) throw Error(ErrorCode::InvalidModel, "beta must be real and >= 0");
  if (!std::isfinite(m.Delta)) throw Error(ErrorCode::InvalidModel, "Delta must be finite");
  if (std::abs(m.H(0, 0)) > tol::hermitian * std::max(m.H.norm(), m.kappa)) {
    throw Error(ErrorCode::InvalidModel, "H(1,1) must vanish (frequency reference on mode 1)");
  }
  const auto& th = m.nbar_th;
  if (!th.gain.empty() && static_cast<Eigen::Index>(th.gain.size()) != m.Y.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "nbar_th.gain needs one entry per gain bath");
  }
  if (!th.loss.empty() && static_cast<Eigen::Index>(th.loss.size()) != m.Z.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "nbar_th.loss needs one entry per loss bath");
  }
  const auto negative = [](double x) { return !(x >= 0.0); };
  if (negative(th.waveguide) || std::any_of(th.gain.begin(), th.gain.end(), negative) ||
      std::any_of(th.loss.begin(), th.loss.end(), negative)) {
    throw Error(ErrorCode::InvalidModel, "thermal occupancies must be >= 0");
  }
  if (m.supplied_htilde && (m.supplied_htilde->rows() != n || m.supplied_htilde->cols() != n)) {
    throw Error(ErrorCode::ShapeMismatch, "supplied Htilde must match H");
  }
}

CMat build_htilde(const SensorModel& m, double epsilon) {
  check_model(m);
  CMat dissipation = m.Y * m.Y.adjoint() - m.Z * m.Z.adjoint();
  dissipation(0, 0) -= 0.5 * m.kappa;
  return m.H + epsilon * m.V + kI * cmatrix::hermitian_part(dissipation);
}

CMat bath_balance(const CMat& htilde, double kappa) {
  CMat a = cmatrix::antihermitian_part(htilde);
  a(0, 0) += 0.5 * kappa;
  return cmatrix::hermitian_part(a);
}

double stability_margin(const CMat& htilde) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const cplx& w : cmatrix::eigenvalues(htilde)) worst = std::max(worst, w.imag());
  return -worst;
}

void require_stable(const CMat& htilde, double kappa) {
  const double margin = stability_margin(htilde);
  if (!(margin > kStabilityMargin * kappa)) {
    throw Error(ErrorCode::Unstable, "spectrum reaches Im(Omega) = " + std::to_string(-margin));
  }
}

ValidationReport validate(const SensorModel& m) {
  ValidationReport report;
  try {
    check_model(m);
  } catch (const Error& e) {
    report.messages.emplace_back(e.what());
    report.decomposition_residual = std::numeric_limits<double>::infinity();
    return report;
  }
  const CMat built = build_htilde(m, 0.0);
  const CMat& target = m.supplied_htilde ? *m.supplied_htilde : built;
  CMat expected = m.Y * m.Y.adjoint() - m.Z * m.Z.adjoint();
  expected(0, 0) -= 0.5 * m.kappa;
  report.decomposition_residual = (cmatrix::antihermitian_part(target) - expected).norm();
  if (m.supplied_htilde) {
    const double herm_residual = (cmatrix::hermitian_part(target) - m.H).norm();
    if (herm_residual > tol::hermitian * std::max(target.norm(), m.kappa)) {
      report.messages.push_back("Hermitian part of supplied Htilde differs from H by " +
                                std::to_string(herm_residual));
    }
  }

  report.stability_margin_found = stability_margin(target);
  report.stable = report.stability_margin_found > kStabilityMargin * m.kappa;
  if (!report.stable) report.messages.emplace_back("model is not stable");

  const double scale = 1e-10 * target.norm();
  report.reciprocal = true;
  for (Eigen::Index i = 0; i < target.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < target.cols(); ++j) {
      if (std::abs(std::abs(target(i, j)) - std::abs(target(j, i))) > scale) report.reciprocal = false;
    }
  }
  return report;
}

SensorModel from_hamiltonian(const CMat& htilde, double kappa, const CMat& v) {
  if (htilde.rows() != htilde.cols() || htilde.rows() == 0) {
    throw Error(ErrorCode::ShapeMismatch, "Htilde must be non-empty and square");
  }
  if (v.rows() != htilde.rows() || v.cols() != htilde.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "V must match Htilde");
  }
  require_stable(htilde, kappa);
  const auto split = cmatrix::psd_split(bath_balance(htilde, kappa));
  SensorModel m;
  m.H = cmatrix::hermitian_part(htilde);
  m.Y = cmatrix::psd_factor(split.plus);
  m.Z = cmatrix::psd_factor(split.minus);
  m.kappa = kappa;
  m.V = v;
  check_model(m);
  return m;
}

}  // namespace nhsense
