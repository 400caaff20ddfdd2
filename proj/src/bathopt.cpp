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

#include "nhsense/bathopt.hpp"

#include <cmath>
#include <random>

#include "nhsense/metrics.hpp"
#include "nhsense/response.hpp"

namespace nhsense {

namespace {

constexpr double kDegenerateH11 = 1e-12;
constexpr double kRhoScale = 1e-10;
constexpr double kFactorCutoff = 1e-14;

// Y with YY† = x for PSD x. Eigenvalues at round-off level are dropped
// against a much tighter cutoff than psd_factor so the reconstruction
// residual stays at machine precision even when the padding is large.
CMat factor_psd(const CMat& x) {
  const Eigen::Index n = x.rows();
  if (n == 0 || x.norm() == 0.0) return CMat(n, 0);
  const auto eig = cmatrix::herm_eig(x);
  const double cutoff = kFactorCutoff * x.norm();
  std::vector<Eigen::Index> kept;
  for (Eigen::Index j = n - 1; j >= 0; --j) {
    if (eig.values(j) > cutoff) kept.push_back(j);
  }
  CMat y(n, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c) {
    y.col(static_cast<Eigen::Index>(c)) = eig.vectors.col(kept[c]) * std::sqrt(eig.values(kept[c]));
  }
  return y;
}

CMat zero_first_row_col(CMat x) {
  x.row(0).setZero();
  x.col(0).setZero();
  return x;
}

// Bordered matrix with (1,1) = |h₁₁|, first row/column s·h₁ᵢ, and the
// diagonal padding M|h₁ⱼ|²/|h₁₁|.
CMat bordered(const CMat& h, double sign) {
  const Eigen::Index m = h.rows();
  const double corner = std::abs(h(0, 0).real());
  CMat x = CMat::Zero(m, m);
  x(0, 0) = corner;
  for (Eigen::Index j = 1; j < m; ++j) {
    x(0, j) = sign * h(0, j);
    x(j, 0) = sign * h(j, 0);
    x(j, j) = static_cast<double>(m) * std::norm(h(0, j)) / corner;
  }
  return x;
}

}  // namespace

CMat h_matrix(const CMat& htilde, double kappa, double Delta) {
  require_stable(htilde, kappa);
  const Eigen::Index n = htilde.rows();
  const CMat chi = kI * kappa * cmatrix::inverse(Delta * CMat::Identity(n, n) - htilde);
  return cmatrix::hermitian_part(chi * bath_balance(htilde, kappa) * chi.adjoint());
}

BathConstruction decompose_h(const CMat& h_in, double kappa) {
  BathConstruction c;
  c.h = h_in;
  const Eigen::Index m = h_in.rows();
  const double scale = h_in.norm();
  const double h11 = h_in(0, 0).real();
  const double row_norm = m > 1 ? h_in.row(0).tail(m - 1).norm() : 0.0;

  CMat h = h_in;
  if (std::abs(h11) <= kDegenerateH11 * scale || scale == 0.0) {
    if (row_norm <= kDegenerateH11 * scale) {
      c.branch = 0;
    } else {
      c.branch = 1;
      c.rho = kRhoScale * std::max(scale, kappa);
      h(0, 0) += c.rho;
    }
  } else {
    c.branch = h11 < 0.0 ? -1 : 1;
  }

  if (c.branch == 0) {
    c.border = CMat::Zero(m, m);
    c.remainder = zero_first_row_col(h);
  } else {
    c.border = bordered(h, c.branch < 0 ? -1.0 : 1.0);
    if (!cmatrix::is_psd(c.border)) {
      throw Error(ErrorCode::ConstructionFailed, "bordered matrix is not positive semi-definite");
    }
    c.remainder = zero_first_row_col(c.branch < 0 ? CMat(h + c.border) : CMat(h - c.border));
  }

  c.split_plus = CMat::Zero(m, m);
  c.split_minus = CMat::Zero(m, m);
  if (m > 1) {
    const auto eig = cmatrix::herm_eig(c.remainder.bottomRightCorner(m - 1, m - 1));
    const RVec pos = eig.values.cwiseMax(0.0);
    const RVec neg = (-eig.values).cwiseMax(0.0);
    c.split_plus.bottomRightCorner(m - 1, m - 1) = eig.vectors * pos.asDiagonal() * eig.vectors.adjoint();
    c.split_minus.bottomRightCorner(m - 1, m - 1) = eig.vectors * neg.asDiagonal() * eig.vectors.adjoint();
  }

  if (c.branch < 0) {
    c.P = c.split_plus;
    c.N = c.border + c.split_minus;
  } else {
    c.P = c.border + c.split_plus;
    c.N = c.split_minus;
  }
  c.N(0, 0) += c.rho;
  return c;
}

std::pair<SensorModel, BathRealization> construct_min_noise(const CMat& htilde, double kappa, double Delta,
                                                            const CMat& v, double beta) {
  if (htilde.rows() != htilde.cols() || htilde.rows() == 0) {
    throw Error(ErrorCode::ShapeMismatch, "Htilde must be non-empty and square");
  }
  const Eigen::Index n = htilde.rows();
  const BathConstruction c = decompose_h(h_matrix(htilde, kappa, Delta), kappa);
  const CMat back = (Delta * CMat::Identity(n, n) - htilde) / kappa;

  SensorModel m;
  m.H = cmatrix::hermitian_part(htilde);
  m.Y = back * factor_psd(cmatrix::hermitian_part(c.P));
  m.Z = back * factor_psd(cmatrix::hermitian_part(c.N));
  m.kappa = kappa;
  m.V = v;
  m.Delta = Delta;
  m.beta = beta;
  check_model(m);

  BathRealization r;
  r.Y = m.Y;
  r.Z = m.Z;
  r.residual = (build_htilde(m, 0.0) - htilde).norm();
  r.achieved_noise = noise_psd_at(m, Delta);
  r.target_min_noise = min_noise_for(chi_at(m, Delta)(0, 0), kappa);
  return {m, r};
}

SensorModel random_realization(const CMat& htilde, double kappa, std::uint64_t seed, const CMat& v, double scale) {
  SensorModel m = from_hamiltonian(htilde, kappa, v);
  if (scale == 0.0) return m;
  const Eigen::Index n = htilde.rows();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  const double amp = scale * std::sqrt(htilde.norm() / static_cast<double>(n));
  CMat r(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) r(i, j) = amp * cplx(normal(rng), normal(rng));
  }
  const CMat k = r * r.adjoint();
  const auto split = cmatrix::psd_split(bath_balance(htilde, kappa));
  m.Y = factor_psd(cmatrix::hermitian_part(split.plus + k));
  m.Z = factor_psd(cmatrix::hermitian_part(split.minus + k));
  return m;
}

}  // namespace nhsense
