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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nhsense/model.hpp"

namespace nhsense {

/// How each trajectory begins. Rest starts from α = 0 and discards
/// t_settle of evolution. Stationary draws the initial amplitudes from the
/// stationary law of the discretized process, so no settling is needed.
enum class StartState { Rest, Stationary };

struct SimConfig {
  double dt = 1e-3;
  double t_settle = -1.0;  // < 0: 20/margin for Rest, 0 for Stationary
  double tau = 50.0;
  std::size_t n_traj = 2000;
  std::uint64_t seed = 1;
  StartState start = StartState::Rest;
};

struct HomodyneEnsemble {
  std::vector<double> samples_m;
  double epsilon = 0.0;
  double phi = 0.0;
  double t_settle_used = 0.0;
  SimConfig config;
};

struct SnrEstimate {
  double S_emp = 0.0;
  double N_emp = 0.0;
  double snr_emp = 0.0;
  double S_se = 0.0;
  double N_se = 0.0;
  double snr_se = 0.0;
};

/// α = −i(β/√κ)·χ̃[0;Δ;ε] e₁.
CVec steady_state_amplitudes(const SensorModel& model, double epsilon);

/// Mean amplitudes at each time of an ascending grid starting at 0, from
/// α(0) = 0, propagated exactly between grid points.
std::vector<CVec> evolve_mean(const SensorModel& model, double epsilon, const std::vector<double>& t_grid);

/// c-number Langevin ensemble of the integrated homodyne current. The
/// homodyne phase is the optimal one of the unperturbed model.
HomodyneEnsemble simulate_homodyne(const SensorModel& model, double epsilon, const SimConfig& config);

/// Exact variance of m over the finite window for the discretized process
/// that simulate_homodyne samples, by propagating the joint covariance of
/// the amplitudes and the record. Tends to τ·S_II[0] only once τ exceeds
/// every correlation time of the output noise.
double record_variance(const SensorModel& model, double epsilon, const SimConfig& config);

/// S from the difference of sample means, N from the ε = 0 sample
/// variance; standard errors by the paired jackknife.
SnrEstimate empirical_snr(const HomodyneEnsemble& ens_eps, const HomodyneEnsemble& ens_0);

/// Worker count from NHSENSE_THREADS (unset or 0: hardware concurrency).
unsigned worker_threads();

void write_ensemble_csv(const HomodyneEnsemble& ens, std::ostream& out);
std::string ensemble_metadata_json(const HomodyneEnsemble& ens);

}  // namespace nhsense
