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

#include "nhsense/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <random>
#include <thread>

#include <boost/random/normal_distribution.hpp>
#include <json.hpp>

#include "nhsense/response.hpp"

namespace nhsense {

namespace {

constexpr double kMaxStepNorm = 0.01;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Noise input channel: column of the Langevin noise matrix, whether the
// bath noise enters conjugated (gain), and the per-quadrature standard
// deviation of its increment over one step.
struct Channel {
  std::vector<cplx> column;
  bool conjugated = false;
  double sd = 0.0;
};

struct Stepper {
  Eigen::Index m = 0;
  std::vector<cplx> E;  // row-major propagator
  std::vector<cplx> c;
  std::vector<Channel> channels;
  CVec alpha_ss;
  CMat start_factor;  // stationary covariance square root, or empty
  cplx phase;
  double beta = 0.0;
  double sqrt_kappa = 0.0;
  double dt = 0.0;
  long long settle_steps = 0;
  long long steps = 0;
};

CMat generator(const SensorModel& model, double epsilon) {
  const CMat htilde = build_htilde(model, epsilon);
  const Eigen::Index n = htilde.rows();
  return kI * model.Delta * CMat::Identity(n, n) - kI * htilde;
}

CVec drive(const SensorModel& model) {
  CVec d = CVec::Zero(model.modes());
  d(0) = -kI * std::sqrt(model.kappa) * model.beta;
  return d;
}

// P = E P E† + Q through the vectorized system (I − conj(E) ⊗ E) vec P = vec Q.
CMat discrete_lyapunov(const CMat& e, const CMat& q) {
  const Eigen::Index n = e.rows();
  CMat k(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) k.block(i * n, j * n, n, n) = std::conj(e(i, j)) * e;
  }
  const CMat lhs = CMat::Identity(n * n, n * n) - k;
  const CVec vec_q = Eigen::Map<const CVec>(q.data(), n * n);
  const CVec vec_p = cmatrix::inverse(lhs) * vec_q;
  return cmatrix::hermitian_part(Eigen::Map<const CMat>(vec_p.data(), n, n));
}

CMat psd_sqrt(const CMat& p) {
  const auto eig = cmatrix::herm_eig(p);
  return eig.vectors * eig.values.cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

Stepper make_stepper(const SensorModel& model, double epsilon, const SimConfig& cfg, double& t_settle_used) {
  if (!(cfg.dt > 0.0) || !(cfg.tau > 0.0) || cfg.n_traj < 1) {
    throw Error(ErrorCode::InvalidArgument, "need dt > 0, tau > 0 and n_traj >= 1");
  }
  const CMat htilde = build_htilde(model, epsilon);
  require_stable(build_htilde(model, 0.0), model.kappa);
  require_stable(htilde, model.kappa);
  const Eigen::Index n = htilde.rows();
  const double step_norm = cfg.dt * cmatrix::spectral_norm(htilde - model.Delta * CMat::Identity(n, n));
  if (step_norm > kMaxStepNorm) {
    throw Error(ErrorCode::StepTooLarge, "dt*||Htilde - Delta|| = " + std::to_string(step_norm));
  }

  Stepper s;
  s.m = n;
  s.dt = cfg.dt;
  s.beta = model.beta;
  s.sqrt_kappa = std::sqrt(model.kappa);
  // Without any response (β = 0 or V = 0) the quadrature is arbitrary; take φ = 0.
  s.phase = std::abs(lambda_response(model)) > 0.0 ? std::polar(1.0, homodyne_phase(model)) : cplx(1.0);

  const CMat l = generator(model, epsilon);
  const CMat e = cmatrix::expm(l * cfg.dt);
  const CVec c = (e - CMat::Identity(n, n)) * cmatrix::inverse(l) * drive(model);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) s.E.push_back(e(i, j));
    s.c.push_back(c(i));
  }
  s.alpha_ss = steady_state_amplitudes(model, epsilon);

  const auto& th = model.nbar_th;
  const auto add_channel = [&](const CVec& col, bool conj, double nbar) {
    Channel ch;
    ch.column.assign(col.data(), col.data() + col.size());
    ch.conjugated = conj;
    ch.sd = std::sqrt((nbar + 0.5) * cfg.dt / 2.0);
    s.channels.push_back(std::move(ch));
  };
  CVec waveguide = CVec::Zero(n);
  waveguide(0) = -kI * s.sqrt_kappa;
  add_channel(waveguide, false, th.waveguide);
  const double root2 = std::sqrt(2.0);
  for (Eigen::Index j = 0; j < model.gain_baths(); ++j) add_channel(-kI * root2 * model.Y.col(j), true, th.gain_at(j));
  for (Eigen::Index j = 0; j < model.loss_baths(); ++j) add_channel(-kI * root2 * model.Z.col(j), false, th.loss_at(j));

  if (cfg.start == StartState::Stationary) {
    CMat q = CMat::Zero(n, n);
    for (const auto& ch : s.channels) {
      const CVec col = Eigen::Map<const CVec>(ch.column.data(), n);
      q += 2.0 * ch.sd * ch.sd * col * col.adjoint();
    }
    s.start_factor = psd_sqrt(discrete_lyapunov(e, q));
    t_settle_used = cfg.t_settle < 0.0 ? 0.0 : cfg.t_settle;
  } else {
    t_settle_used = cfg.t_settle < 0.0 ? 20.0 / stability_margin(htilde) : cfg.t_settle;
  }
  s.settle_steps = std::llround(t_settle_used / cfg.dt);
  s.steps = std::llround(cfg.tau / cfg.dt);
  return s;
}

double run_trajectory(const Stepper& s, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  boost::random::normal_distribution<double> normal;
  const auto m = static_cast<std::size_t>(s.m);
  const std::size_t k = s.channels.size();
  std::vector<cplx> a(m, 0.0), next(m), w(k);

  if (s.start_factor.size() > 0) {
    CVec z(s.m);
    for (Eigen::Index i = 0; i < s.m; ++i) {
      const double re = normal(engine), im = normal(engine);
      z(i) = cplx(re, im) / std::sqrt(2.0);
    }
    const CVec a0 = s.alpha_ss + s.start_factor * z;
    for (std::size_t i = 0; i < m; ++i) a[i] = a0(static_cast<Eigen::Index>(i));
  }

  const auto step = [&]() {
    for (std::size_t j = 0; j < k; ++j) {
      const double re = normal(engine), im = normal(engine);
      w[j] = s.channels[j].sd * cplx(re, im);
    }
    for (std::size_t i = 0; i < m; ++i) {
      cplx acc = s.c[i];
      for (std::size_t j = 0; j < m; ++j) acc += s.E[i * m + j] * a[j];
      for (std::size_t j = 0; j < k; ++j) {
        const auto& ch = s.channels[j];
        acc += ch.column[i] * (ch.conjugated ? std::conj(w[j]) : w[j]);
      }
      next[i] = acc;
    }
  };

  for (long long n = 0; n < s.settle_steps; ++n) {
    step();
    a.swap(next);
  }
  double record = 0.0;
  const cplx emitted = -kI * s.sqrt_kappa * s.dt * 0.5;
  for (long long n = 0; n < s.steps; ++n) {
    step();
    const cplx out = s.beta * s.dt + w[0] + emitted * (a[0] + next[0]);
    record += std::real(s.phase * out);
    a.swap(next);
  }
  return std::sqrt(2.0) * s.sqrt_kappa * record;
}

double mean_of(const std::vector<double>& x) {
  double sum = 0.0;
  for (double v : x) sum += v;
  return sum / static_cast<double>(x.size());
}

}  // namespace

unsigned worker_threads() {
  const char* env = std::getenv("NHSENSE_THREADS");
  long requested = env ? std::strtol(env, nullptr, 10) : 0;
  if (requested > 0) return static_cast<unsigned>(requested);
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

CVec steady_state_amplitudes(const SensorModel& model, double epsilon) {
  const CMat chi = susceptibility(model, 0.0, model.Delta, epsilon).chi;
  return -kI * (model.beta / std::sqrt(model.kappa)) * chi.col(0);
}

std::vector<CVec> evolve_mean(const SensorModel& model, double epsilon, const std::vector<double>& t_grid) {
  if (t_grid.empty() || t_grid.front() != 0.0) throw Error(ErrorCode::InvalidArgument, "time grid must start at 0");
  require_stable(build_htilde(model, epsilon), model.kappa);
  const CMat l = generator(model, epsilon);
  const CVec forced = cmatrix::inverse(l) * drive(model);
  const Eigen::Index n = model.modes();
  std::vector<CVec> out;
  CVec a = CVec::Zero(n);
  out.push_back(a);
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    const double h = t_grid[i] - t_grid[i - 1];
    if (!(h >= 0.0)) throw Error(ErrorCode::InvalidArgument, "time grid must be ascending");
    const CMat e = cmatrix::expm(l * h);
    a = e * a + (e - CMat::Identity(n, n)) * forced;
    out.push_back(a);
  }
  return out;
}

HomodyneEnsemble simulate_homodyne(const SensorModel& model, double epsilon, const SimConfig& config) {
  HomodyneEnsemble ens;
  const Stepper stepper = make_stepper(model, epsilon, config, ens.t_settle_used);
  ens.epsilon = epsilon;
  ens.phi = std::arg(stepper.phase);
  ens.config = config;
  ens.samples_m.assign(config.n_traj, 0.0);

  const std::size_t workers = std::min<std::size_t>(worker_threads(), config.n_traj);
  const auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) ens.samples_m[i] = run_trajectory(stepper, splitmix64(config.seed ^ i));
  };
  if (workers <= 1) {
    work(0, config.n_traj);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (config.n_traj + workers - 1) / workers;
    for (std::size_t lo = 0; lo < config.n_traj; lo += chunk) {
      pool.emplace_back(work, lo, std::min(config.n_traj, lo + chunk));
    }
    for (auto& t : pool) t.join();
  }
  return ens;
}

double record_variance(const SensorModel& model, double epsilon, const SimConfig& config) {
  double t_settle = 0.0;
  const Stepper s = make_stepper(model, epsilon, config, t_settle);
  const Eigen::Index m = s.m;
  const auto k = static_cast<Eigen::Index>(s.channels.size());

  // Real coordinates u = (Re δa, Im δa); noise ξ has 2K unit normals.
  Eigen::MatrixXd er(2 * m, 2 * m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const cplx e = s.E[static_cast<std::size_t>(i * m + j)];
      er(i, j) = e.real();
      er(i, j + m) = -e.imag();
      er(i + m, j) = e.imag();
      er(i + m, j + m) = e.real();
    }
  }
  CMat g(m, 2 * k);  // complex response of δa to each real noise component
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto& ch = s.channels[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < m; ++i) {
      g(i, 2 * j) = ch.column[static_cast<std::size_t>(i)] * ch.sd;
      g(i, 2 * j + 1) = ch.column[static_cast<std::size_t>(i)] * ch.sd * (ch.conjugated ? -kI : kI);
    }
  }
  Eigen::MatrixXd b(2 * m, 2 * k);
  b.topRows(m) = g.real();
  b.bottomRows(m) = g.imag();

  // Record increment δr = Re(φ̂·(w₀ + e·(δa₁ + δa₁'))), δa₁' = (Eδa)₁ + (gξ)₁.
  const cplx pe = s.phase * (-kI * s.sqrt_kappa * s.dt * 0.5);
  Eigen::VectorXd av(2 * m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const cplx coeff = pe * ((j == 0 ? 1.0 : 0.0) + s.E[static_cast<std::size_t>(j)]);
    av(j) = coeff.real();
    av(j + m) = -coeff.imag();
  }
  Eigen::VectorXd bv(2 * k);
  for (Eigen::Index j = 0; j < 2 * k; ++j) {
    const cplx w0 = j == 0 ? cplx(s.channels[0].sd) : (j == 1 ? kI * s.channels[0].sd : cplx(0.0));
    bv(j) = std::real(s.phase * w0 + pe * g(0, j));
  }

  const Eigen::MatrixXd q = b * b.transpose();
  Eigen::MatrixXd suu = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  if (s.start_factor.size() > 0) {
    const CMat p = s.start_factor * s.start_factor.adjoint();
    suu.topLeftCorner(m, m) = 0.5 * p.real();
    suu.topRightCorner(m, m) = -0.5 * p.imag();
    suu.bottomLeftCorner(m, m) = 0.5 * p.imag();
    suu.bottomRightCorner(m, m) = 0.5 * p.real();
  }
  for (long long n = 0; n < s.settle_steps; ++n) suu = er * suu * er.transpose() + q;

  Eigen::VectorXd sum = Eigen::VectorXd::Zero(2 * m);
  double smm = 0.0;
  const Eigen::VectorXd bbv = b * bv;
  const double bvv = bv.squaredNorm();
  for (long long n = 0; n < s.steps; ++n) {
    const Eigen::VectorXd suu_av = suu * av;
    smm += 2.0 * av.dot(sum) + av.dot(suu_av) + bvv;
    sum = er * (sum + suu_av) + bbv;
    suu = er * suu * er.transpose() + q;
  }
  return 2.0 * model.kappa * smm;
}

SnrEstimate empirical_snr(const HomodyneEnsemble& ens_eps, const HomodyneEnsemble& ens_0) {
  const auto& a = ens_eps.config;
  const auto& b = ens_0.config;
  if (a.dt != b.dt || a.tau != b.tau || a.n_traj != b.n_traj || a.seed != b.seed || a.start != b.start ||
      ens_eps.t_settle_used != ens_0.t_settle_used || ens_eps.samples_m.size() != ens_0.samples_m.size()) {
    throw Error(ErrorCode::ConfigMismatch, "ensembles differ in more than epsilon");
  }
  const std::size_t n = ens_0.samples_m.size();
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "need at least two trajectories");
  const auto& x = ens_eps.samples_m;
  const auto& y = ens_0.samples_m;
  const double mx = mean_of(x), my = mean_of(y);
  double sy2 = 0.0;
  for (double v : y) sy2 += (v - my) * (v - my);

  SnrEstimate est;
  est.S_emp = (mx - my) * (mx - my);
  est.N_emp = sy2 / static_cast<double>(n - 1);
  est.snr_emp = est.N_emp > 0.0 ? est.S_emp / est.N_emp : 0.0;

  // Leave-one-out replicates; the pairs (x_i, y_i) share noise streams.
  const double nd = static_cast<double>(n);
  std::vector<double> s_rep(n), n_rep(n), r_rep(n);
  double sum_y = my * nd, sum_y2 = 0.0;
  for (double v : y) sum_y2 += v * v;
  for (std::size_t i = 0; i < n; ++i) {
    const double mxi = (mx * nd - x[i]) / (nd - 1.0);
    const double myi = (sum_y - y[i]) / (nd - 1.0);
    const double ss = (sum_y2 - y[i] * y[i]) - (nd - 1.0) * myi * myi;
    s_rep[i] = (mxi - myi) * (mxi - myi);
    n_rep[i] = n > 2 ? ss / (nd - 2.0) : 0.0;
    r_rep[i] = n_rep[i] > 0.0 ? s_rep[i] / n_rep[i] : 0.0;
  }
  const auto jackknife_se = [&](const std::vector<double>& rep) {
    const double m = mean_of(rep);
    double acc = 0.0;
    for (double v : rep) acc += (v - m) * (v - m);
    return std::sqrt((nd - 1.0) / nd * acc);
  };
  est.S_se = jackknife_se(s_rep);
  est.N_se = jackknife_se(n_rep);
  est.snr_se = jackknife_se(r_rep);
  return est;
}

void write_ensemble_csv(const HomodyneEnsemble& ens, std::ostream& out) {
  out << "traj_index,m_value\n";
  char buf[64];
  for (std::size_t i = 0; i < ens.samples_m.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.16e\n", i, ens.samples_m[i]);
    out << buf;
  }
}

std::string ensemble_metadata_json(const HomodyneEnsemble& ens) {
  nlohmann::ordered_json j;
  j["epsilon"] = ens.epsilon;
  j["phi"] = ens.phi;
  j["dt"] = ens.config.dt;
  j["t_settle"] = ens.t_settle_used;
  j["tau"] = ens.config.tau;
  j["n_traj"] = ens.config.n_traj;
  j["seed"] = ens.config.seed;
  j["start"] = ens.config.start == StartState::Stationary ? "stationary" : "rest";
  return j.dump(2) + "\n";
}

}  // namespace nhsense
