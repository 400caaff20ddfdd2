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

// Command-line front end: presets or JSON models in, CSV/JSON out.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nhsense/bathopt.hpp"
#include "nhsense/catalog.hpp"
#include "nhsense/dynamics.hpp"
#include "nhsense/fisher.hpp"
#include "nhsense/metrics.hpp"
#include "nhsense/model_io.hpp"
#include "nhsense/response.hpp"

namespace {

using namespace nhsense;
using nlohmann::ordered_json;

struct Options {
  std::string preset;
  std::string model_path;
  std::optional<double> J;
  std::string out;
  std::string format = "csv";
  std::string delta_grid;
  std::optional<double> delta;
  double epsilon = 0.0;
  double tau = 1.0;
  std::string tones;
  SimConfig sim;
  std::string start = "rest";
  std::string baths;
};

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::Io:
      return 4;
    case ErrorCode::Unstable:
    case ErrorCode::SingularMatrix:
    case ErrorCode::StepTooLarge:
    case ErrorCode::ZeroResponse:
    case ErrorCode::ConstructionFailed:
    case ErrorCode::UnstableEP:
      return 3;
    default:
      return 2;
  }
}

SensorModel load(const Options& o) {
  if (o.preset.empty() == o.model_path.empty()) {
    throw Error(ErrorCode::InvalidArgument, "give exactly one of --preset and --model");
  }
  if (!o.preset.empty()) return preset(o.preset, o.J);
  return load_model(o.model_path);
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "grid must be lo:hi:n, got '" + text + "'");
    }
  }
  if (parts.size() != 3 || parts[2] < 2 || parts[2] != std::floor(parts[2]) || !(parts[1] > parts[0])) {
    throw Error(ErrorCode::InvalidArgument, "grid must be lo:hi:n with lo < hi and n >= 2");
  }
  return linear_grid(parts[0], parts[1], static_cast<std::size_t>(parts[2]));
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad number '" + item + "'");
    }
  }
  return out;
}

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw Error(ErrorCode::Io, "cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  void finish() {
    stream().flush();
    if (!stream()) throw Error(ErrorCode::Io, "write failed");
  }

 private:
  std::ofstream file_;
};

ordered_json complex_matrix(const CMat& a) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index k = 0; k < a.cols(); ++k) row.push_back({a(i, k).real(), a(i, k).imag()});
    rows.push_back(row);
  }
  return rows;
}

int run_metrics(const Options& o) {
  SensorModel m = load(o);
  if (o.delta) m.Delta = *o.delta * m.kappa;
  const MetricsReport r = metrics_report(m, o.epsilon * m.kappa, o.tau / m.kappa);
  const double k = m.kappa;
  Output out(o.out);
  if (o.format == "json") {
    ordered_json j;
    j["nbar_tot"] = r.nbar_tot;
    j["signal_power"] = r.signal_power;
    j["s_epsilon"] = r.s_epsilon;
    j["noise_psd_per_kappa"] = r.noise_psd / k;
    j["noise_psd_min_per_kappa"] = r.noise_psd_min / k;
    j["gamma_meas_per_kappa"] = r.gamma_meas / k;
    j["gamma_opt_per_kappa"] = r.gamma_opt / k;
    for (const auto& [name, value] : r.bounds) j["bounds"][name + "_per_kappa"] = name == "reciprocal_signal" ? value : value / k;
    for (const auto& [name, value] : r.flags) j["flags"][name] = value;
    out.stream() << j.dump(2) << "\n";
  } else {
    auto& s = out.stream();
    s << "quantity,value\n";
    s << "nbar_tot," << fmt(r.nbar_tot) << "\n";
    s << "signal_power," << fmt(r.signal_power) << "\n";
    s << "s_epsilon," << fmt(r.s_epsilon) << "\n";
    s << "noise_psd_per_kappa," << fmt(r.noise_psd / k) << "\n";
    s << "noise_psd_min_per_kappa," << fmt(r.noise_psd_min / k) << "\n";
    s << "gamma_meas_per_kappa," << fmt(r.gamma_meas / k) << "\n";
    s << "gamma_opt_per_kappa," << fmt(r.gamma_opt / k) << "\n";
    for (const auto& [name, value] : r.bounds) {
      s << name << (name == "reciprocal_signal" ? "," : "_per_kappa,") << fmt(name == "reciprocal_signal" ? value : value / k) << "\n";
    }
  }
  out.finish();
  return 0;
}

int run_sweep(const Options& o) {
  const SensorModel base = load(o);
  const auto grid = parse_grid(o.delta_grid.empty() ? "-2:2:401" : o.delta_grid);
  bool rebuild = false;
  if (o.baths.empty()) {
    for (const auto& p : preset_list()) rebuild = rebuild || (p.name == o.preset && p.min_noise_baths);
  } else if (o.baths == "min-noise") {
    rebuild = true;
  } else if (o.baths != "model") {
    throw Error(ErrorCode::InvalidArgument, "--baths must be model or min-noise");
  }
  const CMat htilde = build_htilde(base, 0.0);
  const bool coupling = base.modes() == 2 && is_coupling_perturbation(base.V);
  const bool reciprocal = coupling && validate(base).reciprocal;
  const double k = base.kappa;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  Output out(o.out);
  auto& s = out.stream();
  s << "Delta_per_kappa,S_over_S_eps,S_bound_recip_over_S_eps,Gamma_meas_per_kappa,Gamma_opt_per_kappa,"
       "recip_rate_bound_per_kappa\n";
  for (double d : grid) {
    SensorModel m = rebuild ? construct_min_noise(htilde, k, d * k, base.V).first : base;
    m.Delta = d * k;
    m = with_photon_number(m, 1.0);
    const double eps = 1e-3 * k, tau = 1.0 / k;
    const double ratio = signal_power(m, eps, tau) / s_epsilon(eps, tau, 1.0);
    const cplx chi11 = chi_at(m, m.Delta)(0, 0);
    s << fmt(d) << "," << fmt(ratio) << "," << fmt(reciprocal ? 0.25 * std::norm(chi11) : nan) << ","
      << fmt(measurement_rate(m, false) / k) << "," << fmt(optimal_rate(m) / k) << "," << fmt(coupling ? 16.0 : nan)
      << "\n";
  }
  out.finish();
  return 0;
}

int run_spectrum(const Options& o) {
  const SensorModel m = load(o);
  const auto grid = parse_grid(o.delta_grid.empty() ? "-10:14:2001" : o.delta_grid);
  std::vector<double> scaled(grid);
  for (double& d : scaled) d *= m.kappa;
  const IntensitySpectrum spec = intensity_spectrum(m, scaled, o.epsilon * m.kappa);
  Output out(o.out);
  auto& s = out.stream();
  if (o.format == "json") {
    ordered_json j;
    j["Delta_per_kappa"] = grid;
    std::vector<double> p;
    for (double x : spec.intensities) p.push_back(x / m.kappa);
    j["P_per_kappa"] = p;
    std::vector<double> res;
    for (double x : spec.resonance_detunings) res.push_back(x / m.kappa);
    j["resonances_per_kappa"] = res;
    s << j.dump(2) << "\n";
  } else {
    s << "Delta_per_kappa,P_per_kappa\n";
    for (std::size_t i = 0; i < grid.size(); ++i) s << fmt(grid[i]) << "," << fmt(spec.intensities[i] / m.kappa) << "\n";
    std::cerr << "resonances: " << spec.resonance_detunings.size() << "\n";
  }
  out.finish();
  return 0;
}

int run_bath_opt(const Options& o) {
  const SensorModel m = load(o);
  const double delta = o.delta ? *o.delta * m.kappa : m.Delta;
  const auto [built, r] = construct_min_noise(build_htilde(m, 0.0), m.kappa, delta, m.V, m.beta);
  ordered_json j;
  j["kappa"] = m.kappa;
  j["Delta"] = delta;
  j["Y"] = complex_matrix(r.Y);
  j["Z"] = complex_matrix(r.Z);
  j["achieved_noise_per_kappa"] = r.achieved_noise / m.kappa;
  j["target_min_noise_per_kappa"] = r.target_min_noise / m.kappa;
  j["residual"] = r.residual;
  j["model"] = model_to_json(built);
  Output out(o.out);
  out.stream() << j.dump(2) << "\n";
  out.finish();
  return 0;
}

int run_qfi(const Options& o) {
  const SensorModel m = load(o);
  const double tau = o.tau / m.kappa;
  ordered_json j;
  j["tau_kappa"] = o.tau;
  j["qfi_single"] = qfi_single(m, tau);
  const ToneRates here = per_tone_rate(m, m.Delta);
  j["gamma_tilde_per_kappa"] = here.gamma_actual / m.kappa;
  j["gamma_tilde_opt_per_kappa"] = here.gamma_opt / m.kappa;
  if (!o.tones.empty()) {
    std::vector<double> detunings = parse_list(o.tones);
    for (double& d : detunings) d *= m.kappa;
    const ToneSet set = ToneSet::equal_photons(m, detunings, photon_number(m));
    j["qfi_multitone"] = qfi_multitone(m, set, tau);
    double best = 0.0;
    for (double d : detunings) best = std::max(best, per_tone_rate(m, d).gamma_opt);
    j["multitone_bound"] = tau / (m.kappa * m.kappa) * photon_number(m) * best;
  }
  Output out(o.out);
  out.stream() << j.dump(2) << "\n";
  out.finish();
  return 0;
}

int run_simulate(const Options& o) {
  const SensorModel m = load(o);
  SimConfig cfg = o.sim;
  if (o.start == "stationary") {
    cfg.start = StartState::Stationary;
  } else if (o.start != "rest") {
    throw Error(ErrorCode::InvalidArgument, "--start must be rest or stationary");
  }
  cfg.dt /= m.kappa;
  cfg.tau /= m.kappa;
  if (cfg.t_settle >= 0.0) cfg.t_settle /= m.kappa;
  const HomodyneEnsemble ens = simulate_homodyne(m, o.epsilon * m.kappa, cfg);
  Output out(o.out);
  write_ensemble_csv(ens, out.stream());
  out.finish();
  if (!o.out.empty()) {
    std::ofstream side(o.out + ".json", std::ios::binary);
    if (!side) throw Error(ErrorCode::Io, "cannot write " + o.out + ".json");
    side << ensemble_metadata_json(ens);
    if (!side) throw Error(ErrorCode::Io, "write failed for " + o.out + ".json");
  }
  return 0;
}

int run_catalog_list(const Options& o) {
  Output out(o.out);
  for (const auto& p : preset_list()) out.stream() << p.name << "\t" << p.description << "\n";
  out.finish();
  return 0;
}

void add_model_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--preset", o.preset, "Named model (see catalog-list)");
  cmd->add_option("--model", o.model_path, "Model JSON file");
  cmd->add_option("--J", o.J, "Coupling override for presets, units of kappa");
  cmd->add_option("--out", o.out, "Output file (default: standard output)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-Hermitian linear sensor analysis"};
  app.require_subcommand(1);
  Options o;

  auto* metrics = app.add_subcommand("metrics", "Signal, noise, rates and bounds at the model's drive point");
  add_model_options(metrics, o);
  metrics->add_option("--epsilon", o.epsilon, "Perturbation, units of kappa")->default_val(0.01);
  metrics->add_option("--tau", o.tau, "Measurement time, units of 1/kappa")->default_val(1.0);
  metrics->add_option("--delta", o.delta, "Drive detuning override, units of kappa");
  metrics->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));

  auto* sweep = app.add_subcommand("sweep", "Per-photon signal and rates against detuning");
  add_model_options(sweep, o);
  sweep->add_option("--delta", o.delta_grid, "Detuning grid lo:hi:n, units of kappa");
  sweep->add_option("--baths", o.baths,
                    "model: keep the model's baths; min-noise: rebuild them at every detuning "
                    "(default for presets defined by min-noise baths)");

  auto* spectrum = app.add_subcommand("spectrum", "Output intensity against detuning");
  add_model_options(spectrum, o);
  spectrum->add_option("--delta", o.delta_grid, "Detuning grid lo:hi:n, units of kappa");
  spectrum->add_option("--epsilon", o.epsilon, "Perturbation, units of kappa");
  spectrum->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));

  auto* bath = app.add_subcommand("bath-opt", "Minimum-noise bath realization");
  add_model_options(bath, o);
  bath->add_option("--delta", o.delta, "Detuning to optimize at, units of kappa");

  auto* qfi = app.add_subcommand("qfi", "Single- and multi-tone quantum Fisher information");
  add_model_options(qfi, o);
  qfi->add_option("--tau", o.tau, "Measurement time, units of 1/kappa")->default_val(1.0);
  qfi->add_option("--tones", o.tones, "Comma-separated tone detunings, units of kappa");

  auto* sim = app.add_subcommand("simulate", "Monte Carlo ensemble of the integrated homodyne current");
  add_model_options(sim, o);
  sim->add_option("--epsilon", o.epsilon, "Perturbation, units of kappa");
  sim->add_option("--dt", o.sim.dt, "Time step, units of 1/kappa")->default_val(1e-3);
  sim->add_option("--tau", o.sim.tau, "Record length, units of 1/kappa")->default_val(50.0);
  sim->add_option("--t-settle", o.sim.t_settle, "Settling time, units of 1/kappa (default 20/margin)");
  sim->add_option("--n-traj", o.sim.n_traj, "Number of trajectories")->default_val(2000);
  sim->add_option("--seed", o.sim.seed, "Master seed")->default_val(1);
  sim->add_option("--start", o.start, "rest or stationary")->default_val("rest");

  auto* list = app.add_subcommand("catalog-list", "List model presets");
  list->add_option("--out", o.out, "Output file (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (metrics->parsed()) return run_metrics(o);
    if (sweep->parsed()) return run_sweep(o);
    if (spectrum->parsed()) return run_spectrum(o);
    if (bath->parsed()) return run_bath_opt(o);
    if (qfi->parsed()) return run_qfi(o);
    if (sim->parsed()) return run_simulate(o);
    if (list->parsed()) return run_catalog_list(o);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return exit_code(e.code());
  }
  return 2;
}
