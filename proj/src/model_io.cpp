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

#include "nhsense/model_io.hpp"

#include <cmath>
#include <fstream>

namespace nhsense {

namespace {

using nlohmann::json;

cplx parse_entry(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw Error(ErrorCode::InvalidModel, "matrix entry must be a number or [re, im]: " + v.dump());
}

CMat parse_matrix(const json& v, const char* name, Eigen::Index rows_hint) {
  if (!v.is_array()) throw Error(ErrorCode::InvalidModel, std::string(name) + " must be an array of rows");
  if (v.empty()) return CMat(rows_hint, 0);
  const auto rows = static_cast<Eigen::Index>(v.size());
  if (!v[0].is_array()) throw Error(ErrorCode::InvalidModel, std::string(name) + " must be an array of rows");
  const auto cols = static_cast<Eigen::Index>(v[0].size());
  CMat out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = v[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(ErrorCode::ShapeMismatch, std::string(name) + " has ragged rows");
    }
    for (Eigen::Index k = 0; k < cols; ++k) out(i, k) = parse_entry(row[static_cast<std::size_t>(k)]);
  }
  return out;
}

json dump_matrix(const CMat& a) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < a.cols(); ++k) row.push_back({a(i, k).real(), a(i, k).imag()});
    rows.push_back(row);
  }
  return rows;
}

double number(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw Error(ErrorCode::InvalidModel, std::string(key) + " must be a number");
  return j[key].get<double>();
}

std::vector<double> numbers(const json& v, const char* name) {
  if (!v.is_array()) throw Error(ErrorCode::InvalidModel, std::string(name) + " must be an array");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw Error(ErrorCode::InvalidModel, std::string(name) + " must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace

SensorModel model_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidModel, "model must be a JSON object");
  const std::string units = j.value("units", std::string("kappa"));
  if (units != "kappa" && units != "absolute") throw Error(ErrorCode::InvalidModel, "units must be kappa or absolute");
  if (!j.contains("H")) throw Error(ErrorCode::InvalidModel, "missing H");

  SensorModel m;
  m.kappa = number(j, "kappa", 1.0);
  if (!(m.kappa > 0.0)) throw Error(ErrorCode::InvalidModel, "kappa must be positive");
  const double rate = units == "kappa" ? m.kappa : 1.0;
  const double root = std::sqrt(rate);

  m.H = parse_matrix(j["H"], "H", 0) * rate;
  const Eigen::Index n = m.H.rows();
  m.Y = j.contains("Y") ? CMat(parse_matrix(j["Y"], "Y", n) * root) : CMat(n, 0);
  m.Z = j.contains("Z") ? CMat(parse_matrix(j["Z"], "Z", n) * root) : CMat(n, 0);
  m.V = j.contains("V") ? parse_matrix(j["V"], "V", n) : cmatrix::unit(n, 0, 0);
  m.Delta = number(j, "Delta", 0.0) * rate;
  m.beta = number(j, "beta", 0.0) * root;
  if (j.contains("Htilde")) m.supplied_htilde = parse_matrix(j["Htilde"], "Htilde", n) * rate;

  if (j.contains("nbar_th")) {
    const json& th = j["nbar_th"];
    if (th.is_number()) {
      const double x = th.get<double>();
      m.nbar_th.waveguide = x;
      m.nbar_th.gain.assign(static_cast<std::size_t>(m.Y.cols()), x);
      m.nbar_th.loss.assign(static_cast<std::size_t>(m.Z.cols()), x);
    } else if (th.is_object()) {
      m.nbar_th.waveguide = number(th, "waveguide", 0.0);
      if (th.contains("gain")) m.nbar_th.gain = numbers(th["gain"], "nbar_th.gain");
      if (th.contains("loss")) m.nbar_th.loss = numbers(th["loss"], "nbar_th.loss");
    } else {
      throw Error(ErrorCode::InvalidModel, "nbar_th must be a number or an object");
    }
  }
  check_model(m);
  return m;
}

json model_to_json(const SensorModel& m) {
  json j;
  j["units"] = "absolute";
  j["kappa"] = m.kappa;
  j["H"] = dump_matrix(m.H);
  j["Y"] = dump_matrix(m.Y);
  j["Z"] = dump_matrix(m.Z);
  j["V"] = dump_matrix(m.V);
  j["Delta"] = m.Delta;
  j["beta"] = m.beta;
  j["nbar_th"] = {{"waveguide", m.nbar_th.waveguide}, {"gain", m.nbar_th.gain}, {"loss", m.nbar_th.loss}};
  if (m.supplied_htilde) j["Htilde"] = dump_matrix(*m.supplied_htilde);
  return j;
}

SensorModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidModel, path + ": " + e.what());
  }
  return model_from_json(j);
}

void save_model(const SensorModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << model_to_json(model).dump(2) << "\n";
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

}  // namespace nhsense
