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

#include <doctest.h>

#include "nhsense/catalog.hpp"
#include "nhsense/metrics.hpp"
#include "nhsense/response.hpp"
#include "test_support.hpp"

using namespace nhsense;
using nhsense::testing::rel_diff;

namespace {

template <class F>
ErrorCode code_of(F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidArgument;
}

TwoModeParams fig5() {
  TwoModeParams p;
  p.gamma1 = 0.5;
  p.gamma2 = 1.0;
  p.nu2 = 4.0;
  p.J = 20.0;
  return p;
}

// Both roots of the characteristic polynomial of a 2x2 matrix, sorted like eigenvalues().
std::pair<cplx, cplx> quadratic_roots(const CMat& a) {
  const cplx half_trace = (a(0, 0) + a(1, 1)) / 2.0;
  const cplx det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  const cplx root = std::sqrt(half_trace * half_trace - det);
  cplx x = half_trace - root, y = half_trace + root;
  if (x.real() > y.real() || (x.real() == y.real() && x.imag() > y.imag())) std::swap(x, y);
  return {x, y};
}

}  // namespace

TEST_CASE("single-mode family") {
  CHECK(std::abs(chi_at(single_mode(1.0, 0.0), 0.0)(0, 0) - 2.0) < 1e-15);
  CHECK(std::abs(chi_at(single_mode(1.0, -0.5), 0.0)(0, 0)) == doctest::Approx(4.0));
  CHECK(code_of([] { single_mode(1.0, -1.0); }) == ErrorCode::Unstable);
}

TEST_CASE("reciprocal presets") {
  const SensorModel nogain = preset("fig2-recip-nogain");
  CHECK(std::abs(nogain.H(0, 1) - 0.2) < 1e-15);
  CHECK(nogain.Y.cols() == 0);
  const SensorModel gain = preset("fig2-recip-gain");
  CHECK(gain.Y.cols() == 1);
  CHECK(std::abs(gain.H(0, 1) - 0.325) < 1e-15);
  const SensorModel amp = preset("fig3-amplifier");
  CHECK(amp.Y.cols() == 1);
  CHECK(amp.Z.cols() == 1);
  // The amplifier has no exceptional point: its eigenvalues stay split.
  const auto ev = eigenvalues(amp, 0.0);
  CHECK(std::abs(ev[1] - ev[0]) > 0.1);
  for (const auto& info : preset_list()) CHECK(photon_number(preset(info.name)) == doctest::Approx(1.0));
  CHECK(code_of([] { preset("nope"); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("directional family") {
  TwoModeParams p;
  p.gamma1 = 1.0;
  p.gamma2 = 0.5;
  p.J = 1.5;
  const SensorModel m = directional_two_mode(p);
  const CMat chi = chi_at(m, 0.0);
  CHECK(std::abs(chi(0, 0) - 1.0) < 1e-12);
  CHECK(std::abs(chi(1, 0)) < 1e-12);
  CHECK(std::abs(chi(0, 1) - cplx(0.0, -6.0)) < 1e-12);

  TwoModeParams off = p;
  off.J = 0.0;
  const CMat c0 = chi_at(directional_two_mode(off, BathChoice::Naive), 0.0);
  CHECK(std::abs(c0(0, 1)) == 0.0);
  CHECK(std::abs(c0(1, 0)) == 0.0);
}

TEST_CASE("chiral waveguide") {
  for (double g2 : {0.2, 0.25, 1.0 / 3.0, 0.5}) {
    const SensorModel m = with_photon_number(chiral_waveguide(1.0, 1.0, g2), 1.0);
    const CMat ht = build_htilde(m, 0.0);
    CHECK(std::abs(ht(1, 0)) < 1e-15);
    CHECK(std::abs(ht(0, 1) + kI * std::sqrt(g2)) < 1e-15);
    CHECK(noise_psd(m) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(rel_diff(measurement_rate(m, false), 4.0 / g2) < 1e-9);
    CHECK(rel_diff(optimal_rate(m), 4.0 / g2) < 1e-9);
  }
  CHECK(code_of([] { chiral_waveguide(1.0, 0.0, 0.5); }) == ErrorCode::InvalidRate);
  CHECK(code_of([] { chiral_waveguide(1.0, 1.0, -0.5); }) == ErrorCode::InvalidRate);
}

TEST_CASE("EP condition") {
  CHECK(ep_condition(1.0, 0.0, -0.3) == doctest::Approx(0.325));
  CHECK(ep_condition(1.0, 0.0, 1.0) == 0.0);
  CHECK(ep_condition(1.0, -0.5, 0.5) == 0.0);
  CHECK(code_of([] { ep_condition(1.0, -0.8, -0.3); }) == ErrorCode::UnstableEP);

  TwoModeParams p;
  p.gamma2 = -0.3;
  p.J = 0.325;
  const auto ev = eigenvalues(reciprocal_two_mode(p), 0.0);
  CHECK(std::abs(ev[1] - ev[0]) < 1e-6);
  CHECK(std::abs(ev[0] - cplx(0.0, -0.175)) < 1e-6);
}

TEST_CASE("directional eigenvalues") {
  TwoModeParams p = fig5();
  const auto ev0 = eigenvalues(directional_two_mode(p, BathChoice::Naive), 0.0);
  CHECK(std::abs(ev0[0] - cplx(0.0, -0.75)) < 1e-12);
  CHECK(std::abs(ev0[1] - cplx(4.0, -0.5)) < 1e-12);

  for (double J : {0.0, 1.5, 20.0, 300.0}) {
    p.J = J;
    const SensorModel m = directional_two_mode(p, BathChoice::Naive);
    const cplx s0 = splitting(m, 0.0);
    CHECK(std::abs(s0 - (p.nu2 - kI * (p.gamma2 - p.kappa - p.gamma1) / 2.0)) < 1e-9 * (1.0 + J));
    for (double eps : {0.01, 0.3}) {
      const auto [lo, hi] = directional_eigenvalues(p, eps);
      const auto [qlo, qhi] = quadratic_roots(build_htilde(m, eps));
      const auto num = eigenvalues(m, eps);
      const double scale = 1.0 + build_htilde(m, eps).norm();
      CHECK(std::min(std::abs(lo - qlo) + std::abs(hi - qhi), std::abs(lo - qhi) + std::abs(hi - qlo)) <
            1e-12 * scale);
      CHECK(std::min(std::abs(lo - num[0]) + std::abs(hi - num[1]), std::abs(lo - num[1]) + std::abs(hi - num[0])) <
            1e-12 * scale * 10.0);
    }
  }

  p.J = 1e4;
  const SensorModel big = directional_two_mode(p, BathChoice::Naive);
  const double ratio = std::abs(splitting(big, 0.3)) / std::sqrt(2.0 * 1e4 * 0.3);
  CHECK(ratio >= 0.99);
  CHECK(ratio <= 1.01);
}

TEST_CASE("Jordan form at the EP") {
  TwoModeParams p;
  p.gamma2 = -0.3;
  p.J = 0.325;
  const JordanForm f = jordan_transform(p);
  CHECK((f.T * f.T_inverse - CMat::Identity(2, 2)).norm() < 1e-15);
  CHECK(std::abs(f.omega0 - cplx(0.0, -0.175)) < 1e-15);
  const CMat nil = f.HJ - f.omega0 * CMat::Identity(2, 2);
  CHECK((nil * nil).norm() < 1e-14);
  CHECK(nil.norm() > 0.1);
  CHECK(std::abs(nil(0, 0)) + std::abs(nil(1, 1)) + std::abs(nil(1, 0)) < 1e-14);
  CHECK((f.VJ - cmatrix::from_rows({{0.5, 0.5 * kI}, {-0.5 * kI, 0.5}})).norm() < 1e-15);

  SensorModel shifted = reciprocal_two_mode(p);
  shifted.V = cmatrix::unit(2, 0, 0);
  double previous = 0.0;
  for (double eps : {1e-3, 1e-4, 1e-5}) {
    const auto ev = eigenvalues(shifted, eps);
    const cplx r = std::sqrt(-kI * eps * 0.325);
    const auto [a, b] = quadratic_roots(cmatrix::from_rows({{f.omega0 + r, 0.0}, {0.0, f.omega0 - r}}));
    const double err = std::abs(ev[0] - a) + std::abs(ev[1] - b);
    CHECK(err < 2.0 * eps);
    CHECK(err > 0.0);
    if (previous > 0.0) CHECK(err < 0.2 * previous);
    previous = err;
    CHECK(std::abs(ev[1] - ev[0]) / (2.0 * std::abs(r)) == doctest::Approx(1.0).epsilon(0.1));
  }

  TwoModeParams away = p;
  away.J = 0.4;
  CHECK(code_of([&] { jordan_transform(away); }) == ErrorCode::NotAtEP);
}
