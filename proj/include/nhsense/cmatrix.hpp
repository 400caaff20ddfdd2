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

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "nhsense/errors.hpp"

namespace nhsense {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};

/// Numerical thresholds shared by every module. All are relative to the
/// Frobenius norm of the matrix under test.
namespace tol {
inline constexpr double hermitian = 1e-10;
inline constexpr double psd = 1e-10;
inline constexpr double rank = 1e-10;
inline constexpr double cond_max = 1e12;
inline constexpr double adjugate_det = 1e-8;
}  // namespace tol

namespace cmatrix {

/// Row-major construction helper: `from_rows({{a, b}, {c, d}})`.
CMat from_rows(std::initializer_list<std::initializer_list<cplx>> rows);

/// e_ij unit matrix of size n.
CMat unit(Eigen::Index n, Eigen::Index i, Eigen::Index j);

double max_hermitian_defect(const CMat& a);
bool is_hermitian(const CMat& a, double rel_tol = tol::hermitian);
CMat hermitian_part(const CMat& a);       // (A + A†)/2
CMat antihermitian_part(const CMat& a);   // (A − A†)/2i, itself Hermitian

/// Inverse by Gauss-Jordan elimination with partial pivoting. Throws
/// SingularMatrix when a pivot vanishes or the 1-norm condition estimate
/// exceeds tol::cond_max.
CMat inverse(const CMat& a);

/// One-norm condition number ‖A‖₁‖A⁻¹‖₁ (infinity for exactly singular A).
double condition_1(const CMat& a);

cplx determinant(const CMat& a);

/// adj(A), satisfying A·adj(A) = det(A)·I for every square A, singular
/// ones included. Cofactor expansion for n ≤ 4 or nearly singular A,
/// det(A)·A⁻¹ otherwise.
CMat adjugate(const CMat& a);

struct HermEig {
  CMat vectors;  // columns are eigenvectors, unitary
  RVec values;   // ascending
};

/// Eigendecomposition A = U diag(Λ) U† of a Hermitian matrix. Each column
/// phase is fixed so its largest-magnitude component is real positive.
HermEig herm_eig(const CMat& a);

struct PsdSplit {
  CMat plus;
  CMat minus;
};

/// A = plus − minus with both sides positive semi-definite, built from the
/// positive and negative parts of the spectrum.
PsdSplit psd_split(const CMat& a);

/// Factor G = Y·Y† for positive semi-definite G. Y has one column per
/// eigenvalue above tol::rank·‖G‖_F, so it may have zero columns.
CMat psd_factor(const CMat& g);

double min_eigenvalue(const CMat& herm);
bool is_psd(const CMat& herm, double rel_tol = tol::psd);

/// General (non-Hermitian) spectrum, unordered.
std::vector<cplx> eigenvalues(const CMat& a);

CMat expm(const CMat& a);

/// Largest singular value.
double spectral_norm(const CMat& a);

}  // namespace cmatrix
}  // namespace nhsense
