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

#include "nhsense/cmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

namespace nhsense::cmatrix {

namespace {

void require_square(const CMat& a, const char* op) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw Error(ErrorCode::ShapeMismatch, std::string(op) + " needs a non-empty square matrix, got " +
                                              std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

void require_hermitian(const CMat& a, const char* op) {
  require_square(a, op);
  if (!is_hermitian(a)) {
    throw Error(ErrorCode::NotHermitian,
                std::string(op) + ": hermitian defect " + std::to_string(max_hermitian_defect(a)));
  }
}

// Gauss-Jordan with partial pivoting. Returns false on an exactly zero pivot.
bool gauss_jordan(const CMat& a, CMat& inv) {
  const Eigen::Index n = a.rows();
  CMat work = a;
  inv = CMat::Identity(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index pivot = k;
    double best = std::abs(work(k, k));
    for (Eigen::Index i = k + 1; i < n; ++i) {
      if (std::abs(work(i, k)) > best) {
        best = std::abs(work(i, k));
        pivot = i;
      }
    }
    if (best == 0.0) return false;
    if (pivot != k) {
      work.row(k).swap(work.row(pivot));
      inv.row(k).swap(inv.row(pivot));
    }
    const cplx scale = 1.0 / work(k, k);
    work.row(k) *= scale;
    inv.row(k) *= scale;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == k) continue;
      const cplx f = work(i, k);
      if (f == cplx{}) continue;
      work.row(i) -= f * work.row(k);
      inv.row(i) -= f * inv.row(k);
    }
  }
  return true;
}

double norm_1(const CMat& a) {
  double best = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) best = std::max(best, a.col(j).cwiseAbs().sum());
  return best;
}

CMat minor_of(const CMat& a, Eigen::Index row, Eigen::Index col) {
  const Eigen::Index n = a.rows();
  CMat m(n - 1, n - 1);
  for (Eigen::Index i = 0, r = 0; i < n; ++i) {
    if (i == row) continue;
    for (Eigen::Index j = 0, c = 0; j < n; ++j) {
      if (j == col) continue;
      m(r, c++) = a(i, j);
    }
    ++r;
  }
  return m;
}

CMat cofactor_adjugate(const CMat& a) {
  const Eigen::Index n = a.rows();
  if (n == 1) return CMat::Identity(1, 1);
  CMat adj(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      adj(i, j) = sign * determinant(minor_of(a, j, i));
    }
  }
  return adj;
}

}  // namespace

CMat from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
  const auto n_rows = static_cast<Eigen::Index>(rows.size());
  const auto n_cols = n_rows == 0 ? 0 : static_cast<Eigen::Index>(rows.begin()->size());
  CMat m(n_rows, n_cols);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    if (static_cast<Eigen::Index>(row.size()) != n_cols) {
      throw Error(ErrorCode::ShapeMismatch, "ragged rows in from_rows");
    }
    Eigen::Index j = 0;
    for (const cplx& v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

CMat unit(Eigen::Index n, Eigen::Index i, Eigen::Index j) {
  CMat m = CMat::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

double max_hermitian_defect(const CMat& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const CMat& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  if (a.size() == 0) return true;
  return max_hermitian_defect(a) <= rel_tol * a.norm();
}

CMat hermitian_part(const CMat& a) { return 0.5 * (a + a.adjoint()); }

CMat antihermitian_part(const CMat& a) { return (a - a.adjoint()) / (2.0 * kI); }

CMat inverse(const CMat& a) {
  require_square(a, "inverse");
  CMat inv;
  if (!gauss_jordan(a, inv)) throw Error(ErrorCode::SingularMatrix, "zero pivot");
  const double cond = norm_1(a) * norm_1(inv);
  if (!(cond <= tol::cond_max)) {
    throw Error(ErrorCode::SingularMatrix, "condition estimate " + std::to_string(cond) + " exceeds limit");
  }
  return inv;
}

double condition_1(const CMat& a) {
  require_square(a, "condition_1");
  CMat inv;
  if (!gauss_jordan(a, inv)) return std::numeric_limits<double>::infinity();
  return norm_1(a) * norm_1(inv);
}

cplx determinant(const CMat& a) {
  require_square(a, "determinant");
  const Eigen::Index n = a.rows();
  switch (n) {
    case 1: return a(0, 0);
    case 2: return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    default: break;
  }
  CMat lu = a;
  cplx det = 1.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index pivot = k;
    for (Eigen::Index i = k + 1; i < n; ++i) {
      if (std::abs(lu(i, k)) > std::abs(lu(pivot, k))) pivot = i;
    }
    if (lu(pivot, k) == cplx{}) return cplx{};
    if (pivot != k) {
      lu.row(k).swap(lu.row(pivot));
      det = -det;
    }
    det *= lu(k, k);
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const cplx f = lu(i, k) / lu(k, k);
      lu.row(i).tail(n - k) -= f * lu.row(k).tail(n - k);
    }
  }
  return det;
}

CMat adjugate(const CMat& a) {
  require_square(a, "adjugate");
  const Eigen::Index n = a.rows();
  if (n <= 4) return cofactor_adjugate(a);
  const cplx det = determinant(a);
  if (std::abs(det) < tol::adjugate_det * std::pow(a.norm(), static_cast<double>(n))) {
    return cofactor_adjugate(a);
  }
  try {
    return det * inverse(a);
  } catch (const Error&) {
    return cofactor_adjugate(a);
  }
}

HermEig herm_eig(const CMat& a) {
  require_hermitian(a, "herm_eig");
  Eigen::SelfAdjointEigenSolver<CMat> solver(hermitian_part(a));
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NotHermitian, "herm_eig: eigensolver did not converge");
  }
  HermEig out{solver.eigenvectors(), solver.eigenvalues()};
  for (Eigen::Index j = 0; j < out.vectors.cols(); ++j) {
    auto col = out.vectors.col(j);
    const double largest = col.cwiseAbs().maxCoeff();
    Eigen::Index k = 0;
    while (std::abs(col(k)) < largest * (1.0 - 1e-12)) ++k;
    col *= std::conj(col(k)) / std::abs(col(k));
    col(k) = std::abs(col(k));
  }
  return out;
}

PsdSplit psd_split(const CMat& a) {
  const HermEig eig = herm_eig(a);
  const RVec pos = (eig.values.cwiseAbs() + eig.values) / 2.0;
  const RVec neg = (eig.values.cwiseAbs() - eig.values) / 2.0;
  const CMat& u = eig.vectors;
  PsdSplit out{u * pos.cast<cplx>().asDiagonal() * u.adjoint(), u * neg.cast<cplx>().asDiagonal() * u.adjoint()};
  out.plus = hermitian_part(out.plus);
  out.minus = hermitian_part(out.minus);
  return out;
}

CMat psd_factor(const CMat& g) {
  const HermEig eig = herm_eig(g);
  const double scale = g.norm();
  const Eigen::Index n = g.rows();
  if (n > 0 && eig.values(0) < -tol::psd * scale) {
    throw Error(ErrorCode::NotPSD, "psd_factor: minimum eigenvalue " + std::to_string(eig.values(0)));
  }
  std::vector<Eigen::Index> kept;
  for (Eigen::Index j = n - 1; j >= 0; --j) {
    if (eig.values(j) > tol::rank * scale) kept.push_back(j);
  }
  CMat y(n, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c) {
    const auto j = kept[c];
    y.col(static_cast<Eigen::Index>(c)) = eig.vectors.col(j) * std::sqrt(eig.values(j));
  }
  return y;
}

double min_eigenvalue(const CMat& herm) {
  if (herm.size() == 0) return 0.0;
  return herm_eig(herm).values(0);
}

bool is_psd(const CMat& herm, double rel_tol) {
  return min_eigenvalue(herm) >= -rel_tol * herm.norm();
}

std::vector<cplx> eigenvalues(const CMat& a) {
  require_square(a, "eigenvalues");
  Eigen::ComplexEigenSolver<CMat> solver(a, false);
  const auto& vals = solver.eigenvalues();
  return {vals.data(), vals.data() + vals.size()};
}

CMat expm(const CMat& a) {
  require_square(a, "expm");
  return a.exp();
}

double spectral_norm(const CMat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(a);
  return svd.singularValues()(0);
}

}  // namespace nhsense::cmatrix
