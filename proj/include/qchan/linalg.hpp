// Copyright 2026 The qchan Authors
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

/**
 * @file linalg.hpp
 * Dense complex and Hermitian linear algebra used by the channel code:
 * the vectorization isomorphism, Hermitian eigendecomposition with a
 * tolerance-aware rank, PSD square roots, range bases and the rank-one
 * subtraction margin A - eps uu^* >= 0.
 *
 * All routines are pure functions of their arguments.
 */

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <string>
#include <unsupported/Eigen/KroneckerProduct>
#include <vector>

#include "qchan/errors.hpp"

namespace qchan {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Numerical tolerances shared by every decision the library makes.
struct TolerancePolicy {
  double hermitian_tol = 1e-10;
  double psd_tol = 1e-9;
  /// Rank threshold is rank_rel_tol * dim * max|lambda|.
  double rank_rel_tol = 1e-10;
  /// Convergence target for the optimization-based searches.
  double search_tol = 1e-9;

  void check() const {
    if (!(hermitian_tol > 0 && psd_tol > 0 && rank_rel_tol > 0 &&
          search_tol > 0)) {
      throw InvalidArgument("tolerance policy entries must be positive");
    }
  }

  double rank_threshold(Index dim, double max_abs) const {
    return rank_rel_tol * static_cast<double>(std::max<Index>(dim, 1)) *
           max_abs;
  }
};

namespace detail {

inline bool all_finite(const CMatrix& a) {
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag()))
        return false;
  return true;
}

/// Shortest round-trip-ish rendering that always shows a decimal point,
/// so 2 prints as "2.0".
inline std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

inline std::string format_complex(Complex z) {
  if (z.imag() == 0.0) return format_real(z.real());
  return "(" + format_real(z.real()) + "," + format_real(z.imag()) + ")";
}

inline std::string dims(const CMatrix& a) {
  return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

}  // namespace detail

/// Hermitian matrix. Construction symmetrizes once via (H + H^*)/2; from then
/// on the value is treated as exactly Hermitian.
class HermMatrix {
 public:
  HermMatrix() = default;

  explicit HermMatrix(const CMatrix& h) {
    if (h.rows() != h.cols())
      throw ShapeError("Hermitian matrix must be square, got " +
                       detail::dims(h));
    if (!detail::all_finite(h))
      throw InvalidArgument("matrix has non-finite entries");
    value_ = (h + h.adjoint()) / 2.0;
  }

  /// Like the constructor, but rejects inputs whose anti-Hermitian part
  /// exceeds tol * max(1, max|h_ij|).
  static HermMatrix checked(const CMatrix& h, double tol) {
    if (h.rows() != h.cols())
      throw ShapeError("Hermitian matrix must be square, got " +
                       detail::dims(h));
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    const double asym = (h - h.adjoint()).cwiseAbs().maxCoeff();
    if (asym > tol * scale)
      throw InvalidArgument("matrix is not Hermitian (max |H - H^*| = " +
                            detail::format_real(asym) + ")");
    return HermMatrix(h);
  }

  static HermMatrix zero(Index dim) {
    return HermMatrix(CMatrix::Zero(dim, dim));
  }
  static HermMatrix identity(Index dim) {
    return HermMatrix(CMatrix::Identity(dim, dim));
  }

  Index dim() const { return value_.rows(); }
  const CMatrix& matrix() const { return value_; }
  Complex operator()(Index i, Index j) const { return value_(i, j); }

 private:
  CMatrix value_;
};

/// Spectral data of a Hermitian matrix.
struct EigenSummary {
  RVector eigenvalues;   // ascending
  CMatrix eigenvectors;  // columns, orthonormal
  int numeric_rank = 0;
  double min_eigenvalue = 0.0;
  double rank_threshold = 0.0;
  bool is_psd = false;

  double max_abs_eigenvalue() const {
    return eigenvalues.size() == 0 ? 0.0 : eigenvalues.cwiseAbs().maxCoeff();
  }
};

// ---------------------------------------------------------------------------
// Vectorization isomorphism C^{mn} <-> C^{n x m}: the vector is split into m
// consecutive length-n segments which become the columns of the matrix.
// ---------------------------------------------------------------------------

inline CMatrix vec_to_matrix(const CVector& z, Index m, Index n) {
  if (m <= 0 || n <= 0 || z.size() != m * n)
    throw ShapeError("vector of length " + std::to_string(z.size()) +
                     " cannot be reshaped to " + std::to_string(n) + "x" +
                     std::to_string(m));
  return Eigen::Map<const CMatrix>(z.data(), n, m);
}

inline CVector matrix_to_vec(const CMatrix& a) {
  if (a.size() == 0) throw ShapeError("cannot vectorize an empty matrix");
  return Eigen::Map<const CVector>(a.data(), a.size());
}

inline CVector matrix_to_vec(const CMatrix& a, Index m, Index n) {
  if (a.rows() != n || a.cols() != m)
    throw ShapeError("expected " + std::to_string(n) + "x" +
                     std::to_string(m) + " matrix, got " + detail::dims(a));
  return matrix_to_vec(a);
}

// ---------------------------------------------------------------------------

inline EigenSummary hermitian_eig(const HermMatrix& h,
                                  const TolerancePolicy& tol = {}) {
  EigenSummary out;
  if (h.dim() == 0) {
    out.eigenvalues = RVector(0);
    out.eigenvectors = CMatrix(0, 0);
    out.is_psd = true;
    return out;
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.matrix());
  if (solver.info() != Eigen::Success)
    throw NumericalFailure("Hermitian eigensolver did not converge");
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors();
  out.min_eigenvalue = out.eigenvalues(0);
  out.rank_threshold = tol.rank_threshold(h.dim(), out.max_abs_eigenvalue());
  out.numeric_rank = static_cast<int>(
      (out.eigenvalues.array().abs() > out.rank_threshold).count());
  out.is_psd = out.min_eigenvalue >= -tol.psd_tol;
  return out;
}

/// Positive square root of a PSD matrix, or of its inverse.
inline HermMatrix psd_sqrt(const HermMatrix& h, bool inverse,
                           const TolerancePolicy& tol = {}) {
  const EigenSummary es = hermitian_eig(h, tol);
  if (!es.is_psd)
    throw NotPsdError("matrix has eigenvalue " +
                      detail::format_real(es.min_eigenvalue) + " < 0");
  if (inverse && (h.dim() == 0 || es.min_eigenvalue <= es.rank_threshold))
    throw SingularityError("inverse square root of a singular matrix");
  RVector d = es.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  if (inverse) d = d.cwiseInverse();
  return HermMatrix(es.eigenvectors * d.asDiagonal() *
                    es.eigenvectors.adjoint());
}

/// Orthonormal basis of range(H), ordered by decreasing |eigenvalue|.
inline CMatrix range_basis(const HermMatrix& h,
                           const TolerancePolicy& tol = {}) {
  const EigenSummary es = hermitian_eig(h, tol);
  CMatrix basis(h.dim(), es.numeric_rank);
  std::vector<Index> order(static_cast<size_t>(h.dim()));
  for (Index i = 0; i < h.dim(); ++i) order[static_cast<size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return std::abs(es.eigenvalues(a)) > std::abs(es.eigenvalues(b));
  });
  for (int c = 0; c < es.numeric_rank; ++c)
    basis.col(c) = es.eigenvectors.col(order[static_cast<size_t>(c)]);
  return basis;
}

struct RankOneMargin {
  bool in_range = false;
  double eps_max = 0.0;
};

/// For PSD A and u != 0: whether u lies in range(A) and, if so, the largest
/// eps with A - eps uu^* still PSD, eps_max = 1 / (u^* A^+ u).
inline RankOneMargin rank_one_margin(const HermMatrix& a, const CVector& u,
                                     const TolerancePolicy& tol = {}) {
  if (u.size() != a.dim())
    throw ShapeError("vector length does not match matrix order");
  const double unorm = u.norm();
  if (unorm == 0.0) throw InvalidArgument("rank_one_margin: u must be nonzero");
  const EigenSummary es = hermitian_eig(a, tol);
  if (!es.is_psd)
    throw NotPsdError("rank_one_margin: matrix is not PSD (min eigenvalue " +
                      detail::format_real(es.min_eigenvalue) + ")");
  CVector proj = CVector::Zero(u.size());
  double quad = 0.0;
  for (Index i = 0; i < a.dim(); ++i) {
    const double lam = es.eigenvalues(i);
    if (lam <= es.rank_threshold) continue;
    const Complex c = es.eigenvectors.col(i).dot(u);
    proj += c * es.eigenvectors.col(i);
    quad += std::norm(c) / lam;
  }
  RankOneMargin out;
  out.in_range = (u - proj).norm() <= tol.search_tol * unorm;
  if (out.in_range) out.eps_max = 1.0 / quad;
  return out;
}

// ---------------------------------------------------------------------------
// Small helpers shared across modules.
// ---------------------------------------------------------------------------

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

/// ||a - b||_F / max(1, ||b||_F)
inline double relative_residual(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError("residual of mismatched shapes " + detail::dims(a) +
                     " and " + detail::dims(b));
  return (a - b).norm() / std::max(1.0, b.norm());
}

/// Numeric rank of a general matrix from its singular values.
inline int numeric_rank(const CMatrix& a, double rel_tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  const RVector s = svd.singularValues();
  const double thr =
      rel_tol * static_cast<double>(std::max(a.rows(), a.cols())) * s(0);
  return static_cast<int>((s.array() > thr).count());
}

/// Unitary whose first column is the unit vector x (Householder completion).
inline CMatrix unitary_with_first_column(const CVector& x) {
  const Index d = x.size();
  if (d == 0) throw ShapeError("empty vector");
  const double nx = x.norm();
  if (nx == 0.0) throw InvalidArgument("cannot complete a zero vector");
  const CVector u = x / nx;
  CMatrix seed = CMatrix::Identity(d, d);
  seed.col(0) = u;
  Eigen::HouseholderQR<CMatrix> qr(seed);
  CMatrix q = qr.householderQ() * CMatrix::Identity(d, d);
  // Householder Q reproduces x only up to a phase.
  const Complex ph = q.col(0).dot(u);
  q.col(0) *= ph / std::abs(ph);
  return q;
}

}  // namespace qchan
