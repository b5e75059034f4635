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
 * @file extremality.hpp
 * Extreme points of the channel set.
 *
 * Two independent decision routes are provided:
 *
 *  - nullspace_functional_test works on the Choi matrix alone. With P an
 *    orthonormal basis of range(Z) and k = rank Z, the perturbations that
 *    keep the kernel of Z are U = P H P^* for Hermitian k x k H. The channel
 *    is extreme iff no such nonzero U has all block traces zero, i.e. iff the
 *    m^2 real functionals (tr U_ii, Re tr U_ij, Im tr U_ij) have trivial
 *    common kernel on that k^2-dimensional space.
 *
 *  - choi_independence_test works on the Kraus operators: the channel is
 *    extreme iff the k^2 products A_i^* A_j are linearly independent.
 *
 * A non-extreme channel is split along a kernel element W into two channels
 * Z + t1 W and Z - t2 W of strictly smaller Choi rank.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qchan/channel.hpp"

namespace qchan {

/// Smallest feasible Choi rank, ceil(m / min(m, n)).
inline int min_choi_rank(int m, int n) {
  if (m < 1 || n < 1) throw InvalidArgument("dimensions must be positive");
  const int d = std::min(m, n);
  return (m + d - 1) / d;
}

struct IndependenceResult {
  bool independent = false;
  /// Smallest singular value of the m^2 x k^2 matrix of vec(A_i^* A_j),
  /// relative to the largest.
  double gram_min_singular = 0.0;
  bool near_threshold = false;
};

/// The m^2 functionals evaluated on a real basis of {P H P^*}.
struct FunctionalMatrix {
  RMatrix values;  // m^2 x k^2
  int m = 0;
  int n = 0;
  int k = 0;
  CMatrix range;  // mn x k, orthonormal basis of range(Z)
};

struct NullspaceResult {
  bool extreme = false;
  FunctionalMatrix functional_matrix;
  RVector singular_values;  // descending
  int kernel_dim = 0;
  bool near_threshold = false;
  /// Unit-Frobenius kernel element mapped back to Hermitian mn x mn form.
  std::optional<HermMatrix> witness;
};

struct ConvexSplit {
  Channel first;   // Z + step_plus * W
  Channel second;  // Z - step_minus * W
  double weight = 0.0;  // L = weight * first + (1 - weight) * second
  double step_plus = 0.0;
  double step_minus = 0.0;
  double residual = 0.0;
};

struct ExtremalityVerdict {
  bool extreme = false;
  bool method_agreement = true;
  bool rank_exceeds_m = false;
  bool conditioning_flag = false;
  int choi_rank = 0;
  std::optional<HermMatrix> witness;
  std::optional<ConvexSplit> split;
  IndependenceResult independence;
  NullspaceResult nullspace;
};

namespace detail {

/// Relative decision threshold for the rank of an r x c matrix of
/// singular values s (descending).
inline double decision_threshold(const RVector& s, Index rows, Index cols,
                                 const TolerancePolicy& tol) {
  const double smax = s.size() ? s(0) : 0.0;
  return tol.rank_rel_tol * double(std::max(rows, cols)) * smax;
}

inline bool near(double value, double threshold) {
  return value > threshold / 10.0 && value < threshold * 10.0;
}

/// Real orthonormal basis of Hermitian k x k matrices, index a*k + b:
/// E_aa on the diagonal, (E_ab + E_ba)/sqrt2 for a < b, i(E_ab - E_ba)/sqrt2
/// for a > b (with the pair taken as (b, a)).
inline CMatrix herm_basis_element(int k, int a, int b) {
  CMatrix h = CMatrix::Zero(k, k);
  const double r = 1.0 / std::sqrt(2.0);
  if (a == b) {
    h(a, a) = 1.0;
  } else if (a < b) {
    h(a, b) = r;
    h(b, a) = r;
  } else {
    h(b, a) = Complex(0.0, r);
    h(a, b) = Complex(0.0, -r);
  }
  return h;
}

/// The m^2 functionals (tr U_ii; Re tr U_ij, Im tr U_ij for i < j).
inline RVector block_functionals(const CMatrix& u, int m, int n) {
  const CMatrix t = block_traces(u, m, n);
  RVector f(Index(m) * m);
  Index row = 0;
  for (int i = 0; i < m; ++i) {
    f(row++) = t(i, i).real();
    for (int j = i + 1; j < m; ++j) {
      f(row++) = t(i, j).real();
      f(row++) = t(i, j).imag();
    }
  }
  return f;
}

}  // namespace detail

inline IndependenceResult choi_independence_test(
    const KrausSet& kraus, const TolerancePolicy& tol = {}) {
  IndependenceResult out;
  const int m = kraus.m();
  const Index k = static_cast<Index>(kraus.size());
  if (k * k > Index(m) * m) return out;
  CMatrix g(Index(m) * m, k * k);
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j)
      g.col(i * k + j) = matrix_to_vec(
          CMatrix(kraus[std::size_t(i)].adjoint() * kraus[std::size_t(j)]));
  Eigen::JacobiSVD<CMatrix> svd(g);
  const RVector s = svd.singularValues();
  const double thr = detail::decision_threshold(s, g.rows(), g.cols(), tol);
  const double smin = s(s.size() - 1);
  out.independent = smin > thr;
  out.gram_min_singular = s(0) > 0 ? smin / s(0) : 0.0;
  out.near_threshold = detail::near(smin, thr);
  return out;
}

/// Trivial-intersection test on a CP map given by its Choi matrix. The
/// functionals only involve block traces, so the same routine serves any
/// affine slice defined by prescribed block traces.
inline NullspaceResult nullspace_functional_test(
    const HermMatrix& z, int m, int n, const TolerancePolicy& tol = {}) {
  if (z.dim() != Index(m) * n)
    throw ShapeError("Choi matrix order does not match m*n");
  NullspaceResult out;
  const CMatrix p = range_basis(z, tol);
  const int k = static_cast<int>(p.cols());
  FunctionalMatrix& fm = out.functional_matrix;
  fm.m = m;
  fm.n = n;
  fm.k = k;
  fm.range = p;
  fm.values = RMatrix(Index(m) * m, Index(k) * k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      const CMatrix u = p * detail::herm_basis_element(k, a, b) * p.adjoint();
      fm.values.col(Index(a) * k + b) = detail::block_functionals(u, m, n);
    }
  if (k == 0) {
    out.extreme = false;
    return out;
  }

  Eigen::JacobiSVD<RMatrix> svd(fm.values, Eigen::ComputeFullV);
  out.singular_values = svd.singularValues();
  const RVector& s = out.singular_values;
  const double thr =
      detail::decision_threshold(s, fm.values.rows(), fm.values.cols(), tol);
  const int rank = static_cast<int>((s.array() > thr).count());
  out.kernel_dim = k * k - rank;
  out.extreme = out.kernel_dim == 0;
  for (Index i = 0; i < s.size(); ++i)
    if (detail::near(s(i), thr)) out.near_threshold = true;

  if (out.kernel_dim > 0) {
    const RVector c = svd.matrixV().col(rank);
    CMatrix h = CMatrix::Zero(k, k);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        h += c(Index(a) * k + b) * detail::herm_basis_element(k, a, b);
    CMatrix w = p * h * p.adjoint();
    w /= w.norm();
    out.witness = HermMatrix(w);
  }
  return out;
}

inline NullspaceResult nullspace_functional_test(const Channel& l) {
  return nullspace_functional_test(l.choi().hermitian(), l.m(), l.n(),
                                   l.tol());
}

/// Matrix-level split of a PSD Z along a direction W supported on range(Z)
/// with zero block traces.
struct ChoiSplit {
  CMatrix plus;   // Z + step_plus W
  CMatrix minus;  // Z - step_minus W
  double weight = 0.0;
  double step_plus = 0.0;
  double step_minus = 0.0;
};

inline ChoiSplit split_choi(const HermMatrix& z, const HermMatrix& w, int m,
                            int n, const TolerancePolicy& tol = {}) {
  if (w.dim() != z.dim() || z.dim() != Index(m) * n)
    throw ShapeError("witness order does not match the Choi matrix");
  const double wn = w.matrix().norm();
  if (wn == 0.0) throw InvalidArgument("invalid witness: W = 0");
  const double tres = block_traces(w.matrix(), m, n).cwiseAbs().maxCoeff();
  if (tres > kTraceTol * std::max(1.0, wn))
    throw InvalidArgument("invalid witness: block trace of W is " +
                          detail::format_real(tres) + ", expected 0");
  const CMatrix p = range_basis(z, tol);
  const CMatrix off =
      w.matrix() - p * (p.adjoint() * w.matrix() * p) * p.adjoint();
  if (off.norm() > kTraceTol * wn)
    throw InvalidArgument(
        "invalid witness: W is not supported on the range of Z");

  const HermMatrix r(p.adjoint() * z.matrix() * p);
  const CMatrix rih = psd_sqrt(r, true, tol).matrix();
  const HermMatrix s(rih * (p.adjoint() * w.matrix() * p) * rih);
  const EigenSummary es = hermitian_eig(s, tol);
  const double lmin = es.eigenvalues(0);
  const double lmax = es.eigenvalues(es.eigenvalues.size() - 1);
  if (!(lmin < 0.0 && lmax > 0.0))
    throw NumericalFailure(
        "split direction is semidefinite on the range of Z; cannot split");
  ChoiSplit out;
  out.step_plus = 1.0 / std::abs(lmin);
  out.step_minus = 1.0 / lmax;
  out.plus = z.matrix() + out.step_plus * w.matrix();
  out.minus = z.matrix() - out.step_minus * w.matrix();
  out.weight = out.step_minus / (out.step_plus + out.step_minus);
  return out;
}

/// Writes L as weight * L1 + (1 - weight) * L2 along W, both parts of lower
/// Choi rank. W must be nonzero, Hermitian, with zero block traces and
/// supported on range Z(L).
inline ConvexSplit split(const Channel& l, const HermMatrix& w) {
  const ChoiSplit cs = split_choi(l.choi().hermitian(), w, l.m(), l.n(), l.tol());
  ConvexSplit out{Channel::from_choi(cs.plus, l.m(), l.n(), l.tol()),
                  Channel::from_choi(cs.minus, l.m(), l.n(), l.tol()),
                  cs.weight,
                  cs.step_plus,
                  cs.step_minus,
                  0.0};
  const CMatrix rebuilt = out.weight * out.first.choi().matrix() +
                          (1.0 - out.weight) * out.second.choi().matrix();
  out.residual = relative_residual(rebuilt, l.choi().matrix());
  return out;
}

inline ExtremalityVerdict is_extreme(const Channel& l) {
  ExtremalityVerdict v;
  const TolerancePolicy& tol = l.tol();
  v.choi_rank = l.choi_rank();
  v.nullspace = nullspace_functional_test(l);

  const EigenSummary& es = l.choi_eigen();
  for (Index i = 0; i < es.eigenvalues.size(); ++i)
    if (detail::near(std::abs(es.eigenvalues(i)), es.rank_threshold))
      v.conditioning_flag = true;

  if (v.choi_rank > l.m()) {
    v.rank_exceeds_m = true;
    v.extreme = false;
    v.method_agreement = true;
  } else {
    v.independence = choi_independence_test(l.kraus(), tol);
    v.extreme = v.nullspace.extreme;
    v.method_agreement = v.independence.independent == v.nullspace.extreme;
    if (v.independence.near_threshold || v.nullspace.near_threshold)
      v.conditioning_flag = true;
  }
  if (!v.method_agreement) v.conditioning_flag = true;

  if (!v.extreme && v.nullspace.witness) {
    v.witness = v.nullspace.witness;
    v.split = split(l, *v.witness);
  }
  return v;
}

struct DecomposableCheck {
  bool sufficient_nonextreme = false;
  /// Matching conditions: 1 (first summand non-extreme), 2 (second summand
  /// non-extreme), 3 (rank Z(L1) * rank Z(L2) > p q).
  std::vector<int> conditions;
  std::string reason;
};

/// Sufficient conditions for the direct sum L1 (+) L2 to be non-extreme.
/// A negative answer is not a claim of extremality.
inline DecomposableCheck decomposable_nonextreme_check(const Channel& l1,
                                                       const Channel& l2) {
  if (l1.n() != l2.n())
    throw ShapeError("direct sum needs equal output dimensions");
  DecomposableCheck out;
  std::vector<std::string> why;
  if (!is_extreme(l1).extreme) {
    out.conditions.push_back(1);
    why.push_back("first summand is not extreme");
  }
  if (!is_extreme(l2).extreme) {
    out.conditions.push_back(2);
    why.push_back("second summand is not extreme");
  }
  if (l1.choi_rank() * l2.choi_rank() > l1.m() * l2.m()) {
    out.conditions.push_back(3);
    why.push_back("rank product " +
                  std::to_string(l1.choi_rank() * l2.choi_rank()) + " > " +
                  std::to_string(l1.m() * l2.m()));
  }
  out.sufficient_nonextreme = !out.conditions.empty();
  for (std::size_t i = 0; i < why.size(); ++i)
    out.reason += (i ? "; " : "") + why[i];
  return out;
}

}  // namespace qchan
