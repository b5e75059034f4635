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
 * @file channel.hpp
 * Quantum channels C^{m x m} -> C^{n x n} held in both Kraus and Choi form.
 *
 * The Choi matrix Z is the mn x mn matrix of m x m blocks Z_ij = L(e_i e_j^T),
 * each block n x n, with flat index i*n + p (0-based) for block row i and
 * in-block row p. The Choi matrix is the source of truth; Kraus operators are
 * always re-derived from its spectral decomposition, so they come out
 * trace-orthogonal and in a fixed gauge.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "qchan/linalg.hpp"

namespace qchan {

/// Block trace tolerance for the trace-preservation test.
inline constexpr double kTraceTol = 1e-8;
/// Default tolerance within which inexact input is re-projected onto the
/// channel set instead of rejected.
inline constexpr double kDefaultRepairTol = 1e-4;

class Channel;
class ChoiMatrix;

/// Ordered Kraus operators A_i in C^{n x m}.
class KrausSet {
 public:
  /// Validates shapes, nonzero operators and sum A_i^* A_i = I_m within
  /// tp_tol (relative Frobenius).
  static KrausSet from_operators(int m, int n, std::vector<CMatrix> ops,
                                 double tp_tol = 1e-10) {
    check_shapes(m, n, ops);
    const double res = tp_residual(m, ops);
    if (res > tp_tol)
      throw NotTracePreserving("Kraus operators violate sum A^*A = I (residual " +
                               detail::format_real(res) + ")");
    return KrausSet(m, n, std::move(ops));
  }

  int m() const { return m_; }
  int n() const { return n_; }
  std::size_t size() const { return ops_.size(); }
  const std::vector<CMatrix>& operators() const { return ops_; }
  const CMatrix& operator[](std::size_t i) const { return ops_[i]; }

  /// ||sum A_i^* A_i - I||_F / sqrt(m)
  static double tp_residual(int m, const std::vector<CMatrix>& ops) {
    CMatrix t = CMatrix::Zero(m, m);
    for (const auto& a : ops) t += a.adjoint() * a;
    return (t - CMatrix::Identity(m, m)).norm() / std::sqrt(double(m));
  }

  static void check_shapes(int m, int n, const std::vector<CMatrix>& ops) {
    if (m < 1 || n < 1) throw ShapeError("channel dimensions must be positive");
    if (ops.empty()) throw InvalidArgument("empty Kraus set");
    for (std::size_t i = 0; i < ops.size(); ++i) {
      if (ops[i].rows() != n || ops[i].cols() != m)
        throw ShapeError("Kraus operator " + std::to_string(i + 1) + " is " +
                         detail::dims(ops[i]) + ", expected " +
                         std::to_string(n) + "x" + std::to_string(m));
      if (!detail::all_finite(ops[i]))
        throw InvalidArgument("Kraus operator " + std::to_string(i + 1) +
                              " has non-finite entries");
      if (ops[i].norm() == 0.0)
        throw InvalidArgument("Kraus operator " + std::to_string(i + 1) +
                              " is zero");
    }
  }

 private:
  friend class Channel;
  friend KrausSet kraus_from_choi(const ChoiMatrix&,
                                  const TolerancePolicy&);
  KrausSet(int m, int n, std::vector<CMatrix> ops)
      : m_(m), n_(n), ops_(std::move(ops)) {}

  int m_ = 0;
  int n_ = 0;
  std::vector<CMatrix> ops_;
};

/// Choi matrix of a channel: PSD with tr Z_ij = delta_ij.
class ChoiMatrix {
 public:
  /// Validates PSD (psd_tol) and block traces (kTraceTol).
  static ChoiMatrix from_matrix(const HermMatrix& z, int m, int n,
                                const TolerancePolicy& tol = {});

  int m() const { return m_; }
  int n() const { return n_; }
  const HermMatrix& hermitian() const { return z_; }
  const CMatrix& matrix() const { return z_.matrix(); }

  /// Block Z_ij, 0-based.
  CMatrix block(int i, int j) const {
    return z_.matrix().block(Index(i) * n_, Index(j) * n_, n_, n_);
  }

 private:
  friend class Channel;
  friend ChoiMatrix choi_from_kraus(const KrausSet&);
  ChoiMatrix(HermMatrix z, int m, int n) : m_(m), n_(n), z_(std::move(z)) {}

  int m_ = 0;
  int n_ = 0;
  HermMatrix z_;
};

struct ChannelReport {
  bool is_cp = false;
  bool is_tp = false;
  bool is_unital = false;
  int choi_rank = 0;
  double min_choi_eigenvalue = 0.0;
  double block_trace_residual = 0.0;
  double unital_residual = 0.0;
  /// First violated constraint in the order PSD, block trace; empty if none.
  std::string diagnostic;
};

// ---------------------------------------------------------------------------
// Raw Choi/Kraus conversions (also used for CP maps that are not channels).
// ---------------------------------------------------------------------------

/// Z = sum_i vec(A_i) vec(A_i)^*.
inline CMatrix choi_of_operators(const std::vector<CMatrix>& ops) {
  if (ops.empty()) throw InvalidArgument("empty operator list");
  const Index rows = ops.front().rows(), cols = ops.front().cols();
  CMatrix k(rows * cols, static_cast<Index>(ops.size()));
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (ops[i].rows() != rows || ops[i].cols() != cols)
      throw ShapeError("operators of mixed shapes");
    k.col(static_cast<Index>(i)) = matrix_to_vec(ops[i]);
  }
  return k * k.adjoint();
}

/// tr Z_ij for every block pair.
inline CMatrix block_traces(const CMatrix& z, int m, int n) {
  CMatrix t(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      t(i, j) = z.block(Index(i) * n, Index(j) * n, n, n).trace();
  return t;
}

/// sum_i Z_ii, which equals L(I_m).
inline CMatrix diagonal_block_sum(const CMatrix& z, int m, int n) {
  CMatrix s = CMatrix::Zero(n, n);
  for (int i = 0; i < m; ++i) s += z.block(Index(i) * n, Index(i) * n, n, n);
  return s;
}

namespace detail {

/// Kraus operators sqrt(lambda_i) phi(u_i) of a PSD Choi matrix, ordered by
/// decreasing eigenvalue (ties: lexicographic on the gauge-fixed entries),
/// each rotated so that its first largest-modulus entry is real positive.
inline std::vector<CMatrix> kraus_from_spectrum(const EigenSummary& es, int m,
                                                int n) {
  struct Item {
    double lambda;
    CMatrix op;
  };
  std::vector<Item> items;
  for (Index i = es.eigenvalues.size() - 1; i >= 0; --i) {
    const double lam = es.eigenvalues(i);
    if (lam <= es.rank_threshold) continue;
    CMatrix a = vec_to_matrix(es.eigenvectors.col(i), m, n) * std::sqrt(lam);
    const double amax = a.cwiseAbs().maxCoeff();
    for (Index k = 0; k < a.size(); ++k) {
      const Complex v = a.data()[k];
      if (std::abs(v) >= amax * (1.0 - 1e-9)) {
        a *= std::conj(v) / std::abs(v);
        break;
      }
    }
    items.push_back({lam, std::move(a)});
  }
  // Items arrive in decreasing eigenvalue order; reorder runs of equal
  // eigenvalues lexicographically.
  const auto lex_greater = [](const Item& x, const Item& y) {
    for (Index k = 0; k < x.op.size(); ++k) {
      const Complex a = x.op.data()[k], b = y.op.data()[k];
      if (a.real() != b.real()) return a.real() > b.real();
      if (a.imag() != b.imag()) return a.imag() > b.imag();
    }
    return false;
  };
  for (std::size_t lo = 0; lo < items.size();) {
    std::size_t hi = lo + 1;
    while (hi < items.size() &&
           items[lo].lambda - items[hi].lambda <= es.rank_threshold)
      ++hi;
    std::stable_sort(items.begin() + static_cast<std::ptrdiff_t>(lo),
                     items.begin() + static_cast<std::ptrdiff_t>(hi),
                     lex_greater);
    lo = hi;
  }
  std::vector<CMatrix> ops;
  ops.reserve(items.size());
  for (auto& it : items) ops.push_back(std::move(it.op));
  return ops;
}

inline std::string block_trace_violation(const CMatrix& traces, double tol) {
  const int m = static_cast<int>(traces.rows());
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const Complex expected = i == j ? 1.0 : 0.0;
      if (std::abs(traces(i, j) - expected) > tol)
        return "block trace (" + std::to_string(i + 1) + "," +
               std::to_string(j + 1) + ") = " +
               format_complex(traces(i, j)) + ", expected " +
               (i == j ? "1" : "0");
    }
  return {};
}

}  // namespace detail

/// CP / TP / unitality report for a candidate Choi matrix. Never throws on
/// channel violations; the report carries them.
inline ChannelReport validate(const HermMatrix& z, int m, int n,
                              const TolerancePolicy& tol = {}) {
  if (m < 1 || n < 1 || z.dim() != Index(m) * n)
    throw ShapeError("Choi matrix of order " + std::to_string(z.dim()) +
                     " does not match m*n = " + std::to_string(m * n));
  ChannelReport r;
  const EigenSummary es = hermitian_eig(z, tol);
  r.is_cp = es.is_psd;
  r.min_choi_eigenvalue = es.min_eigenvalue;
  r.choi_rank = es.numeric_rank;
  const CMatrix traces = block_traces(z.matrix(), m, n);
  r.block_trace_residual =
      (traces - CMatrix::Identity(m, m)).cwiseAbs().maxCoeff();
  r.is_tp = r.block_trace_residual <= kTraceTol;
  r.unital_residual =
      (diagonal_block_sum(z.matrix(), m, n) - CMatrix::Identity(n, n))
          .cwiseAbs()
          .maxCoeff();
  r.is_unital = r.unital_residual <= kTraceTol;
  if (!r.is_cp)
    r.diagnostic = "Choi matrix is not PSD (min eigenvalue " +
                   detail::format_real(es.min_eigenvalue) + ")";
  else if (!r.is_tp)
    r.diagnostic = detail::block_trace_violation(traces, kTraceTol);
  return r;
}

inline ChoiMatrix ChoiMatrix::from_matrix(const HermMatrix& z, int m, int n,
                                          const TolerancePolicy& tol) {
  const ChannelReport r = validate(z, m, n, tol);
  if (!r.is_cp) throw NotAChannel(r.diagnostic);
  if (!r.is_tp) throw NotTracePreserving(r.diagnostic);
  return ChoiMatrix(z, m, n);
}

inline ChoiMatrix choi_from_kraus(const KrausSet& k) {
  return ChoiMatrix(HermMatrix(choi_of_operators(k.operators())), k.m(),
                    k.n());
}

inline KrausSet kraus_from_choi(const ChoiMatrix& c,
                                const TolerancePolicy& tol = {}) {
  const EigenSummary es = hermitian_eig(c.hermitian(), tol);
  if (!es.is_psd)
    throw NotAChannel("Choi matrix is not PSD (min eigenvalue " +
                      detail::format_real(es.min_eigenvalue) + ")");
  const std::string bad = detail::block_trace_violation(
      block_traces(c.matrix(), c.m(), c.n()), kTraceTol);
  if (!bad.empty()) throw NotTracePreserving(bad);
  return KrausSet(c.m(), c.n(), detail::kraus_from_spectrum(es, c.m(), c.n()));
}

/// Dual map Y -> sum_i A_i^* Y A_i. Completely positive; unital exactly when
/// the primal map is trace preserving.
struct AdjointMap {
  int m = 0;  // output dimension of the dual (input of the channel)
  int n = 0;
  std::vector<CMatrix> operators;  // A_i^*, each m x n

  CMatrix apply(const CMatrix& y) const {
    if (y.rows() != n || y.cols() != n)
      throw ShapeError("adjoint input must be " + std::to_string(n) + "x" +
                       std::to_string(n));
    CMatrix out = CMatrix::Zero(m, m);
    for (const auto& b : operators) out += b * y * b.adjoint();
    return out;
  }

  double unital_residual() const {
    return (apply(CMatrix::Identity(n, n)) - CMatrix::Identity(m, m)).norm();
  }
};

/// A completely positive trace preserving map with consistent Kraus and Choi
/// representations. Immutable after construction.
class Channel {
 public:
  /// Builds a channel from a Choi matrix (flat index i*n + p). Inputs that
  /// are CP/TP only within repair_tol are re-projected and a warning is
  /// recorded; worse inputs throw NotAChannel / NotTracePreserving.
  static Channel from_choi(const CMatrix& z, int m, int n,
                           const TolerancePolicy& tol = {},
                           double repair_tol = kDefaultRepairTol) {
    tol.check();
    if (m < 1 || n < 1) throw ShapeError("channel dimensions must be positive");
    if (z.rows() != Index(m) * n || z.cols() != Index(m) * n)
      throw ShapeError("Choi matrix is " + detail::dims(z) + ", expected " +
                       std::to_string(m * n) + "x" + std::to_string(m * n));
    if (!detail::all_finite(z))
      throw InvalidArgument("Choi matrix has non-finite entries");
    const double scale = std::max(1.0, z.cwiseAbs().maxCoeff());
    const double asym = (z - z.adjoint()).cwiseAbs().maxCoeff();
    if (asym > repair_tol * scale)
      throw NotAChannel("Choi matrix is not Hermitian (max |Z - Z^*| = " +
                        detail::format_real(asym) + ")");

    Channel ch;
    ch.m_ = m;
    ch.n_ = n;
    ch.tol_ = tol;
    if (asym > tol.hermitian_tol * scale)
      ch.warn("Choi matrix symmetrized (max |Z - Z^*| = " +
              detail::format_real(asym) + ")");
    HermMatrix h(z);

    EigenSummary es = hermitian_eig(h, tol);
    if (es.min_eigenvalue < -es.rank_threshold) {
      if (es.min_eigenvalue < -repair_tol * std::max(1.0, es.max_abs_eigenvalue()))
        throw NotAChannel("Choi matrix is not PSD (min eigenvalue " +
                          detail::format_real(es.min_eigenvalue) + ")");
      if (!es.is_psd)
        ch.warn("negative Choi eigenvalue " +
                detail::format_real(es.min_eigenvalue) + " clamped to 0");
      const RVector lam = es.eigenvalues.cwiseMax(0.0);
      h = HermMatrix(es.eigenvectors * lam.asDiagonal() *
                     es.eigenvectors.adjoint());
      ch.reprojected_ = true;
      es = hermitian_eig(h, tol);
    }

    const CMatrix traces = block_traces(h.matrix(), m, n);
    const double tres = (traces - CMatrix::Identity(m, m)).cwiseAbs().maxCoeff();
    if (tres > repair_tol)
      throw NotTracePreserving(detail::block_trace_violation(traces, kTraceTol));
    if (tres > 1e-12) {
      // Normalize A_i -> A_i T^{-1/2}, T = sum A_i^* A_i.
      std::vector<CMatrix> ops = detail::kraus_from_spectrum(es, m, n);
      CMatrix t = CMatrix::Zero(m, m);
      for (const auto& a : ops) t += a.adjoint() * a;
      const CMatrix fix = psd_sqrt(HermMatrix(t), true, tol).matrix();
      for (auto& a : ops) a = a * fix;
      if (tres > kTraceTol)
        ch.warn("block traces re-normalized (max residual " +
                detail::format_real(tres) + ")");
      ch.reprojected_ = true;
      h = HermMatrix(choi_of_operators(ops));
      es = hermitian_eig(h, tol);
    }

    ch.choi_ = ChoiMatrix(h, m, n);
    ch.kraus_ = KrausSet(m, n, detail::kraus_from_spectrum(es, m, n));
    ch.choi_rank_ = es.numeric_rank;
    ch.eig_ = std::move(es);
    return ch;
  }

  static Channel from_kraus(const std::vector<CMatrix>& ops,
                            const TolerancePolicy& tol = {},
                            double repair_tol = kDefaultRepairTol) {
    if (ops.empty()) throw InvalidArgument("empty Kraus set");
    const int n = static_cast<int>(ops.front().rows());
    const int m = static_cast<int>(ops.front().cols());
    KrausSet::check_shapes(m, n, ops);
    return from_choi(choi_of_operators(ops), m, n, tol, repair_tol);
  }

  int m() const { return m_; }
  int n() const { return n_; }
  const KrausSet& kraus() const { return kraus_; }
  const ChoiMatrix& choi() const { return choi_; }
  int choi_rank() const { return choi_rank_; }
  const EigenSummary& choi_eigen() const { return eig_; }
  const TolerancePolicy& tol() const { return tol_; }
  bool reprojected() const { return reprojected_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  CMatrix apply(const CMatrix& x) const {
    if (x.rows() != m_ || x.cols() != m_)
      throw ShapeError("channel input must be " + std::to_string(m_) + "x" +
                       std::to_string(m_) + ", got " + detail::dims(x));
    CMatrix out = CMatrix::Zero(n_, n_);
    for (const auto& a : kraus_.operators()) out += a * x * a.adjoint();
    return out;
  }

 private:
  Channel() : kraus_(0, 0, {}), choi_(HermMatrix(), 0, 0) {}
  void warn(std::string w) { warnings_.push_back(std::move(w)); }

  int m_ = 0;
  int n_ = 0;
  KrausSet kraus_;
  ChoiMatrix choi_;
  int choi_rank_ = 0;
  EigenSummary eig_;
  TolerancePolicy tol_;
  bool reprojected_ = false;
  std::vector<std::string> warnings_;
};

inline CMatrix apply(const Channel& l, const CMatrix& x) { return l.apply(x); }

inline AdjointMap adjoint(const Channel& l) {
  AdjointMap a;
  a.m = l.m();
  a.n = l.n();
  for (const auto& op : l.kraus().operators()) a.operators.push_back(op.adjoint());
  return a;
}

/// X -> V L(U X U^*) V^* for unitaries U (m x m) and V (n x n).
inline Channel conjugate(const Channel& l, const CMatrix& u, const CMatrix& v) {
  if (u.rows() != l.m() || u.cols() != l.m() || v.rows() != l.n() ||
      v.cols() != l.n())
    throw ShapeError("conjugating unitaries do not match channel dimensions");
  std::vector<CMatrix> ops;
  for (const auto& a : l.kraus().operators()) ops.push_back(v * a * u);
  return Channel::from_kraus(ops, l.tol());
}

/// L1 (x) L2 with Kraus operators A_i (x) B_j. max_choi_order caps
/// m1*m2*n1*n2.
inline Channel tensor(const Channel& l1, const Channel& l2,
                      Index max_choi_order = 256) {
  const Index order = Index(l1.m()) * l2.m() * l1.n() * l2.n();
  if (order > max_choi_order)
    throw InvalidArgument("tensor product Choi order " + std::to_string(order) +
                          " exceeds limit " + std::to_string(max_choi_order));
  std::vector<CMatrix> ops;
  for (const auto& a : l1.kraus().operators())
    for (const auto& b : l2.kraus().operators()) ops.push_back(kron(a, b));
  return Channel::from_kraus(ops, l1.tol());
}

/// Channel on C^{(p+q) x (p+q)} acting as L1 on the leading p x p block and
/// L2 on the trailing q x q block; off-diagonal blocks are annihilated.
inline Channel direct_sum(const Channel& l1, const Channel& l2) {
  if (l1.n() != l2.n())
    throw ShapeError("direct sum needs equal output dimensions (" +
                     std::to_string(l1.n()) + " vs " + std::to_string(l2.n()) +
                     ")");
  const int p = l1.m(), q = l2.m(), n = l1.n();
  CMatrix z = CMatrix::Zero(Index(p + q) * n, Index(p + q) * n);
  z.topLeftCorner(Index(p) * n, Index(p) * n) = l1.choi().matrix();
  z.bottomRightCorner(Index(q) * n, Index(q) * n) = l2.choi().matrix();
  return Channel::from_choi(z, p + q, n, l1.tol());
}

}  // namespace qchan
