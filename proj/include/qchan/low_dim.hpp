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
 * @file low_dim.hpp
 * Canonical forms and extremality for qubit-to-qubit and qutrit-to-qubit
 * channels.
 *
 * Both canonical forms start from a pure input x whose output is pure,
 * L(xx^*) = cc^*. With unitaries Uin (first column x) and Vout (first
 * column c) the rotated channel X -> Vout^* L(Uin X Uin^*) Vout maps e1 e1^T
 * to e1 e1^T, which forces zeros in the second row and column of its Choi
 * matrix. The stored U and V follow the convention
 * L~(X) = V^* L(U^* X U) V, i.e. U = Uin^* and V = Vout.
 *
 * Index conventions below are 0-based positions in the Choi matrix of the
 * rotated channel.
 */

#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qchan/extremality.hpp"
#include "qchan/image_rank.hpp"

namespace qchan {

/// Parameters treated as zero when smaller than this in modulus.
inline constexpr double kParamZeroTol = 1e-7;
/// Distance from |y| = 1 that still routes to the unit-modulus case.
inline constexpr double kUnitModulusTol = 1e-8;
/// Relative projection residual below which a vector counts as in a range.
inline constexpr double kRangeTol = 1e-7;

// ---------------------------------------------------------------------------
// Qubit to qubit.
// ---------------------------------------------------------------------------

struct CanonicalForm22 {
  CMatrix U;  // 2x2, input basis change
  CMatrix V;  // 2x2, output basis change
  Complex y;  // Z(0,3), rotated real >= 0
  double c = 0.0;  // Z(3,3)
  Complex s;  // Z(2,3)
  /// |(1 - c)(c - |y|^2) - |s|^2|
  double residual = 0.0;
  /// Largest deviation of the rotated Choi matrix from the canonical
  /// zero/one pattern.
  double pattern_residual = 0.0;
  CMatrix choi;  // Choi matrix of the rotated channel
  CVector input_state;   // x, original frame
  CVector output_state;  // c, original frame
};

enum class ImageClass22 { SinglePoint, Interval, TwoPureStrict, OnePure };

inline std::string to_string(ImageClass22 c) {
  switch (c) {
    case ImageClass22::SinglePoint: return "SinglePoint";
    case ImageClass22::Interval: return "Interval";
    case ImageClass22::TwoPureStrict: return "TwoPureStrict";
    case ImageClass22::OnePure: return "OnePure";
  }
  return "?";
}

struct ImageClassification22 {
  ImageClass22 image_class = ImageClass22::OnePure;
  /// Rank-one output states in the original output frame.
  std::vector<CMatrix> pure_outputs;
  /// Pure inputs (unit vectors, original frame) mapped onto pure_outputs.
  std::vector<CVector> pure_inputs;
  /// w' = s / (y (1 - c)) when the second pure output comes from a
  /// superposition.
  std::optional<Complex> second_state_parameter;
};

namespace detail {

inline CVector top_eigenvector(const CMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
  if (es.info() != Eigen::Success)
    throw NumericalFailure("Hermitian eigensolver did not converge");
  return es.eigenvectors().col(rho.rows() - 1);
}

/// X -> Vout^* L(Uin X Uin^*) Vout.
inline Channel rotate(const Channel& l, const CMatrix& uin, const CMatrix& vout) {
  return conjugate(l, uin, vout.adjoint());
}

/// Maps a Choi matrix given in the rotated frame back to a channel in the
/// original frame.
inline Channel unrotate(const CMatrix& z, int m, int n, const CMatrix& uin,
                        const CMatrix& vout, const TolerancePolicy& tol) {
  return conjugate(Channel::from_choi(z, m, n, tol), uin.adjoint(), vout);
}

inline void require_dims(const Channel& l, int m, int n, const char* what) {
  if (l.m() != m || l.n() != n)
    throw PreconditionError(std::string(what) + " needs a " +
                            std::to_string(m) + " -> " + std::to_string(n) +
                            " channel, got " + std::to_string(l.m()) + " -> " +
                            std::to_string(l.n()));
}

inline PureToPureResult pure_pair(const Channel& l, const SearchConfig& cfg) {
  const PureToPureResult r = find_pure_to_pure(l, cfg);
  if (!r.converged)
    throw NumericalFailure("no pure input with pure output found (sigma2 = " +
                           format_real(r.sigma2) + ")");
  return r;
}

}  // namespace detail

/// Canonical form from a given pure input x with pure output.
inline CanonicalForm22 canonical_form_22(const Channel& l, const CVector& x) {
  detail::require_dims(l, 2, 2, "canonical_form_22");
  if (l.choi_rank() != 2)
    throw PreconditionError("canonical_form_22 needs Choi rank 2, got " +
                            std::to_string(l.choi_rank()));
  const CVector xin = x / x.norm();
  const CVector cout = detail::top_eigenvector(l.apply(xin * xin.adjoint()));
  CMatrix uin = unitary_with_first_column(xin);
  const CMatrix vout = unitary_with_first_column(cout);
  CMatrix z = detail::rotate(l, uin, vout).choi().matrix();
  if (std::abs(z(0, 3)) > 0.0) {
    uin.col(1) *= z(0, 3) / std::abs(z(0, 3));
    z = detail::rotate(l, uin, vout).choi().matrix();
  }
  CanonicalForm22 f;
  f.U = uin.adjoint();
  f.V = vout;
  f.y = z(0, 3);
  f.c = z(3, 3).real();
  f.s = z(2, 3);
  f.residual =
      std::abs((1.0 - f.c) * (f.c - std::norm(f.y)) - std::norm(f.s));
  double pat = std::abs(z(0, 0) - 1.0) + std::abs(z(0, 2)) +
               std::abs(z(2, 2) - (1.0 - f.c));
  for (Index j = 0; j < 4; ++j) pat = std::max(pat, std::abs(z(1, j)));
  f.pattern_residual = pat;
  f.choi = z;
  f.input_state = xin;
  f.output_state = cout;
  return f;
}

inline CanonicalForm22 canonical_form_22(const Channel& l,
                                         const SearchConfig& cfg = {}) {
  detail::require_dims(l, 2, 2, "canonical_form_22");
  if (l.choi_rank() != 2)
    throw PreconditionError("canonical_form_22 needs Choi rank 2, got " +
                            std::to_string(l.choi_rank()));
  return canonical_form_22(l, detail::pure_pair(l, cfg).x);
}

inline ImageClassification22 classify_image_22(const CanonicalForm22& f) {
  ImageClassification22 out;
  const CMatrix uin = f.U.adjoint();
  auto record = [&](const CVector& in_rot) {
    const CVector in = uin * in_rot;
    // The rotated channel maps in_rot to a pure state; report it in the
    // original output frame.
    const CMatrix blk_in = in_rot * in_rot.adjoint();
    CMatrix rot_out = CMatrix::Zero(2, 2);
    for (Index i = 0; i < 2; ++i)
      for (Index j = 0; j < 2; ++j)
        rot_out += blk_in(i, j) * f.choi.block(i * 2, j * 2, 2, 2);
    out.pure_inputs.push_back(in);
    out.pure_outputs.push_back(f.V * rot_out * f.V.adjoint());
  };
  CVector e1(2), e2(2);
  e1 << 1, 0;
  e2 << 0, 1;
  record(e1);

  const bool y_zero = std::abs(f.y) <= kParamZeroTol;
  const bool c_one = std::abs(1.0 - f.c) <= kParamZeroTol;
  const bool s_zero = std::abs(f.s) <= kParamZeroTol;
  if (y_zero) {
    // L~(e2 e2^T) = [[1-c, s], [s^*, c]] is rank one.
    const bool same = std::abs(f.c) <= kParamZeroTol && s_zero;
    out.image_class = same ? ImageClass22::SinglePoint : ImageClass22::Interval;
    if (!same) record(e2);
  } else if (c_one) {
    out.image_class = ImageClass22::TwoPureStrict;
    record(e2);
  } else if (s_zero) {
    out.image_class = ImageClass22::OnePure;
  } else {
    out.image_class = ImageClass22::TwoPureStrict;
    const Complex wp = f.s / (f.y * (1.0 - f.c));
    out.second_state_parameter = wp;
    CVector b(2);
    b << 1.0, std::conj(wp);
    record(b / b.norm());
  }
  return out;
}

/// Extremality in the qubit case with the non-unital consistency check.
inline ExtremalityVerdict is_extreme_22(const Channel& l) {
  detail::require_dims(l, 2, 2, "is_extreme_22");
  ExtremalityVerdict v = is_extreme(l);
  if (l.choi_rank() == 1 && !v.extreme)
    throw NumericalFailure("rank-one qubit channel reported non-extreme");
  if (l.choi_rank() > 2 && v.extreme)
    throw NumericalFailure("qubit channel of Choi rank > 2 reported extreme");
  if (l.choi_rank() == 2 && !v.extreme && !v.conditioning_flag) {
    const ChannelReport rep = validate(l.choi().hermitian(), 2, 2, l.tol());
    if (!rep.is_unital)
      throw NumericalFailure(
          "non-unital rank-2 qubit channel reported non-extreme");
  }
  return v;
}

// ---------------------------------------------------------------------------
// The family M_t: CP maps on 2x2 matrices with block traces (1, t, 0).
// ---------------------------------------------------------------------------

struct MtVerdict {
  bool extreme = false;
  int rank = 0;
  std::optional<HermMatrix> witness;
  std::optional<ChoiSplit> split;
};

inline MtVerdict is_extreme_mt(const HermMatrix& z, double t,
                               const TolerancePolicy& tol = {}) {
  if (z.dim() != 4) throw ShapeError("M_t members have 4x4 Choi matrices");
  if (!(t > 0.0 && t <= 1.0)) throw InvalidArgument("t must lie in (0, 1]");
  const EigenSummary es = hermitian_eig(z, tol);
  if (!es.is_psd)
    throw InvalidArgument("not completely positive (min eigenvalue " +
                          detail::format_real(es.min_eigenvalue) + ")");
  const CMatrix tr = block_traces(z.matrix(), 2, 2);
  const double dev = std::max({std::abs(tr(0, 0) - 1.0), std::abs(tr(1, 1) - t),
                               std::abs(tr(0, 1))});
  if (dev > kTraceTol)
    throw InvalidArgument("block traces are not (1, t, 0) (deviation " +
                          detail::format_real(dev) + ")");
  MtVerdict v;
  v.rank = es.numeric_rank;
  if (v.rank <= 1) {
    v.extreme = true;
    return v;
  }
  const NullspaceResult ns = nullspace_functional_test(z, 2, 2, tol);
  v.extreme = v.rank == 2 && ns.extreme;
  if (!v.extreme && ns.witness) {
    v.witness = ns.witness;
    v.split = split_choi(z, *ns.witness, 2, 2, tol);
  }
  return v;
}

// ---------------------------------------------------------------------------
// Qutrit to qubit.
// ---------------------------------------------------------------------------

struct CanonicalForm32 {
  CMatrix U;  // 3x3
  CMatrix V;  // 2x2
  Complex x;  // Z(0,3), zero after elimination
  Complex y;  // Z(0,5), real >= 0
  double c = 0.0;  // Z(3,3)
  Complex s;  // Z(2,3)
  Complex a;  // Z(2,4)
  Complex b;  // Z(2,5)
  Complex d;  // Z(3,4)
  double e = 0.0;  // Z(5,5)
  Complex f;  // Z(4,5)
  bool x_eliminated = false;
  /// Smallest eigenvalue of N = Z2 - |y|^2 g4 g4^T.
  double n_min_eigenvalue = 0.0;
  CMatrix choi;  // 6x6 rotated Choi matrix
  CVector input_state;
  CVector output_state;

  /// Trailing 4x4 block (rows/columns 2..5).
  CMatrix z2() const { return choi.bottomRightCorner(4, 4); }
};

inline CanonicalForm32 canonical_form_32(const Channel& l, const CVector& x) {
  detail::require_dims(l, 3, 2, "canonical_form_32");
  if (l.choi_rank() > 3)
    throw PreconditionError("canonical_form_32 needs Choi rank <= 3, got " +
                            std::to_string(l.choi_rank()));
  const CVector xin = x / x.norm();
  const CVector cout = detail::top_eigenvector(l.apply(xin * xin.adjoint()));
  CMatrix uin = unitary_with_first_column(xin);
  const CMatrix vout = unitary_with_first_column(cout);
  CMatrix z = detail::rotate(l, uin, vout).choi().matrix();

  CanonicalForm32 f;
  const Complex x0 = z(0, 3), y0 = z(0, 5);
  const double scale = std::max(1.0, z.cwiseAbs().maxCoeff());
  if (std::abs(x0) > 1e-14 * scale) {
    // New e2 along w = -conj(y) e2 + conj(x) e3, which L maps to zero against
    // e1; new e3 along (x e2 + y e3) / nu gives y = nu.
    const double nu = std::sqrt(std::norm(x0) + std::norm(y0));
    CMatrix r = CMatrix::Zero(3, 3);
    r(0, 0) = 1.0;
    r(1, 1) = -std::conj(y0) / nu;
    r(2, 1) = std::conj(x0) / nu;
    r(1, 2) = x0 / nu;
    r(2, 2) = y0 / nu;
    uin = uin * r;
    z = detail::rotate(l, uin, vout).choi().matrix();
    f.x_eliminated = true;
  }
  if (std::abs(z(0, 5)) > 0.0) {
    uin.col(2) *= z(0, 5) / std::abs(z(0, 5));
    z = detail::rotate(l, uin, vout).choi().matrix();
  }

  f.U = uin.adjoint();
  f.V = vout;
  f.x = z(0, 3);
  f.y = z(0, 5);
  f.c = z(3, 3).real();
  f.s = z(2, 3);
  f.a = z(2, 4);
  f.b = z(2, 5);
  f.d = z(3, 4);
  f.e = z(5, 5).real();
  f.f = z(4, 5);
  f.choi = z;
  f.input_state = xin;
  f.output_state = cout;

  CMatrix n = f.z2();
  n(3, 3) -= std::norm(f.y);
  const EigenSummary es = hermitian_eig(HermMatrix(n), l.tol());
  f.n_min_eigenvalue = es.min_eigenvalue;
  if (es.min_eigenvalue < -1e-7 * scale)
    throw NumericalFailure("Schur complement of the canonical form is not PSD "
                           "(min eigenvalue " +
                           detail::format_real(es.min_eigenvalue) + ")");
  return f;
}

inline CanonicalForm32 canonical_form_32(const Channel& l,
                                         const SearchConfig& cfg = {}) {
  detail::require_dims(l, 3, 2, "canonical_form_32");
  if (l.choi_rank() > 3)
    throw PreconditionError("canonical_form_32 needs Choi rank <= 3, got " +
                            std::to_string(l.choi_rank()));
  return canonical_form_32(l, detail::pure_pair(l, cfg).x);
}

/// A pair (z, w) != 0 with Z2 >= u+ u+^* and Z2 >= u- u-^*, where
/// u+ = z g2 + (y + w) g4 and u- = -z g2 + (y - w) g4; or nothing.
///
/// Writing b = y g4 and a = z g2 + w g4, both constraints hold iff b +- a lie
/// in range(Z2) and Q(b) + Q(a) + 2|Re <b, a>_Q| <= 1 with Q the pseudoinverse
/// form. A nonzero a exists iff g4 lies in range(Z2) and |y|^2 Q(g4) < 1; then
/// z = 0, w = i t y/|y| with t^2 = 1/Q(g4) - |y|^2 saturates both.
inline std::optional<std::pair<Complex, Complex>> feasibility_2b(
    const HermMatrix& z2, Complex y, const TolerancePolicy& tol = {}) {
  if (z2.dim() != 4) throw ShapeError("Z2 must be 4x4");
  if (std::abs(y) == 0.0) throw InvalidArgument("y must be nonzero");
  CVector g4 = CVector::Zero(4);
  g4(3) = 1.0;
  const RankOneMargin rm = rank_one_margin(z2, g4, tol);
  if (!rm.in_range) return std::nullopt;
  const double q = 1.0 / rm.eps_max;
  const double t2 = 1.0 / q - std::norm(y);
  if (t2 <= kRangeTol * rm.eps_max) return std::nullopt;
  const Complex w = Complex(0.0, std::sqrt(t2)) * (y / std::abs(y));
  const std::pair<Complex, Complex> zw{0.0, w};

  // Certify with explicit PSD tests.
  CVector gp = CVector::Zero(4), gm = CVector::Zero(4);
  gp(1) = zw.first;
  gp(3) = y + zw.second;
  gm(1) = -zw.first;
  gm(3) = y - zw.second;
  for (const CVector& u : {gp, gm}) {
    const EigenSummary es =
        hermitian_eig(HermMatrix(z2.matrix() - u * u.adjoint()), tol);
    if (es.min_eigenvalue < -1e-8 * std::max(1.0, z2.matrix().norm()))
      return std::nullopt;
  }
  return zw;
}

enum class Case32 {
  Y1_W22rank1,
  Y1_W22rank2,
  RankM1,
  M_nonextreme,
  Y0_range,
  Ypos_feasible,
  Ypos_infeasible,
};

inline std::string to_string(Case32 c) {
  switch (c) {
    case Case32::Y1_W22rank1: return "Y1_W22rank1";
    case Case32::Y1_W22rank2: return "Y1_W22rank2";
    case Case32::RankM1: return "RankM1";
    case Case32::M_nonextreme: return "M_nonextreme";
    case Case32::Y0_range: return "Y0_range";
    case Case32::Ypos_feasible: return "Ypos_feasible";
    case Case32::Ypos_infeasible: return "Ypos_infeasible";
  }
  return "?";
}

/// W22 = t U1 + (1 - t) U2 with rank-one states U1, U2.
struct Case1Decomposition {
  double weight = 0.0;
  CMatrix u1;
  CMatrix u2;
};

struct Verdict32 {
  bool extreme = false;
  Case32 case_tag = Case32::RankM1;
  std::optional<std::pair<Complex, Complex>> zw;
  std::optional<Case1Decomposition> case1;
  /// Convex split in the original frame for non-extreme channels.
  std::optional<ConvexSplit> split;
  CanonicalForm32 form;
  bool general_extreme = false;
  bool agrees_with_general = true;
  bool conditioning_flag = false;
};

namespace detail {

/// Replaces entries (0,3), (0,5), (3,0), (5,0) as in the two-sided
/// perturbation of the first row.
inline std::pair<CMatrix, CMatrix> row_perturbation(const CMatrix& z, Complex y,
                                                    Complex zc, Complex wc,
                                                    double eps) {
  CMatrix g1 = z, g2 = z;
  g1(0, 3) = eps * std::conj(zc);
  g1(0, 5) = y + eps * std::conj(wc);
  g1(3, 0) = std::conj(g1(0, 3));
  g1(5, 0) = std::conj(g1(0, 5));
  g2(0, 3) = -eps * std::conj(zc);
  g2(0, 5) = y - eps * std::conj(wc);
  g2(3, 0) = std::conj(g2(0, 3));
  g2(5, 0) = std::conj(g2(0, 5));
  return {g1, g2};
}

inline ConvexSplit make_split32(const Channel& l, const CanonicalForm32& f,
                                const CMatrix& g1, const CMatrix& g2,
                                double weight) {
  const CMatrix uin = f.U.adjoint();
  ConvexSplit s{unrotate(g1, 3, 2, uin, f.V, l.tol()),
                unrotate(g2, 3, 2, uin, f.V, l.tol()), weight, 0.0, 0.0, 0.0};
  const CMatrix rebuilt = weight * s.first.choi().matrix() +
                          (1.0 - weight) * s.second.choi().matrix();
  s.residual = relative_residual(rebuilt, l.choi().matrix());
  return s;
}

}  // namespace detail

namespace detail {

inline void require_rank_32(const Channel& l) {
  require_dims(l, 3, 2, "is_extreme_32");
  if (l.choi_rank() < 2 || l.choi_rank() > 3)
    throw PreconditionError("is_extreme_32 needs Choi rank 2 or 3, got " +
                            std::to_string(l.choi_rank()));
}

}  // namespace detail

/// Decision from a given canonical form of l.
inline Verdict32 is_extreme_32(const Channel& l, const CanonicalForm32& form) {
  detail::require_rank_32(l);
  const int rank = l.choi_rank();
  const TolerancePolicy& tol = l.tol();
  Verdict32 v;
  v.form = form;
  const CanonicalForm32& f = v.form;
  const CMatrix& z = f.choi;
  const CMatrix z2 = f.z2();
  const double y = std::abs(f.y);

  if (std::abs(y - 1.0) <= kUnitModulusTol) {
    const double off = std::max({std::abs(1.0 - f.e), std::abs(f.a),
                                 std::abs(f.b), std::abs(f.d), std::abs(f.f)});
    if (off > 1e-6)
      throw NumericalFailure("|y| = 1 but the canonical form is not "
                             "block diagonal (deviation " +
                             detail::format_real(off) + ")");
    const CMatrix w22 = z.block(2, 2, 2, 2);
    const EigenSummary es = hermitian_eig(HermMatrix(w22), tol);
    if (es.numeric_rank <= 1) {
      v.case_tag = Case32::Y1_W22rank1;
      v.extreme = true;
    } else {
      v.case_tag = Case32::Y1_W22rank2;
      v.extreme = false;
      Case1Decomposition d;
      d.weight = es.eigenvalues(1) / (es.eigenvalues(0) + es.eigenvalues(1));
      d.u1 = es.eigenvectors.col(1) * es.eigenvectors.col(1).adjoint();
      d.u2 = es.eigenvectors.col(0) * es.eigenvectors.col(0).adjoint();
      CMatrix g1 = z, g2 = z;
      g1.block(2, 2, 2, 2) = d.u1;
      g2.block(2, 2, 2, 2) = d.u2;
      v.case1 = d;
      v.split = detail::make_split32(l, f, g1, g2, d.weight);
    }
  } else {
    CMatrix n = z2;
    n(3, 3) -= y * y;
    const HermMatrix nh(n);
    const EigenSummary ne = hermitian_eig(nh, tol);
    if (ne.numeric_rank <= 1) {
      v.case_tag = Case32::RankM1;
      v.extreme = true;
    } else if (ne.numeric_rank > 2) {
      throw NumericalFailure("Schur complement has rank " +
                             std::to_string(ne.numeric_rank) + " > 2");
    } else {
      const MtVerdict mt = is_extreme_mt(nh, 1.0 - y * y, tol);
      if (!mt.extreme) {
        v.case_tag = Case32::M_nonextreme;
        v.extreme = false;
        CMatrix w = CMatrix::Zero(6, 6);
        w.bottomRightCorner(4, 4) = mt.witness->matrix();
        const ChoiSplit cs = split_choi(HermMatrix(z), HermMatrix(w), 3, 2, tol);
        v.split = detail::make_split32(l, f, cs.plus, cs.minus, cs.weight);
      } else if (y <= kParamZeroTol) {
        v.case_tag = Case32::Y0_range;
        // range(Z2) meets span{g2, g4} iff (I - PP^*)[g2 g4] is singular.
        const CMatrix p = range_basis(HermMatrix(z2), tol);
        CMatrix g = CMatrix::Zero(4, 2);
        g(1, 0) = 1.0;
        g(3, 1) = 1.0;
        const CMatrix r = g - p * (p.adjoint() * g);
        Eigen::JacobiSVD<CMatrix> svd(r, Eigen::ComputeFullV);
        const RVector sv = svd.singularValues();
        if (sv(1) > kRangeTol) {
          v.extreme = true;
        } else {
          v.extreme = false;
          const CVector kv = svd.matrixV().col(1);
          v.zw = std::make_pair(kv(0), kv(1));
          const CVector u = g * kv;
          const RankOneMargin rm = rank_one_margin(HermMatrix(z2), u, tol);
          const double eps = std::sqrt(rm.eps_max);
          const auto [g1, g2] =
              detail::row_perturbation(z, f.y, kv(0), kv(1), eps);
          v.split = detail::make_split32(l, f, g1, g2, 0.5);
        }
        if (sv(1) > kRangeTol / 100 && sv(1) < kRangeTol * 100)
          v.conditioning_flag = true;
      } else {
        const auto zw = feasibility_2b(HermMatrix(z2), f.y, tol);
        if (zw) {
          v.case_tag = Case32::Ypos_feasible;
          v.extreme = false;
          v.zw = zw;
          const auto [g1, g2] =
              detail::row_perturbation(z, f.y, zw->first, zw->second, 1.0);
          v.split = detail::make_split32(l, f, g1, g2, 0.5);
        } else {
          v.case_tag = Case32::Ypos_infeasible;
          v.extreme = true;
        }
      }
    }
  }

  if (rank == 2 && !v.extreme)
    throw NumericalFailure("Choi rank 2 channel on C^3 reported non-extreme");
  const ExtremalityVerdict g = is_extreme(l);
  v.general_extreme = g.extreme;
  v.agrees_with_general = g.extreme == v.extreme;
  v.conditioning_flag =
      v.conditioning_flag || g.conditioning_flag || !v.agrees_with_general;
  return v;
}

inline Verdict32 is_extreme_32(const Channel& l, const SearchConfig& cfg = {}) {
  detail::require_rank_32(l);
  return is_extreme_32(l, canonical_form_32(l, cfg));
}

}  // namespace qchan
