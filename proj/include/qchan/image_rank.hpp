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
 * @file image_rank.hpp
 * Ranks of outputs of pure states.
 *
 * With Kraus operators A_1..A_l (l = Choi rank) put
 * B_j = [A_1 e_j ... A_l e_j] in C^{n x l} and M(x) = sum_j x_j B_j. Then
 * L(xx^*) = M(x) M(x)^*, so rank L(xx^*) = rank M(x).
 *
 * Low-rank outputs are found by driving all (p+1)-minors of M(x) to zero.
 * The minors are holomorphic in x, so a complex Levenberg-Marquardt
 * iteration on an affine chart {x0 + N z} of projective space converges
 * quadratically to regular solutions.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "qchan/channel.hpp"
#include "qchan/sampling.hpp"

namespace qchan {

struct ImageRankReport {
  int l = 0;
  std::vector<CMatrix> B;
  int r = 0;
  int p = 0;
  bool rank_one_guaranteed = false;
};

struct SearchConfig {
  int starts = 32;
  int max_iterations = 500;
  std::uint64_t seed = 0;

  void check() const {
    if (starts < 1 || max_iterations < 1)
      throw InvalidArgument("search budget must be positive");
  }
};

struct PureToPureResult {
  CVector x;
  CMatrix output;
  double sigma2 = 0.0;
  double purity_defect = 0.0;
  bool converged = false;
  /// "trivial", "quadratic" or "multistart".
  std::string method;
  int start_index = -1;
};

/// B_j = [A_1 e_j ... A_l e_j], j = 1..m.
inline std::vector<CMatrix> b_matrices(const KrausSet& k) {
  const Index l = Index(k.size());
  std::vector<CMatrix> b;
  for (int j = 0; j < k.m(); ++j) {
    CMatrix bj(k.n(), l);
    for (Index i = 0; i < l; ++i) bj.col(i) = k[std::size_t(i)].col(j);
    b.push_back(std::move(bj));
  }
  return b;
}

inline CMatrix pencil(const std::vector<CMatrix>& b, const CVector& x) {
  CMatrix out = CMatrix::Zero(b.front().rows(), b.front().cols());
  for (std::size_t j = 0; j < b.size(); ++j) out += x(Index(j)) * b[j];
  return out;
}

/// Smallest p >= 1 with p(n + l - p) + r >= nl + 1, capped at min(n, l).
inline int guaranteed_output_rank(int n, int l, int r) {
  const int cap = std::min(n, l);
  for (int p = 1; p < cap; ++p)
    if (p * (n + l - p) + r >= n * l + 1) return p;
  return std::max(cap, 1);
}

inline ImageRankReport image_rank_report(const Channel& ch) {
  ImageRankReport rep;
  rep.l = static_cast<int>(ch.kraus().size());
  rep.B = b_matrices(ch.kraus());
  CMatrix stacked(Index(ch.n()) * rep.l, ch.m());
  for (int j = 0; j < ch.m(); ++j) stacked.col(j) = matrix_to_vec(rep.B[std::size_t(j)]);
  rep.r = numeric_rank(stacked, ch.tol().rank_rel_tol);
  rep.p = guaranteed_output_rank(ch.n(), rep.l, rep.r);
  rep.rank_one_guaranteed = rep.r >= (ch.n() - 1) * (rep.l - 1) + 1;
  return rep;
}

struct OutputRankCheck {
  int output_rank = 0;  // from the eigenvalues of L(xx^*)
  int pencil_rank = 0;  // from the singular values of M(x)
  bool near_threshold = false;
};

/// Both rank computations for a unit vector x. The pencil threshold is the
/// square root of the relative eigenvalue threshold, since sigma^2 = lambda.
inline OutputRankCheck output_rank_check(const Channel& ch, const CVector& x) {
  if (x.size() != ch.m()) throw ShapeError("input vector has wrong length");
  const double nx = x.norm();
  if (std::abs(nx - 1.0) > 1e-8) throw InvalidArgument("x must be a unit vector");
  const double tau = ch.tol().rank_rel_tol * double(ch.n());
  OutputRankCheck out;

  const CMatrix rho = ch.apply(x * x.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
  if (es.info() != Eigen::Success)
    throw NumericalFailure("Hermitian eigensolver did not converge");
  const RVector lam = es.eigenvalues();
  const double lmax = lam.cwiseAbs().maxCoeff();
  for (Index i = 0; i < lam.size(); ++i) {
    if (lam(i) > tau * lmax) ++out.output_rank;
    if (lam(i) > tau * lmax / 10 && lam(i) < tau * lmax * 10)
      out.near_threshold = true;
  }

  const CMatrix mx = pencil(b_matrices(ch.kraus()), x);
  Eigen::JacobiSVD<CMatrix> svd(mx);
  const RVector s = svd.singularValues();
  const double st = std::sqrt(tau) * s(0);
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > st) ++out.pencil_rank;
    if (s(i) > st / 10 && s(i) < st * 10) out.near_threshold = true;
  }
  return out;
}

/// rank L(xx^*), cross-checked against rank M(x).
inline int output_rank(const Channel& ch, const CVector& x) {
  const OutputRankCheck c = output_rank_check(ch, x);
  if (c.output_rank != c.pencil_rank && !c.near_threshold)
    throw NumericalFailure("output rank " + std::to_string(c.output_rank) +
                           " disagrees with pencil rank " +
                           std::to_string(c.pencil_rank));
  return c.output_rank;
}

namespace detail {

inline std::vector<std::vector<Index>> subsets(Index n, Index k) {
  std::vector<std::vector<Index>> out;
  std::vector<Index> cur;
  auto rec = [&](auto&& self, Index start) -> void {
    if (Index(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (Index i = start; i < n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

inline CMatrix adjugate(const CMatrix& s) {
  const Index q = s.rows();
  if (q == 1) return CMatrix::Ones(1, 1);
  if (q == 2) {
    CMatrix a(2, 2);
    a << s(1, 1), -s(0, 1), -s(1, 0), s(0, 0);
    return a;
  }
  CMatrix a(q, q);
  for (Index i = 0; i < q; ++i)
    for (Index j = 0; j < q; ++j) {
      CMatrix minor(q - 1, q - 1);
      for (Index r = 0, rr = 0; r < q; ++r) {
        if (r == i) continue;
        for (Index c = 0, cc = 0; c < q; ++c) {
          if (c == j) continue;
          minor(rr, cc++) = s(r, c);
        }
        ++rr;
      }
      a(j, i) = ((i + j) % 2 ? -1.0 : 1.0) * minor.determinant();
    }
  return a;
}

/// The (q x q)-minors of M(x) and their gradients with respect to x.
struct MinorSystem {
  std::vector<CMatrix> b;
  std::vector<std::vector<Index>> rows, cols;

  MinorSystem(std::vector<CMatrix> bs, Index q) : b(std::move(bs)) {
    rows = subsets(b.front().rows(), q);
    cols = subsets(b.front().cols(), q);
  }

  Index size() const { return Index(rows.size() * cols.size()); }

  static CMatrix pick(const CMatrix& a, const std::vector<Index>& r,
                      const std::vector<Index>& c) {
    CMatrix s(Index(r.size()), Index(c.size()));
    for (std::size_t i = 0; i < r.size(); ++i)
      for (std::size_t j = 0; j < c.size(); ++j) s(Index(i), Index(j)) = a(r[i], c[j]);
    return s;
  }

  void evaluate(const CVector& x, CVector& f, CMatrix& jac) const {
    const CMatrix mx = pencil(b, x);
    const Index m = Index(b.size());
    f.resize(size());
    jac.resize(size(), m);
    Index e = 0;
    for (const auto& r : rows)
      for (const auto& c : cols) {
        const CMatrix s = pick(mx, r, c);
        f(e) = s.determinant();
        const CMatrix adj = adjugate(s);
        for (Index k = 0; k < m; ++k)
          jac(e, k) = (adj * pick(b[std::size_t(k)], r, c)).trace();
        ++e;
      }
  }
};

inline double singular_value(const CMatrix& a, Index i) {
  Eigen::JacobiSVD<CMatrix> svd(a);
  const RVector s = svd.singularValues();
  return i < s.size() ? s(i) : 0.0;
}

/// Rotates x so that its first non-negligible coordinate is real >= 0.
inline CVector fix_phase(const CVector& x) {
  const double scale = x.cwiseAbs().maxCoeff();
  for (Index i = 0; i < x.size(); ++i)
    if (std::abs(x(i)) > 1e-12 * scale)
      return x * (std::conj(x(i)) / std::abs(x(i)));
  return x;
}

/// Levenberg-Marquardt on the chart x = x0 + N z.
inline CVector minors_lm(const MinorSystem& sys, const CVector& x0,
                         int max_iterations) {
  const Index m = x0.size();
  const CMatrix nbasis = unitary_with_first_column(x0).rightCols(m - 1);
  CVector x = x0;
  CVector f;
  CMatrix jac;
  sys.evaluate(x, f, jac);
  double cost = f.squaredNorm();
  double mu = 1e-3;
  for (int it = 0; it < max_iterations && cost > 1e-34; ++it) {
    const CMatrix jz = jac * nbasis;
    CMatrix h = jz.adjoint() * jz;
    const double diag_scale = std::max(h.diagonal().real().maxCoeff(), 1e-300);
    h.diagonal().array() += mu * diag_scale;
    const CVector step = h.ldlt().solve(-jz.adjoint() * f);
    const CVector xn = x + nbasis * step;
    CVector fn;
    CMatrix jn;
    sys.evaluate(xn, fn, jn);
    const double cn = fn.squaredNorm();
    if (cn < cost) {
      const bool tiny = step.norm() <= 1e-15 * std::max(1.0, xn.norm());
      x = xn;
      f = fn;
      jac = jn;
      cost = cn;
      mu = std::max(mu / 3.0, 1e-12);
      if (tiny) break;
    } else {
      mu *= 4.0;
      if (mu > 1e12) break;
    }
  }
  return x / x.norm();
}

inline PureToPureResult make_result(const Channel& ch,
                                    const std::vector<CMatrix>& b,
                                    const CVector& x_raw, Index target_rank,
                                    double tol) {
  PureToPureResult r;
  r.x = fix_phase(x_raw / x_raw.norm());
  r.output = ch.apply(r.x * r.x.adjoint());
  r.sigma2 = singular_value(pencil(b, r.x), target_rank);
  r.purity_defect = 1.0 - (r.output * r.output).trace().real();
  r.converged = r.sigma2 <= tol;
  return r;
}

/// Roots of det(B1 + t B2) = 0 for 2 x 2 pencils, plus x = e2 when B2 is
/// singular.
inline std::vector<CVector> quadratic_candidates(const std::vector<CMatrix>& b) {
  const CMatrix& b1 = b[0];
  const CMatrix& b2 = b[1];
  const Complex a = b2.determinant();
  const Complex bq = (adjugate(b1) * b2).trace();
  const Complex c = b1.determinant();
  const double scale = std::max({b1.norm(), b2.norm(), 1e-300});
  const double eps = 1e-14 * scale * scale;
  std::vector<CVector> out;
  auto push = [&](Complex x1, Complex x2) {
    CVector v(2);
    v << x1, x2;
    out.push_back(v / v.norm());
  };
  if (std::abs(a) <= eps) push(0.0, 1.0);
  if (std::abs(a) > eps) {
    const Complex d2 = bq * bq - 4.0 * a * c;
    // A numerically double root is better located as the critical point.
    if (std::abs(d2) <= 1e-12 * (std::norm(bq) + 4.0 * std::abs(a * c))) {
      push(1.0, -bq / (2.0 * a));
      return out;
    }
    const Complex disc = std::sqrt(d2);
    // Numerically stable pair of roots.
    const Complex qv = -0.5 * (bq + (std::real(std::conj(bq) * disc) >= 0 ? disc : -disc));
    if (std::abs(qv) > 0) {
      push(1.0, qv / a);
      push(1.0, c / qv);
    } else {
      push(1.0, 0.0);
    }
  } else if (std::abs(bq) > eps) {
    push(1.0, -c / bq);
  } else if (std::abs(c) <= eps) {
    push(1.0, 0.0);
  }
  return out;
}

}  // namespace detail

/// Searches for a unit x with rank M(x) <= p by minimizing the (p+1)-minors.
/// sigma2 in the result is the (p+1)-th singular value of M(x).
inline PureToPureResult find_low_rank_output(const Channel& ch, int p,
                                             const SearchConfig& cfg = {}) {
  cfg.check();
  if (p < 1) throw InvalidArgument("target rank must be positive");
  const std::vector<CMatrix> b = b_matrices(ch.kraus());
  const Index l = b.front().cols();
  const double tol = ch.tol().search_tol;
  if (p >= std::min<Index>(ch.n(), l) || ch.m() == 1) {
    CVector e1 = CVector::Zero(ch.m());
    e1(0) = 1.0;
    PureToPureResult r = detail::make_result(ch, b, e1, p, tol);
    r.method = "trivial";
    r.start_index = 0;
    return r;
  }
  const detail::MinorSystem sys(b, p + 1);
  PureToPureResult best;
  bool have = false;
  for (int s = 0; s < cfg.starts; ++s) {
    Rng rng = Rng::stream(cfg.seed, std::uint64_t(s));
    const CVector x0 = rng.unit_vector(ch.m());
    const CVector x = detail::minors_lm(sys, x0, cfg.max_iterations);
    PureToPureResult r = detail::make_result(ch, b, x, p, tol);
    r.method = "multistart";
    r.start_index = s;
    if (!have || r.sigma2 < best.sigma2) {
      best = r;
      have = true;
    }
    if (best.converged) break;
  }
  return best;
}

/// A pure input with pure output for qubit-output channels of Choi rank
/// at most m.
inline PureToPureResult find_pure_to_pure(const Channel& ch,
                                          const SearchConfig& cfg = {}) {
  if (ch.n() != 2)
    throw InvalidArgument("pure-to-pure search needs output dimension 2");
  if (ch.choi_rank() > ch.m())
    throw InvalidArgument("pure-to-pure search needs Choi rank <= m");
  cfg.check();
  const std::vector<CMatrix> b = b_matrices(ch.kraus());
  const double tol = ch.tol().search_tol;
  if (ch.m() == 2 && b.front().cols() == 2) {
    const detail::MinorSystem sys(b, 2);
    PureToPureResult best;
    bool have = false;
    for (const CVector& cand : detail::quadratic_candidates(b)) {
      // A few Newton steps polish the closed-form root.
      const CVector x = detail::minors_lm(sys, cand, 5);
      PureToPureResult r = detail::make_result(ch, b, x, 1, tol);
      r.method = "quadratic";
      r.start_index = 0;
      if (!have || r.sigma2 < best.sigma2) {
        best = r;
        have = true;
      }
    }
    if (have && best.converged) return best;
  }
  return find_low_rank_output(ch, 1, cfg);
}

}  // namespace qchan
