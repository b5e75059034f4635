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
 * @file entropy.hpp
 * Von Neumann entropy, minimum output entropy estimates and the tensor
 * additivity gap.
 *
 * Entropies are in nats. min_output_entropy returns an upper bound on the
 * true minimum (the best value seen), except when a pure output is found,
 * which certifies the minimum is zero.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "qchan/image_rank.hpp"

namespace qchan {

/// Largest output purity defect 1 - tr(rho^2) accepted as a zero certificate.
inline constexpr double kPurityCertTol = 1e-6;

inline double von_neumann_entropy(const CMatrix& rho,
                                  double log_base = std::numbers::e) {
  if (rho.rows() != rho.cols() || rho.rows() == 0)
    throw ShapeError("density matrix must be square and nonempty, got " +
                     detail::dims(rho));
  if (!(log_base > 0.0 && log_base != 1.0))
    throw InvalidArgument("log base must be positive and not 1");
  const HermMatrix h(rho);
  if ((rho - h.matrix()).norm() > 1e-8)
    throw InvalidArgument("density matrix is not Hermitian");
  if (std::abs(rho.trace() - 1.0) > 1e-8)
    throw InvalidArgument("density matrix trace is " +
                          detail::format_complex(rho.trace()) + ", expected 1");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h.matrix(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericalFailure("Hermitian eigensolver did not converge");
  if (es.eigenvalues()(0) < -1e-8)
    throw InvalidArgument("density matrix is not PSD (min eigenvalue " +
                          detail::format_real(es.eigenvalues()(0)) + ")");
  double s = 0.0;
  for (double l : es.eigenvalues()) {
    l = std::clamp(l, 0.0, 1.0);
    if (l > 0.0) s -= l * std::log(l);
  }
  return s / std::log(log_base);
}

struct EntropyConfig {
  int starts = 8;
  int max_iterations = 300;
  std::uint64_t seed = 0;
  /// Bloch mesh for qubit inputs; zero disables it.
  int grid_theta = 100;
  int grid_phi = 200;

  void check() const {
    if (starts < 1) throw InvalidArgument("starts must be positive");
    if (max_iterations < 1)
      throw InvalidArgument("max_iterations must be positive");
    if (grid_theta < 0 || grid_phi < 0)
      throw InvalidArgument("grid sizes must be non-negative");
  }
};

struct EntropyResult {
  double s_min_estimate = 0.0;
  CVector argmin_state;
  long evaluations = 0;
  bool certified_zero = false;
  double purity_defect = 0.0;
  /// "pure-to-pure" or "descent".
  std::string method;
};

namespace detail {

struct EntropyEval {
  double s = 0.0;
  CMatrix rho;
  CMatrix log_rho;
};

inline EntropyEval entropy_eval(const Channel& l, const CVector& x) {
  EntropyEval e;
  e.rho = l.apply(x * x.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(e.rho);
  if (es.info() != Eigen::Success)
    throw NumericalFailure("Hermitian eigensolver did not converge");
  RVector lg(es.eigenvalues().size());
  for (Index i = 0; i < lg.size(); ++i) {
    const double v = std::clamp(es.eigenvalues()(i), 0.0, 1.0);
    if (v > 0.0) e.s -= v * std::log(v);
    lg(i) = std::log(std::max(v, 1e-30));
  }
  e.log_rho = es.eigenvectors() * lg.asDiagonal() * es.eigenvectors().adjoint();
  return e;
}

/// Riemannian gradient descent on the unit sphere with backtracking.
inline std::pair<CVector, double> entropy_descent(const Channel& l, CVector x,
                                                  int max_it, long& evals) {
  const AdjointMap adj = adjoint(l);
  x.normalize();
  EntropyEval cur = entropy_eval(l, x);
  ++evals;
  double step = 1.0;
  for (int it = 0; it < max_it; ++it) {
    // dS = -2 Re <dx, L^*(log rho) x>
    CVector g = -2.0 * (adj.apply(cur.log_rho) * x);
    g -= x * x.dot(g).real();
    g -= x * Complex(0.0, x.dot(g).imag());
    const double gn = g.norm();
    if (gn < 1e-12) break;
    bool moved = false;
    step = std::min(1.0, 4.0 * step);
    while (step > 1e-14) {
      CVector y = x - step * g;
      y.normalize();
      EntropyEval next = entropy_eval(l, y);
      ++evals;
      if (next.s < cur.s - 1e-4 * step * gn * gn) {
        x = y;
        cur = std::move(next);
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved || cur.s <= 0.0) break;
  }
  return {x, cur.s};
}

}  // namespace detail

/// Minimum output entropy estimate. Extra starting vectors are tried first.
inline EntropyResult min_output_entropy(const Channel& l,
                                        const EntropyConfig& cfg = {},
                                        const std::vector<CVector>& seeds = {}) {
  cfg.check();
  const int m = l.m();
  EntropyResult res;
  auto finish = [&](const CVector& x, const std::string& method) {
    res.argmin_state = detail::fix_phase(x / x.norm());
    const CMatrix rho = l.apply(res.argmin_state * res.argmin_state.adjoint());
    res.s_min_estimate = von_neumann_entropy(rho);
    res.purity_defect = 1.0 - (rho * rho).trace().real();
    res.certified_zero = res.purity_defect <= kPurityCertTol;
    res.method = method;
    return res;
  };

  if (l.n() == 2 && l.choi_rank() <= m) {
    SearchConfig sc;
    sc.seed = cfg.seed;
    const PureToPureResult r = find_pure_to_pure(l, sc);
    res.evaluations = 1;
    if (r.converged && r.purity_defect <= kPurityCertTol)
      return finish(r.x, "pure-to-pure");
  }

  CVector best_x;
  double best = 1e300;
  auto consider = [&](const CVector& x, double s) {
    if (s < best) {
      best = s;
      best_x = x;
    }
  };
  std::vector<CVector> starts;
  for (const CVector& s : seeds) {
    if (s.size() != m)
      throw ShapeError("seed vector has length " + std::to_string(s.size()) +
                       ", expected " + std::to_string(m));
    starts.push_back(s);
  }
  if (m == 2 && cfg.grid_theta > 0 && cfg.grid_phi > 0) {
    CVector gx;
    double gs = 1e300;
    const int den = std::max(1, cfg.grid_theta - 1);
    for (int i = 0; i < cfg.grid_theta; ++i) {
      const double th = std::numbers::pi * i / den;
      for (int j = 0; j < cfg.grid_phi; ++j) {
        const double ph = 2.0 * std::numbers::pi * j / cfg.grid_phi;
        CVector x(2);
        x << std::cos(th / 2), std::polar(std::sin(th / 2), ph);
        const double s = detail::entropy_eval(l, x).s;
        ++res.evaluations;
        consider(x, s);
        if (s < gs) {
          gs = s;
          gx = x;
        }
      }
    }
    starts.push_back(gx);
  }
  for (int s = 0; s < cfg.starts; ++s) {
    Rng rng = Rng::stream(cfg.seed, std::uint64_t(s));
    starts.push_back(rng.unit_vector(m));
  }
  for (const CVector& x0 : starts) {
    const auto [x, s] =
        detail::entropy_descent(l, x0, cfg.max_iterations, res.evaluations);
    consider(x, s);
  }
  return finish(best_x, "descent");
}

struct AdditivityResult {
  double s1 = 0.0;
  double s2 = 0.0;
  double s12 = 0.0;
  /// s1 + s2 - s12
  double gap = 0.0;
  EntropyResult first;
  EntropyResult second;
  EntropyResult joint;
};

inline AdditivityResult additivity_check(const Channel& l1, const Channel& l2,
                                         const EntropyConfig& cfg = {},
                                         int max_input_dim = 12) {
  const int mm = l1.m() * l2.m();
  if (mm > max_input_dim)
    throw InvalidArgument("tensor input dimension " + std::to_string(mm) +
                          " exceeds the budget " +
                          std::to_string(max_input_dim));
  AdditivityResult r;
  r.first = min_output_entropy(l1, cfg);
  r.second = min_output_entropy(l2, cfg);
  const Channel t = tensor(l1, l2);
  const CVector prod = kron(r.first.argmin_state, r.second.argmin_state);
  r.joint = min_output_entropy(t, cfg, {prod});
  r.s1 = r.first.s_min_estimate;
  r.s2 = r.second.s_min_estimate;
  r.s12 = r.joint.s_min_estimate;
  r.gap = r.s1 + r.s2 - r.s12;
  return r;
}

}  // namespace qchan
