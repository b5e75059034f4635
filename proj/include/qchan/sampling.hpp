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
 * @file sampling.hpp
 * Seeded random unitaries and random channels of prescribed Choi rank.
 *
 * Random channels use Kraus operators A_i = B_i D^{-1/2} with B_i i.i.d.
 * standard complex Gaussian and D = sum B_i^* B_i.
 *
 * Every sample index gets its own generator, seeded with
 * splitmix64(seed ^ splitmix64(index)), so batches are reproducible and
 * independent of evaluation order.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <numbers>
#include <random>
#include <thread>
#include <vector>

#include "qchan/extremality.hpp"

namespace qchan {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic generator. Gaussian draws use Box-Muller on top of the raw
/// 64-bit stream so the values do not depend on the standard library's
/// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  /// Independent stream for sample `index` of a batch seeded by `seed`.
  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    return Rng(seed ^ splitmix64(index));
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Standard complex Gaussian, E|z|^2 = 1.
  Complex complex_normal() {
    const double s = 1.0 / std::sqrt(2.0);
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
  }

  CMatrix gaussian(Index rows, Index cols) {
    CMatrix g(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) g(i, j) = complex_normal();
    return g;
  }

  /// Uniform point on the unit sphere of C^d.
  CVector unit_vector(Index d) {
    CVector v = gaussian(d, 1).col(0);
    return v / v.norm();
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Haar unitary: QR of a complex Gaussian matrix, R's diagonal phases moved
/// into Q.
inline CMatrix random_unitary(Index dim, Rng& rng) {
  if (dim < 1) throw InvalidArgument("unitary dimension must be positive");
  const CMatrix g = rng.gaussian(dim, dim);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < dim; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0.0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

struct SamplerConfig {
  std::uint64_t seed = 0;
  int m = 2;
  int n = 2;
  int k = 1;
  int count = 1;

  void check() const {
    if (m < 1 || n < 1 || k < 1)
      throw InvalidArgument("m, n and k must be positive");
    if (count < 1) throw InvalidArgument("sample count must be positive");
    if (k * std::min(m, n) < m)
      throw InvalidArgument("no channel with Choi rank k exists unless "
                            "k*min(m,n) >= m (got k=" + std::to_string(k) +
                            ", m=" + std::to_string(m) +
                            ", n=" + std::to_string(n) + ")");
    if (k > m * n)
      throw InvalidArgument("Choi rank cannot exceed m*n");
  }
};

inline Channel random_channel(int m, int n, int k, Rng& rng,
                              const TolerancePolicy& tol = {}) {
  SamplerConfig{0, m, n, k, 1}.check();
  for (int attempt = 0; attempt < 4; ++attempt) {
    std::vector<CMatrix> b;
    b.reserve(std::size_t(k));
    for (int i = 0; i < k; ++i) b.push_back(rng.gaussian(n, m));
    CMatrix d = CMatrix::Zero(m, m);
    for (const auto& bi : b) d += bi.adjoint() * bi;
    CMatrix f;
    try {
      f = psd_sqrt(HermMatrix(d), true, tol).matrix();
    } catch (const SingularityError&) {
      continue;
    }
    for (auto& bi : b) bi = bi * f;
    Channel ch = Channel::from_kraus(b, tol);
    if (ch.choi_rank() == k) return ch;
  }
  throw NumericalFailure("random channel of Choi rank " + std::to_string(k) +
                         " not obtained after 3 retries");
}

/// Sample `index` of the batch described by cfg.
inline Channel sample_channel(const SamplerConfig& cfg, std::uint64_t index,
                              const TolerancePolicy& tol = {}) {
  Rng rng = Rng::stream(cfg.seed, index);
  return random_channel(cfg.m, cfg.n, cfg.k, rng, tol);
}

struct ExperimentResult {
  double fraction_extreme = 0.0;
  int flagged = 0;
  int extreme = 0;
  int unflagged = 0;
  int count = 0;
};

/// Fraction of extreme points among conditioning-unflagged samples.
inline ExperimentResult extreme_fraction_experiment(
    const SamplerConfig& cfg, const TolerancePolicy& tol = {},
    unsigned threads = 1) {
  cfg.check();
  if (cfg.k > cfg.m)
    throw InvalidArgument("experiment needs k <= m");
  const std::size_t count = std::size_t(cfg.count);
  std::vector<char> ext(count, 0), flag(count, 0);
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < count; i += stride) {
      const Channel ch = sample_channel(cfg, i, tol);
      const ExtremalityVerdict v = is_extreme(ch);
      ext[i] = v.extreme;
      flag[i] = v.conditioning_flag;
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, unsigned(count)));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        try {
          work(t, threads);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  ExperimentResult out;
  out.count = cfg.count;
  for (std::size_t i = 0; i < count; ++i) {
    if (flag[i]) {
      ++out.flagged;
      continue;
    }
    ++out.unflagged;
    if (ext[i]) ++out.extreme;
  }
  out.fraction_extreme =
      out.unflagged ? double(out.extreme) / double(out.unflagged) : 0.0;
  return out;
}

}  // namespace qchan
