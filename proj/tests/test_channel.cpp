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

#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "qchan/channel.hpp"
#include "qchan/sampling.hpp"
#include "qchan/standard_channels.hpp"

using namespace qchan;
using Catch::Matchers::WithinAbs;

namespace {

CMatrix random_density(Index d, Rng& rng) {
  const CMatrix g = rng.gaussian(d, d);
  CMatrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

CMatrix random_hermitian(Index d, Rng& rng) {
  const CMatrix g = rng.gaussian(d, d);
  return g + g.adjoint();
}

CMatrix e(Index d, Index i, Index j) {
  CMatrix x = CMatrix::Zero(d, d);
  x(i, j) = 1.0;
  return x;
}

}  // namespace

TEST_CASE("Choi matrices of standard channels", "[channel]") {
  const Channel id = channels::identity(2);
  CMatrix expected = CMatrix::Zero(4, 4);
  expected(0, 0) = expected(0, 3) = expected(3, 0) = expected(3, 3) = 1.0;
  CHECK((id.choi().matrix() - expected).norm() < 1e-15);
  CHECK(id.choi_rank() == 1);

  const Channel meas = channels::measurement(2);
  CHECK((meas.choi().matrix() -
         CMatrix(Eigen::Vector4cd(1, 0, 0, 1).asDiagonal()))
            .norm() < 1e-15);

  const Channel dep = channels::depolarizing_qubit();
  CHECK((dep.choi().matrix() - 0.5 * CMatrix::Identity(4, 4)).norm() < 1e-15);
  CHECK(dep.choi_rank() == 4);
}

TEST_CASE("Kraus operators from a Choi matrix", "[channel]") {
  const Channel meas = channels::measurement(2);
  REQUIRE(meas.kraus().size() == 2);
  CHECK(relative_residual(choi_of_operators(meas.kraus().operators()),
                          meas.choi().matrix()) < 1e-14);
  for (const auto& a : meas.kraus().operators())
    CHECK(std::abs(a(0, 1)) + std::abs(a(1, 0)) < 1e-15);

  const Channel id = channels::identity(2);
  REQUIRE(id.kraus().size() == 1);
  const CMatrix u = id.kraus()[0];
  CHECK((u.adjoint() * u - CMatrix::Identity(2, 2)).norm() < 1e-14);
  // Gauge: first largest-modulus entry real positive.
  CHECK(u(0, 0).real() > 0);
  CHECK(std::abs(u(0, 0).imag()) < 1e-15);

  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const Channel ch = random_channel(3, 2, 1 + t % 3 + 1, rng);
    const KrausSet k = kraus_from_choi(ch.choi());
    CHECK(int(k.size()) == ch.choi_rank());
    CHECK(relative_residual(choi_of_operators(k.operators()),
                            ch.choi().matrix()) <= 1e-10);
    const auto& ops = k.operators();
    for (std::size_t i = 0; i < ops.size(); ++i)
      for (std::size_t j = 0; j < ops.size(); ++j)
        if (i != j) CHECK(std::abs((ops[j].adjoint() * ops[i]).trace()) < 1e-10);
  }
}

TEST_CASE("Choi assembly agrees with the blockwise definition", "[channel]") {
  Rng rng(4);
  for (int m = 2; m <= 4; ++m)
    for (int n = 2; n <= 4; ++n) {
      const int k = std::max(min_choi_rank(m, n), 2);
      const Channel ch = random_channel(m, n, k, rng);
      const CMatrix z = oracle::choi_by_blocks(ch.kraus().operators());
      CHECK(relative_residual(ch.choi().matrix(), z) <= 1e-12);
      CHECK_THAT(ch.choi().matrix().trace().real(), WithinAbs(m, 1e-10));
      const CMatrix x = rng.gaussian(m, m);
      CHECK(relative_residual(ch.apply(x),
                              oracle::apply_by_blocks(z, m, n, x)) <= 1e-12);
    }
}

TEST_CASE("application of channels", "[channel]") {
  Rng rng(6);
  const CMatrix x = rng.gaussian(2, 2);
  CHECK(relative_residual(channels::identity(2).apply(x), x) < 1e-14);

  CMatrix plus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  CHECK((channels::measurement(2).apply(plus) -
         CMatrix(0.5 * CMatrix::Identity(2, 2)))
            .norm() < 1e-15);

  const Channel ad = channels::amplitude_damping(0.5);
  CHECK((ad.apply(e(2, 1, 1)) - CMatrix(0.5 * CMatrix::Identity(2, 2)))
            .norm() < 1e-14);
  CHECK_THROWS_AS(ad.apply(CMatrix::Zero(3, 3)), ShapeError);

  for (int t = 0; t < 30; ++t) {
    const int m = 2 + t % 3, n = 2 + (t / 3) % 3;
    const Channel ch = random_channel(m, n, m, rng);
    const CMatrix rho = random_density(m, rng);
    const CMatrix out = ch.apply(rho);
    CHECK_THAT(out.trace().real(), WithinAbs(1.0, 1e-9));
    CHECK(hermitian_eig(HermMatrix(out)).min_eigenvalue >= -1e-9);
    const CMatrix y = rng.gaussian(m, m);
    CHECK((ch.apply(y.adjoint()) - ch.apply(y).adjoint()).norm() < 1e-12);
  }
}

TEST_CASE("adjoint pairing", "[channel]") {
  const AdjointMap idv = adjoint(channels::identity(2));
  Rng rng(8);
  const CMatrix y = rng.gaussian(2, 2);
  CHECK(relative_residual(idv.apply(y), y) < 1e-14);

  const Channel meas = channels::measurement(2);
  const AdjointMap mv = adjoint(meas);
  const auto& mk = meas.kraus().operators();
  for (std::size_t i = 0; i < mk.size(); ++i)
    CHECK((mv.operators[i] - mk[i]).norm() < 1e-15);

  for (int t = 0; t < 20; ++t) {
    const int m = 2 + t % 2, n = 2 + (t / 2) % 3;
    const Channel ch = random_channel(m, n, 2 + t % 2, rng);
    const AdjointMap a = adjoint(ch);
    const CMatrix h1 = random_hermitian(m, rng), h2 = random_hermitian(n, rng);
    const Complex lhs = (ch.apply(h1).adjoint() * h2).trace();
    const Complex rhs = (h1.adjoint() * a.apply(h2)).trace();
    CHECK(std::abs(lhs - rhs) <= 1e-10);
    CHECK(a.unital_residual() <= 1e-10);
  }
}

TEST_CASE("validation reports", "[channel]") {
  const ChannelReport dep =
      validate(HermMatrix(0.5 * CMatrix::Identity(4, 4)), 2, 2);
  CHECK(dep.is_cp);
  CHECK(dep.is_tp);
  CHECK(dep.is_unital);
  CHECK(dep.choi_rank == 4);

  CMatrix z = CMatrix::Zero(4, 4);
  z(0, 0) = 2.0;
  const ChannelReport bad = validate(HermMatrix(z), 2, 2);
  CHECK_FALSE(bad.is_tp);
  CHECK(bad.diagnostic == "block trace (1,1) = 2.0, expected 1");

  const ChannelReport ad =
      validate(channels::amplitude_damping(0.5).choi().hermitian(), 2, 2);
  CHECK(ad.is_cp);
  CHECK(ad.is_tp);
  CHECK_FALSE(ad.is_unital);
  const CMatrix sum = diagonal_block_sum(
      channels::amplitude_damping(0.5).choi().matrix(), 2, 2);
  CHECK(std::abs(sum(0, 0) - 1.5) < 1e-14);
  CHECK(std::abs(sum(1, 1) - 0.5) < 1e-14);

  CHECK_THROWS_AS(validate(HermMatrix(z), 3, 2), ShapeError);
}

TEST_CASE("construction errors and repair", "[channel]") {
  CMatrix z = CMatrix::Zero(4, 4);
  z(0, 0) = 2.0;
  CHECK_THROWS_AS(Channel::from_choi(z, 2, 2), NotTracePreserving);

  CMatrix neg = 0.5 * CMatrix::Identity(4, 4);
  neg(0, 3) = neg(3, 0) = 0.9;
  CHECK_THROWS_AS(Channel::from_choi(neg, 2, 2), NotAChannel);

  CMatrix asym = channels::identity(2).choi().matrix();
  asym(0, 3) += 0.1;
  CHECK_THROWS_AS(Channel::from_choi(asym, 2, 2), NotAChannel);

  CHECK_THROWS_AS(Channel::from_choi(CMatrix::Identity(3, 3), 2, 2),
                  ShapeError);
  CHECK_THROWS_AS(KrausSet::from_operators(2, 2, {CMatrix::Identity(2, 3)}),
                  ShapeError);
  CHECK_THROWS_AS(KrausSet::from_operators(2, 2, {2.0 * CMatrix::Identity(2, 2)}),
                  NotTracePreserving);
  CHECK_THROWS_AS(Channel::from_kraus({CMatrix::Zero(2, 2)}), InvalidArgument);

  // Slightly off inputs are accepted, re-projected and flagged.
  CMatrix noisy = channels::amplitude_damping(0.3).choi().matrix();
  noisy(0, 0) += 1e-6;
  noisy(1, 1) -= 3e-6;
  const Channel fixed = Channel::from_choi(noisy, 2, 2);
  CHECK(fixed.reprojected());
  CHECK_FALSE(fixed.warnings().empty());
  CHECK(validate(fixed.choi().hermitian(), 2, 2).is_tp);
  CHECK(validate(fixed.choi().hermitian(), 2, 2).is_cp);
}

TEST_CASE("round trips", "[channel]") {
  Rng rng(12);
  for (int t = 0; t < 40; ++t) {
    const int m = 2 + t % 3, n = 2 + (t / 3) % 3;
    const int k = min_choi_rank(m, n) + t % (m - min_choi_rank(m, n) + 1);
    const Channel ch = random_channel(m, n, k, rng);
    const Channel back = Channel::from_kraus(ch.kraus().operators());
    CHECK(relative_residual(back.choi().matrix(), ch.choi().matrix()) <= 1e-10);
    const Channel again = Channel::from_choi(back.choi().matrix(), m, n);
    CHECK(relative_residual(again.choi().matrix(), back.choi().matrix()) <=
          1e-10);
  }
}

TEST_CASE("redundant Kraus sets are never shorter than the Choi rank",
          "[channel]") {
  Rng rng(13);
  for (int t = 0; t < 10; ++t) {
    const Channel ch = random_channel(2, 3, 2, rng);
    // Mix the two operators into four with a 4x2 isometry.
    const CMatrix v = random_unitary(4, rng).leftCols(2);
    std::vector<CMatrix> ops(4, CMatrix::Zero(3, 2));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 2; ++j) ops[i] += v(i, j) * ch.kraus()[std::size_t(j)];
    const Channel same = Channel::from_kraus(ops);
    CHECK(relative_residual(same.choi().matrix(), ch.choi().matrix()) <= 1e-10);
    CHECK(same.choi_rank() == 2);
    CHECK(same.kraus().size() <= ops.size());
  }
}

TEST_CASE("tensor products", "[channel]") {
  const Channel id4 = tensor(channels::identity(2), channels::identity(2));
  CHECK(relative_residual(id4.choi().matrix(),
                          channels::identity(4).choi().matrix()) < 1e-14);

  const Channel mm = tensor(channels::measurement(2), channels::measurement(2));
  const CMatrix in = kron(e(2, 0, 0), e(2, 1, 1));
  CHECK((mm.apply(in) - in).norm() < 1e-14);
  CMatrix mixed = kron(e(2, 0, 1), e(2, 1, 1));
  CHECK(mm.apply(mixed).norm() < 1e-14);

  Rng rng(14);
  for (int t = 0; t < 10; ++t) {
    const Channel a = random_channel(2, 2, 1 + t % 2, rng);
    const Channel b = random_channel(2, 3, 1 + t % 3, rng);
    const Channel ab = tensor(a, b);
    CHECK(ab.choi_rank() == a.choi_rank() * b.choi_rank());
    const CMatrix x = random_density(2, rng), y = random_density(2, rng);
    CHECK(relative_residual(ab.apply(kron(x, y)), kron(a.apply(x), b.apply(y))) <=
          1e-10);
  }
  CHECK_THROWS_AS(tensor(channels::identity(4), channels::identity(4), 64),
                  InvalidArgument);
}

TEST_CASE("direct sums", "[channel]") {
  CMatrix rho1(2, 2), rho2(2, 2);
  rho1 << 0.7, Complex(0.1, 0.2), Complex(0.1, -0.2), 0.3;
  rho2 << 0.4, 0.1, 0.1, 0.6;
  const Channel s =
      direct_sum(channels::state_preparation(rho1), channels::state_preparation(rho2));
  CMatrix x = CMatrix::Zero(2, 2);
  x(0, 0) = 0.25;
  x(1, 1) = 0.75;
  x(0, 1) = 0.3;
  x(1, 0) = 0.3;
  CHECK(relative_residual(s.apply(x), 0.25 * rho1 + 0.75 * rho2) < 1e-14);
  CHECK(s.choi_rank() == 4);

  const Channel meas = direct_sum(channels::state_preparation(e(2, 0, 0)),
                                  channels::state_preparation(e(2, 1, 1)));
  CHECK(relative_residual(meas.choi().matrix(),
                          channels::measurement(2).choi().matrix()) < 1e-14);
  CHECK(meas.choi_rank() == 2);

  CHECK_THROWS_AS(
      direct_sum(channels::identity(2), channels::state_preparation(
                                            CMatrix::Identity(3, 3) / 3.0)),
      ShapeError);
}
