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

// Named channels used throughout the tests and fixtures.

#pragma once

#include <cmath>
#include <vector>

#include "qchan/channel.hpp"

namespace qchan::channels {

inline Channel identity(int d) {
  return Channel::from_kraus({CMatrix::Identity(d, d)});
}

/// X -> U X U^*
inline Channel unitary(const CMatrix& u) { return Channel::from_kraus({u}); }

/// Complete dephasing in the computational basis, K_i = e_i e_i^T.
inline Channel measurement(int d) {
  std::vector<CMatrix> ops;
  for (int i = 0; i < d; ++i) {
    CMatrix k = CMatrix::Zero(d, d);
    k(i, i) = 1.0;
    ops.push_back(k);
  }
  return Channel::from_kraus(ops);
}

/// Qubit amplitude damping with decay probability gamma.
inline Channel amplitude_damping(double gamma) {
  CMatrix k0 = CMatrix::Zero(2, 2), k1 = CMatrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  k1(0, 1) = std::sqrt(gamma);
  if (gamma == 0.0) return Channel::from_kraus({k0});
  return Channel::from_kraus({k0, k1});
}

/// Completely depolarizing qubit channel, X -> tr(X) I/2.
inline Channel depolarizing_qubit() {
  std::vector<CMatrix> ops;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      CMatrix k = CMatrix::Zero(2, 2);
      k(i, j) = 1.0 / std::sqrt(2.0);
      ops.push_back(k);
    }
  return Channel::from_kraus(ops);
}

inline CMatrix pauli_z() {
  CMatrix z = CMatrix::Identity(2, 2);
  z(1, 1) = -1.0;
  return z;
}

/// The 1 -> n channel whose single output is the density matrix rho.
inline Channel state_preparation(const CMatrix& rho) {
  return Channel::from_choi(rho, 1, static_cast<int>(rho.rows()));
}

}  // namespace qchan::channels
