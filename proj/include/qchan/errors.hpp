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

#pragma once

#include <stdexcept>
#include <string>

namespace qchan {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand dimensions do not fit together.
class ShapeError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An algorithm failed to converge or an internal cross-check disagreed.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// A matrix required to be positive semidefinite has a negative eigenvalue
/// beyond tolerance.
class NotPsdError : public Error {
 public:
  using Error::Error;
};

class SingularityError : public Error {
 public:
  using Error::Error;
};

/// The data does not describe a completely positive trace preserving map,
/// even after re-projection within the repair tolerance.
class NotAChannel : public Error {
 public:
  using Error::Error;
};

class NotTracePreserving : public NotAChannel {
 public:
  using NotAChannel::NotAChannel;
};

/// The operation is defined only for a restricted class of inputs
/// (e.g. fixed dimensions) and the input lies outside it.
/// Malformed input file or document.
class FormatError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace qchan
