// Copyright 2026 The cohist Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cohist {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(int expected, int actual)
      : Error("dimension mismatch: expected " + std::to_string(expected) +
              ", got " + std::to_string(actual)),
        expected(expected),
        actual(actual) {}
  int expected;
  int actual;
};

class NotAProjector : public Error {
 public:
  NotAProjector(const std::string& what, double residual)
      : Error("not a projector: " + what + " residual " +
              std::to_string(residual)),
        residual(residual) {}
  double residual;
};

class DependentVectors : public Error {
 public:
  explicit DependentVectors(std::size_t index)
      : Error("vector " + std::to_string(index) +
              " is linearly dependent on the preceding ones"),
        index(index) {}
  std::size_t index;
};

class NotOrthogonal : public Error {
 public:
  NotOrthogonal(std::size_t i, std::size_t j)
      : Error("members " + std::to_string(i) + " and " + std::to_string(j) +
              " are not orthogonal"),
        i(i),
        j(j) {}
  std::size_t i;
  std::size_t j;
};

class DoesNotSumToIdentity : public Error {
 public:
  explicit DoesNotSumToIdentity(double residual)
      : Error("members do not sum to the identity (residual " +
              std::to_string(residual) + ")"),
        residual(residual) {}
  double residual;
};

class ZeroMember : public Error {
 public:
  explicit ZeroMember(std::size_t index)
      : Error("member " + std::to_string(index) +
              " is the zero projector (allow_zero_members is off)"),
        index(index) {}
  std::size_t index;
};

class ExplosionGuard : public Error {
 public:
  ExplosionGuard(std::size_t cap)
      : Error("enumeration exceeds the cap of " + std::to_string(cap)),
        cap(cap) {}
  std::size_t cap;
};

class HistoryNotInFamily : public Error {
 public:
  HistoryNotInFamily() : Error("history is not in the family") {}
};

class InconsistentFamily : public Error {
 public:
  explicit InconsistentFamily(double max_off_diagonal_re)
      : Error("family is not weakly decoherent (max |Re D| = " +
              std::to_string(max_off_diagonal_re) + ")"),
        max_off_diagonal_re(max_off_diagonal_re) {}
  double max_off_diagonal_re;
};

class ZeroConditioningEvent : public Error {
 public:
  explicit ZeroConditioningEvent(double probability)
      : Error("conditioning history has probability " +
              std::to_string(probability)),
        probability(probability) {}
  double probability;
};

class NotConjoinable : public Error {
 public:
  explicit NotConjoinable(const std::string& why)
      : Error("histories cannot be conjoined: " + why) {}
};

class NonCommutingSlot : public Error {
 public:
  NonCommutingSlot(std::size_t slot, std::size_t i, std::size_t j)
      : Error("projectors " + std::to_string(i) + " and " + std::to_string(j) +
              " in slot " + std::to_string(slot) + " do not commute"),
        slot(slot),
        i(i),
        j(j) {}
  std::size_t slot;
  std::size_t i;
  std::size_t j;
};

class HistoryNotInAnyConsistentFamily : public Error {
 public:
  HistoryNotInAnyConsistentFamily()
      : Error("history belongs to no family of the catalog") {}
};

class InconsistentCatalogFamily : public Error {
 public:
  explicit InconsistentCatalogFamily(std::size_t index)
      : Error("catalog family " + std::to_string(index) +
              " is not weakly decoherent"),
        index(index) {}
  std::size_t index;
};

class ZeroWeightSum : public Error {
 public:
  ZeroWeightSum() : Error("membership weights sum to zero") {}
};

class UnknownSystem : public Error {
 public:
  explicit UnknownSystem(std::size_t id)
      : Error("unknown system " + std::to_string(id)), id(id) {}
  std::size_t id;
};

class NotAContraryPair : public Error {
 public:
  NotAContraryPair()
      : Error("families do not carry a contrary inference for the history") {}
};

class CatalogMissingFamily : public Error {
 public:
  explicit CatalogMissingFamily(const std::string& which)
      : Error("catalog lacks required family " + which) {}
};

}  // namespace cohist
