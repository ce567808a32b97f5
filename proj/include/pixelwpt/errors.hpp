// SPDX-License-Identifier: Apache-2.0
//
// pixelwpt: pixel-antenna MIMO wireless power transfer simulation library

#pragma once

#include <stdexcept>
#include <string>

namespace pixelwpt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes are not conformable.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// The loaded pixel-port matrix Z_PP + Z_L(b) is numerically singular.
class SingularLoadedNetwork : public Error {
 public:
  using Error::Error;
};

/// The open-circuit pattern matrix is identically zero.
class ZeroPatternMatrix : public Error {
 public:
  using Error::Error;
};

/// A coder radiates nothing through the pattern basis.
class DegenerateRadiator : public Error {
 public:
  explicit DegenerateRadiator(const std::string& what, int antenna_index = -1)
      : Error(what), antenna_index_(antenna_index) {}
  int antenna_index() const { return antenna_index_; }

 private:
  int antenna_index_;
};

/// Requested basis rank cannot be realized by the antenna geometry.
class InfeasibleRank : public Error {
 public:
  using Error::Error;
};

/// Harmonic moments are defined for even orders >= 2 only.
class OddOrder : public Error {
 public:
  using Error::Error;
};

/// An optimizer objective returned NaN or Inf.
class ObjectiveNonFinite : public Error {
 public:
  using Error::Error;
};

/// The channel matrix is identically zero.
class ZeroChannel : public Error {
 public:
  using Error::Error;
};

class EmptyCodebook : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment configuration; carries the offending field path.
class ConfigInvalid : public Error {
 public:
  ConfigInvalid(const std::string& field, const std::string& what)
      : Error(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace pixelwpt
