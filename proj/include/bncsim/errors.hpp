#pragma once

#include <stdexcept>
#include <string>

namespace bncsim {

// Every failure the simulator reports on purpose derives from Error.
// Precondition violations on argument values use std::invalid_argument.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A comparator word that the signal model cannot produce.
class InconsistentWord : public Error {
 public:
  using Error::Error;
};

class NotSiftable : public Error {
 public:
  using Error::Error;
};

class EmptySiftedKey : public Error {
 public:
  using Error::Error;
};

// Link-budget inputs that would require optical gain.
class NonPhysical : public Error {
 public:
  using Error::Error;
};

// A ratio whose denominator is zero.
class Undefined : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class MissingFluxPoint : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace bncsim
