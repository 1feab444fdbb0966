#pragma once

#include <stdexcept>
#include <string>

namespace doubtfire {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two payloads or criteria operands with different dimensions were combined.
/// Always a protocol bug, never a soft error.
class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

/// A second entry with the same (task, origin) was inserted into a cache.
class DuplicateEntry : public Error {
 public:
  using Error::Error;
};

/// resolve() was asked to decide on a dubious remote outcome without a local
/// one; the harness must run the task first.
class NeedLocalComputation : public Error {
 public:
  using Error::Error;
};

/// Both teams produced outcomes carrying an infinite NaN or admissibility
/// criterion; the run cannot continue.
class FatalCorruption : public Error {
 public:
  using Error::Error;
};

/// A check task polled more often than the configured bound without its
/// counterpart outcome arriving.
class StarvationGuard : public Error {
 public:
  using Error::Error;
};

/// The corrector ran while a cell had no approved outcome.
class MissingVerdict : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace doubtfire
