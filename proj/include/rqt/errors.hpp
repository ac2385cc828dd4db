#pragma once

#include <stdexcept>
#include <string>

namespace rqt {

/// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// An argument violated a mathematical domain restriction (sign, range, ...).
class DomainError : public Error {
  public:
    using Error::Error;
};

/// A wave-function or density evaluation fell below the node floor, so a
/// quantity that divides by it is undefined at the query point.
class NodeError : public Error {
  public:
    using Error::Error;
};

/// An operation precondition (other than a plain domain restriction) failed;
/// the message says which and how to proceed.
class PreconditionError : public Error {
  public:
    using Error::Error;
};

/// A run configuration is internally inconsistent or unparseable.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// An intensity profile cannot support the requested extraction
/// (too few extrema, mismatched binning, ...).
class ProfileError : public Error {
  public:
    using Error::Error;
};

/// An ensemble-level numerical failure: too many trajectories aborted.
class EnsembleError : public Error {
  public:
    using Error::Error;
};

}  // namespace rqt
