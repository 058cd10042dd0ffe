#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace topovote {

/// Base class of every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};
struct InvalidPoint : Error {
  using Error::Error;
};
struct NearZeroVector : Error {
  using Error::Error;
};
struct AntipodalPair : Error {
  using Error::Error;
};
struct UnsupportedDimension : Error {
  using Error::Error;
};
struct IndexOutOfRange : Error {
  using Error::Error;
};
struct BadParams : Error {
  using Error::Error;
};
struct BadK : Error {
  using Error::Error;
};

/// A partial rule was evaluated on (or too close to) its singular set.
struct UndefinedAtProfile : Error {
  using Error::Error;
};

/// A sphere self-map hit the singular set of its underlying rule.
/// Carries the offending point(s) as raw coordinate lists.
struct UndefinedAtPoint : Error {
  explicit UndefinedAtPoint(const std::string& what,
                            std::vector<std::vector<double>> where = {})
      : Error(what), locations(std::move(where)) {}
  std::vector<std::vector<double>> locations;
};

struct TwinPreconditionViolated : Error {
  using Error::Error;
};
struct NotAntipodal : Error {
  using Error::Error;
};
struct RefinementExceeded : Error {
  using Error::Error;
};
struct NonIntegerTotal : Error {
  using Error::Error;
};
struct StarConditionFailed : Error {
  using Error::Error;
};
struct TargetDisagreement : Error {
  using Error::Error;
};
struct IncompleteReport : Error {
  using Error::Error;
};

/// The antipodal-point descent stalled above tolerance on every start.
struct AntipodeSearchStalled : Error {
  AntipodeSearchStalled(const std::string& what, double best)
      : Error(what), best_residual(best) {}
  double best_residual;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace topovote
