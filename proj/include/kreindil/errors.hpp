#pragma once

#include <stdexcept>
#include <string>

namespace kreindil {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: wrong shapes, non-finite entries, out-of-range parameters.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A dense kernel failed (overflow, singular system, no convergence).
class NumericsError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature ran out of subdivision depth before meeting tolerance.
class AccuracyError : public NumericsError {
 public:
  AccuracyError(const std::string& what, double achieved, double requested)
      : NumericsError(what), achieved_(achieved), requested_(requested) {}
  double achieved() const noexcept { return achieved_; }
  double requested() const noexcept { return requested_; }

 private:
  double achieved_;
  double requested_;
};

/// λ too close to σ(A) for a trustworthy resolvent.
class SpectrumProximityError : public NumericsError {
 public:
  using NumericsError::NumericsError;
};

/// A mathematical hypothesis (dissipativity, sector bound, ...) does not hold.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// The caller violated an operation's precondition, e.g. S_k(h) <= 0.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The embedded copy of the base space degenerated in the finite section.
class RegularityError : public Error {
 public:
  using Error::Error;
};

/// A finite-section operator was applied outside its index window.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Two independent evaluation routes disagree beyond tolerance.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace kreindil
