#pragma once

#include <stdexcept>
#include <string>

namespace freespec {

enum class Errc {
  AtomicMeasure,
  LowerHalfPlane,
  NoClosedForm,
  PoleAt,
  ZeroCauchy,
  NoConvergence,
  GridMismatch,
  UnsupportedOrder,
  DerivativeUnavailable,
  ThetaOutOfRange,
  StencilFailure,
  LeftUpperHalfPlane,
  NoConvergenceEig,
  EmptyInput,
  DimensionMismatch,
  DenominatorNearZero,
  POutOfRange,
  InvalidArgument,
  Io,
  Usage,
};

const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Thrown by iterative solvers that exhaust their budget.
class NoConvergenceError : public Error {
 public:
  NoConvergenceError(int iterations, double residual, const std::string& where);
  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  int iterations_;
  double residual_;
};

[[noreturn]] void fail(Errc code, const std::string& message);

inline void require(bool cond, Errc code, const char* message) {
  if (!cond) fail(code, message);
}

}  // namespace freespec
