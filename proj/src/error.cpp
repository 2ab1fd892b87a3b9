#include "freespec/error.hpp"

namespace freespec {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::AtomicMeasure: return "AtomicMeasure";
    case Errc::LowerHalfPlane: return "LowerHalfPlane";
    case Errc::NoClosedForm: return "NoClosedForm";
    case Errc::PoleAt: return "PoleAt";
    case Errc::ZeroCauchy: return "ZeroCauchy";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::GridMismatch: return "GridMismatch";
    case Errc::UnsupportedOrder: return "UnsupportedOrder";
    case Errc::DerivativeUnavailable: return "DerivativeUnavailable";
    case Errc::ThetaOutOfRange: return "ThetaOutOfRange";
    case Errc::StencilFailure: return "StencilFailure";
    case Errc::LeftUpperHalfPlane: return "LeftUpperHalfPlane";
    case Errc::NoConvergenceEig: return "NoConvergenceEig";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::DenominatorNearZero: return "DenominatorNearZero";
    case Errc::POutOfRange: return "POutOfRange";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Io: return "Io";
    case Errc::Usage: return "Usage";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

NoConvergenceError::NoConvergenceError(int iterations, double residual, const std::string& where)
    : Error(Errc::NoConvergence, where + " after " + std::to_string(iterations) +
                                     " iterations, residual " + std::to_string(residual)),
      iterations_(iterations),
      residual_(residual) {}

void fail(Errc code, const std::string& message) { throw Error(code, message); }

}  // namespace freespec
