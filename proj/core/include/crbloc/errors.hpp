#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace crbloc {

/// Machine-readable failure categories. The CLI prints them as
/// `error[<name>]: <message>` so scripts can dispatch on the bracketed name.
enum class ErrorCode {
    DegenerateGeometry,    // target coincides with a beacon
    InvalidScenario,       // scenario invariants violated
    InvalidModel,          // bias model parameters violate their invariants
    UnsupportedOperation,  // e.g. density evaluation on a point mass
    ConvergenceFailure,    // quadrature ran out of depth before tolerance
    DomainError,           // non-finite integrand, bad interval, bad argument
    OutsideSupport,        // marginal density underflowed at the probe point
    NoClosedForm,          // closed-form coefficient requested for a variant without one
    ApproximationDomain,   // first-order coefficient requested with kappa >= sigma
    UnobservableGeometry,  // FIM singular or condition number over the guard
    EnumerationTooLarge,   // joint estimator asked to enumerate more than 2^16 hypotheses
    OptimizationFailure,   // no simplex start converged
    ParseError,            // scenario file unreadable or structurally invalid
};

inline const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::DegenerateGeometry: return "degenerate-geometry";
        case ErrorCode::InvalidScenario: return "invalid-scenario";
        case ErrorCode::InvalidModel: return "invalid-model";
        case ErrorCode::UnsupportedOperation: return "unsupported-operation";
        case ErrorCode::ConvergenceFailure: return "convergence-failure";
        case ErrorCode::DomainError: return "domain-error";
        case ErrorCode::OutsideSupport: return "outside-support";
        case ErrorCode::NoClosedForm: return "no-closed-form";
        case ErrorCode::ApproximationDomain: return "approximation-domain";
        case ErrorCode::UnobservableGeometry: return "unobservable-geometry";
        case ErrorCode::EnumerationTooLarge: return "enumeration-too-large";
        case ErrorCode::OptimizationFailure: return "optimization-failure";
        case ErrorCode::ParseError: return "parse-error";
    }
    return "unknown";
}

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

/// Quadrature gave up before reaching tolerance; carries the best estimate.
class ConvergenceFailureError : public Error {
  public:
    ConvergenceFailureError(const std::string& message, double best_value,
                            double error_estimate)
        : Error(ErrorCode::ConvergenceFailure, message),
          best_value_(best_value),
          error_estimate_(error_estimate) {}

    double best_value() const { return best_value_; }
    double error_estimate() const { return error_estimate_; }

  private:
    double best_value_;
    double error_estimate_;
};

/// Every simplex start hit the iteration cap; carries the best iterate found.
class OptimizationFailureError : public Error {
  public:
    OptimizationFailureError(const std::string& message,
                             std::vector<double> best_location,
                             double best_loglik)
        : Error(ErrorCode::OptimizationFailure, message),
          best_location_(std::move(best_location)),
          best_loglik_(best_loglik) {}

    const std::vector<double>& best_location() const { return best_location_; }
    double best_loglik() const { return best_loglik_; }

  private:
    std::vector<double> best_location_;
    double best_loglik_;
};

}  // namespace crbloc
