#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace qent {

// Base class for all library failures. `kind` is a stable machine-readable
// tag; the CLI maps kinds to exit codes and error JSON.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

struct NotHermitianError : Error {
    explicit NotHermitianError(const std::string& m) : Error("not_hermitian", m) {}
};

struct TraceNotOneError : Error {
    explicit TraceNotOneError(const std::string& m) : Error("trace_not_one", m) {}
};

struct NotPositiveError : Error {
    explicit NotPositiveError(const std::string& m) : Error("not_positive", m) {}
};

struct DimensionMismatchError : Error {
    explicit DimensionMismatchError(const std::string& m) : Error("dimension_mismatch", m) {}
};

struct NoConvergenceError : Error {
    explicit NoConvergenceError(const std::string& m) : Error("no_convergence", m) {}
};

struct SpreadTooLargeError : Error {
    explicit SpreadTooLargeError(const std::string& m) : Error("spread_too_large", m) {}
};

struct NearPureError : Error {
    explicit NearPureError(const std::string& m) : Error("near_pure", m) {}
};

struct NotNormalizedError : Error {
    explicit NotNormalizedError(const std::string& m) : Error("not_normalized", m) {}
};

struct ToleranceNotReachedError : Error {
    explicit ToleranceNotReachedError(const std::string& m) : Error("tolerance_not_reached", m) {}
};

struct InvalidArgumentError : Error {
    explicit InvalidArgumentError(const std::string& m) : Error("invalid_argument", m) {}
};

}  // namespace qent
