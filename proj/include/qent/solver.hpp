#pragma once

#include <span>
#include <vector>

#include "qent/matrix.hpp"

namespace qent {

/// Spectra with eigenvalues below this have no finite multiplier (the
/// entropy diverges to -inf); solve_lambda rejects them as NearPure.
inline constexpr double min_spectrum_eigenvalue = 1e-6;

/// Gauge-fixed multiplier eigenvalues: sum(values) = 0.
class Multiplier {
public:
    explicit Multiplier(std::vector<double> values);
    const std::vector<double>& values() const noexcept { return v_; }
    int dim() const noexcept { return int(v_.size()); }

private:
    std::vector<double> v_;
};

struct SolveReport {
    Multiplier multiplier;
    double entropy;        // lambda . p + ln Z at the solution
    double log_partition;  // ln Z at the solution
    double gradient_norm;  // inf-norm of p - moment_map(lambda)
    int iterations;
    bool converged;
};

/// Finds the trace-free lambda with moment_map(lambda) = p by damped Newton
/// on the convex objective g(lambda) = lambda . p + ln Z(lambda); the
/// stationary value is the phase-space entropy. If the iteration budget runs
/// out the best iterate is returned with converged = false.
SolveReport solve_lambda(std::span<const double> p, double tol = 1e-10, int max_iter = 100);

/// Entropy of the spectrum p: the stationary value of solve_lambda.
double entropy_dual(std::span<const double> p);

}  // namespace qent
