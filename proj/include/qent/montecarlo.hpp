#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qent/matrix.hpp"
#include "qent/rng.hpp"
#include "qent/spectral.hpp"

namespace qent {

/// Deterministic sampling plan. Stream j draws from CounterRng(seed + j);
/// partial sums are combined in ascending stream order, so the estimate is
/// a pure function of the config.
struct SamplerConfig {
    std::uint64_t seed = 0;
    std::int64_t samples = 0;
    int streams = 1;

    SamplerConfig(std::uint64_t seed_, std::int64_t samples_, int streams_ = 1);
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t samples = 0;
};

struct McMatrixEstimate {
    Matrix mean;               // Hermitian, unit trace
    RealMatrix std_error_re;   // per-entry standard errors, real parts
    RealMatrix std_error_im;
    std::int64_t samples = 0;
};

struct McCovariance {
    RealMatrix mean;
    RealMatrix std_error;
    std::int64_t samples = 0;
};

/// One draw from the unitarily invariant (Fubini-Study volume) distribution:
/// independent standard complex Gaussians, normalized. The squared moduli
/// are uniform on the probability simplex.
PureState sample_haar(int dim, CounterRng& rng);

/// ln Z(lambda) from the plain Haar average of exp(-lambda . t), with a
/// delta-method standard error.
McEstimate estimate_log_partition(std::span<const double> lambda, const SamplerConfig& config);

/// Importance-weighted first moment of the projector: the density matrix of
/// the canonical ensemble. With `basis` non-null, lambda is diagonal in that
/// basis and the estimate is returned in the original basis.
McMatrixEstimate estimate_density_matrix(std::span<const double> lambda, const Matrix* basis,
                                         const SamplerConfig& config);

/// Phase-space entropy -E[w ln w] of the canonical density w = e^{-lambda.t}/Z,
/// with Z from the closed form.
McEstimate estimate_entropy(std::span<const double> lambda, const SamplerConfig& config);

/// Importance-weighted mean of an arbitrary real observable on pure states
/// under the canonical ensemble (ratio estimator).
McEstimate estimate_expectation(const std::function<double(const PureState&)>& observable,
                                std::span<const double> lambda, const SamplerConfig& config);

/// Weighted covariance of the simplex coordinates under the canonical
/// ensemble: the Monte Carlo counterpart of hessian_log_partition.
McCovariance estimate_projector_covariance(std::span<const double> lambda, const SamplerConfig& config);

struct QuadratureResult {
    double log_z = 0.0;
    std::vector<double> p;
};

/// Deterministic adaptive Simpson quadrature of the simplex integrals for
/// n <= 3. Ground truth for the divided-difference route in tests.
QuadratureResult simplex_quadrature(std::span<const double> lambda, double tol = 1e-11);

/// Haar-distributed unitary (Gaussian matrix + modified Gram-Schmidt with
/// the diagonal phase fixed).
Matrix random_unitary(int dim, CounterRng& rng);

/// Random full-rank density matrix: Dirichlet-like spectrum with a floor,
/// conjugated by a Haar unitary.
DensityMatrix random_density(int dim, CounterRng& rng, double min_eigenvalue = 5e-3);

}  // namespace qent
