#pragma once

#include <span>
#include <vector>

#include "qent/matrix.hpp"

namespace qent {

/// Eigenvalues (descending) and matching orthonormal eigenvector columns of
/// a Hermitian matrix.
struct Spectrum {
    std::vector<double> eigenvalues;
    Matrix eigenvectors;
};

/// A matrix checked to be Hermitian, unit-trace and positive semidefinite.
/// Construct via validate_density.
class DensityMatrix {
public:
    const Matrix& matrix() const noexcept { return mat_; }
    int dim() const noexcept { return mat_.dim(); }

private:
    friend DensityMatrix validate_density(const Matrix&, double);
    explicit DensityMatrix(Matrix m) : mat_(std::move(m)) {}
    Matrix mat_;
};

/// Checks Hermiticity, unit trace and positivity. Eigenvalues in [-tol, 0)
/// are clipped to zero and the state renormalized; anything below -tol is an
/// error. Throws NotHermitianError, TraceNotOneError or NotPositiveError,
/// each naming the offending magnitude.
DensityMatrix validate_density(const Matrix& matrix, double tol = default_tol.validation);

/// Cyclic Jacobi eigensolver for complex Hermitian matrices. Deterministic:
/// fixed sweep order, descending eigenvalue sort (stable), and each
/// eigenvector's largest-magnitude component made real positive.
Spectrum eigh(const Matrix& hermitian);

/// Rank-one projector psi psi^dagger.
Matrix projector(const PureState& state);

/// trace(rho F) for Hermitian F; the imaginary residue is checked and
/// discarded.
double expectation_linear(const Matrix& observable, const DensityMatrix& rho);

/// w_i = |<eigenvector_i, initial>|^2; a probability distribution.
std::vector<double> transition_weights(const PureState& initial, const Spectrum& basis);

/// V diag(p) V^dagger; inverse of eigh up to roundoff.
Matrix compose_from_spectrum(const Spectrum& spectrum);

}  // namespace qent
