#include "qent/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace qent {

namespace {

double offdiag_frobenius(const Matrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

double frobenius(const Matrix& a) {
    double s = 0.0;
    for (const cplx& z : a.entries()) s += std::norm(z);
    return std::sqrt(s);
}

// Rotate the largest-magnitude component of each eigenvector column onto the
// positive real axis (ties: lowest index), so repeated runs and permuted
// inputs produce identical vectors.
void fix_phases(Matrix& v) {
    const int n = v.dim();
    for (int j = 0; j < n; ++j) {
        int kmax = 0;
        double best = -1.0;
        for (int k = 0; k < n; ++k) {
            const double m = std::abs(v(k, j));
            if (m > best) {
                best = m;
                kmax = k;
            }
        }
        if (best <= 0.0) continue;
        const cplx phase = std::conj(v(kmax, j)) / best;
        for (int k = 0; k < n; ++k) v(k, j) *= phase;
        v(kmax, j) = cplx(std::abs(v(kmax, j)), 0.0);
    }
}

}  // namespace

Spectrum eigh(const Matrix& hermitian) {
    const double herm = hermitian.hermiticity_residual();
    if (herm > default_tol.validation)
        throw NotHermitianError("matrix deviates from Hermitian by " + std::to_string(herm));

    const int n = hermitian.dim();
    // Work on the exact Hermitian average so the rotations see a symmetric
    // problem even when the input carries roundoff asymmetry.
    Matrix a(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = 0.5 * (hermitian(i, j) + std::conj(hermitian(j, i)));
    Matrix v = Matrix::identity(n);

    const double target = 1e-13 * std::max(frobenius(a), 1e-300);
    const int max_sweeps = 40;
    bool converged = false;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (offdiag_frobenius(a) <= target) {
            converged = true;
            break;
        }
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag == 0.0) continue;
                const cplx phase = apq / mag;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * mag);
                const double tt = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                               : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + tt * tt);
                const double s = tt * c;
                const cplx spq = s * phase;

                for (int k = 0; k < n; ++k) {  // columns p, q of A and V
                    const cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - std::conj(spq) * akq;
                    a(k, q) = spq * akp + c * akq;
                    const cplx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - std::conj(spq) * vkq;
                    v(k, q) = spq * vkp + c * vkq;
                }
                for (int k = 0; k < n; ++k) {  // rows p, q of A
                    const cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - spq * aqk;
                    a(q, k) = std::conj(spq) * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = cplx(a(p, p).real(), 0.0);
                a(q, q) = cplx(a(q, q).real(), 0.0);
            }
    }
    if (!converged && offdiag_frobenius(a) > target)
        throw NoConvergenceError("Jacobi sweeps did not reach the off-diagonal target after " +
                                 std::to_string(max_sweeps) + " sweeps");

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return a(x, x).real() > a(y, y).real(); });

    Spectrum out;
    out.eigenvalues.resize(static_cast<std::size_t>(n));
    out.eigenvectors = Matrix(n);
    for (int j = 0; j < n; ++j) {
        out.eigenvalues[std::size_t(j)] = a(order[std::size_t(j)], order[std::size_t(j)]).real();
        for (int k = 0; k < n; ++k) out.eigenvectors(k, j) = v(k, order[std::size_t(j)]);
    }
    fix_phases(out.eigenvectors);
    return out;
}

Matrix compose_from_spectrum(const Spectrum& spectrum) {
    const int n = spectrum.eigenvectors.dim();
    Matrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cplx s = 0.0;
            for (int k = 0; k < n; ++k)
                s += spectrum.eigenvalues[std::size_t(k)] * spectrum.eigenvectors(i, k) *
                     std::conj(spectrum.eigenvectors(j, k));
            m(i, j) = s;
        }
    return m;
}

DensityMatrix validate_density(const Matrix& matrix, double tol) {
    const double herm = matrix.hermiticity_residual();
    if (herm > tol)
        throw NotHermitianError("density matrix deviates from Hermitian by " + std::to_string(herm));

    const cplx tr = matrix.trace();
    const double tr_dev = std::abs(tr - cplx(1.0));
    if (tr_dev > tol)
        throw TraceNotOneError("density matrix trace deviates from 1 by " + std::to_string(tr_dev));

    Spectrum spec = eigh(matrix);
    const double min_eig = spec.eigenvalues.back();
    if (min_eig < -tol)
        throw NotPositiveError("density matrix has eigenvalue " + std::to_string(min_eig));

    if (min_eig < 0.0) {
        // Clip the tiny negatives and renormalize on the eigenbasis.
        double sum = 0.0;
        for (double& p : spec.eigenvalues) {
            p = std::max(p, 0.0);
            sum += p;
        }
        for (double& p : spec.eigenvalues) p /= sum;
        return DensityMatrix(compose_from_spectrum(spec));
    }
    return DensityMatrix(matrix);
}

Matrix projector(const PureState& state) {
    const int n = state.dim();
    Matrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = state[i] * std::conj(state[j]);
    return m;
}

double expectation_linear(const Matrix& observable, const DensityMatrix& rho) {
    if (observable.dim() != rho.dim())
        throw DimensionMismatchError("observable dim " + std::to_string(observable.dim()) +
                                     " does not match state dim " + std::to_string(rho.dim()));
    const double herm = observable.hermiticity_residual();
    if (herm > default_tol.validation)
        throw NotHermitianError("observable deviates from Hermitian by " + std::to_string(herm));

    const int n = observable.dim();
    cplx t = 0.0;
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) t += rho.matrix()(i, k) * observable(k, i);

    const double scale = std::max(1.0, observable.max_abs());
    if (std::abs(t.imag()) > default_tol.arithmetic * scale)
        throw NotHermitianError("trace expectation has imaginary residue " + std::to_string(t.imag()));
    return t.real();
}

std::vector<double> transition_weights(const PureState& initial, const Spectrum& basis) {
    const int n = basis.eigenvectors.dim();
    if (initial.dim() != n)
        throw DimensionMismatchError("state dim " + std::to_string(initial.dim()) +
                                     " does not match basis dim " + std::to_string(n));
    std::vector<double> w(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        cplx overlap = 0.0;
        for (int k = 0; k < n; ++k) overlap += std::conj(basis.eigenvectors(k, i)) * initial[k];
        w[std::size_t(i)] = std::norm(overlap);
    }
    return w;
}

}  // namespace qent
