#include "qent/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qent/dexp.hpp"
#include "qent/errors.hpp"
#include "qent/tolerances.hpp"

namespace qent {

namespace {

double mean(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / double(v.size());
}

double inf_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Solves (H + c J/n + ridge I) x = b by Gaussian elimination with partial
// pivoting. The rank-one J = ones ones^T term deflates the known null
// direction of H; for b orthogonal to ones the solution is the restriction
// of H^-1 b to the trace-free subspace.
std::vector<double> solve_deflated(const RealMatrix& h, std::vector<double> b) {
    const int n = h.dim();
    double tr = 0.0;
    for (int i = 0; i < n; ++i) tr += h(i, i);
    const double shift = std::max(tr / n, 1e-8) / n;
    const double ridge = 1e-14;

    std::vector<double> a(std::size_t(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a[std::size_t(i) * n + j] = h(i, j) + shift + (i == j ? ridge : 0.0);

    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[std::size_t(r) * n + col]) > std::abs(a[std::size_t(piv) * n + col])) piv = r;
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(a[std::size_t(col) * n + j], a[std::size_t(piv) * n + j]);
            std::swap(b[std::size_t(col)], b[std::size_t(piv)]);
        }
        const double d = a[std::size_t(col) * n + col];
        if (d == 0.0) throw NoConvergenceError("singular Newton system");
        for (int r = col + 1; r < n; ++r) {
            const double f = a[std::size_t(r) * n + col] / d;
            if (f == 0.0) continue;
            for (int j = col; j < n; ++j) a[std::size_t(r) * n + j] -= f * a[std::size_t(col) * n + j];
            b[std::size_t(r)] -= f * b[std::size_t(col)];
        }
    }
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int r = n - 1; r >= 0; --r) {
        double s = b[std::size_t(r)];
        for (int j = r + 1; j < n; ++j) s -= a[std::size_t(r) * n + j] * x[std::size_t(j)];
        x[std::size_t(r)] = s / a[std::size_t(r) * n + r];
    }
    return x;
}

}  // namespace

Multiplier::Multiplier(std::vector<double> values) : v_(std::move(values)) {
    if (v_.empty()) throw InvalidArgumentError("multiplier needs at least one component");
    double s = 0.0;
    for (double x : v_) s += x;
    if (std::abs(s) > default_tol.validation)
        throw InvalidArgumentError("multiplier trace " + std::to_string(s) + " is not gauge-fixed to 0");
}

SolveReport solve_lambda(std::span<const double> p, double tol, int max_iter) {
    const int n = int(p.size());
    if (n < 1) throw InvalidArgumentError("spectrum must be nonempty");
    if (tol <= 0.0 || max_iter < 1) throw InvalidArgumentError("tol must be > 0 and max_iter >= 1");

    double sum = 0.0;
    for (double pi : p) {
        if (pi < min_spectrum_eigenvalue)
            throw NearPureError("spectrum eigenvalue " + std::to_string(pi) + " is below " +
                                std::to_string(min_spectrum_eigenvalue) +
                                "; the multiplier diverges for (near-)pure states");
        sum += pi;
    }
    if (std::abs(sum - 1.0) > default_tol.validation)
        throw NotNormalizedError("spectrum sums to " + std::to_string(sum) + ", expected 1");

    std::vector<double> lambda(static_cast<std::size_t>(n), 0.0);
    double g = log_partition(lambda);  // objective at lambda = 0
    std::vector<double> residual(static_cast<std::size_t>(n));
    double gnorm = 0.0;
    int iter = 0;
    bool converged = false;

    for (;; ++iter) {
        const std::vector<double> m = moment_map(lambda);
        for (int i = 0; i < n; ++i) residual[std::size_t(i)] = p[std::size_t(i)] - m[std::size_t(i)];
        gnorm = inf_norm(residual);
        if (gnorm <= tol) {
            converged = true;
            break;
        }
        if (iter >= max_iter) break;

        const RealMatrix h = hessian_log_partition(lambda);
        std::vector<double> rhs = residual;
        const double rbar = mean(rhs);
        for (double& x : rhs) x -= rbar;  // project onto the trace-free slice
        std::vector<double> step = solve_deflated(h, std::move(rhs));
        const double sbar = mean(step);
        for (double& x : step) x -= sbar;

        // Newton direction for a minimum is -H^-1 grad with grad = residual.
        const double slope = -dot(residual, step);

        // Once the predicted decrease falls below the rounding noise of the
        // objective, the Armijo comparison is meaningless; the problem is
        // convex and the iterate is within sqrt(eps) of the optimum, so take
        // the plain Newton step.
        double lam_scale = 0.0;
        for (double x : lambda) lam_scale += std::abs(x);
        if (-slope <= 1e-13 * (1.0 + std::abs(g) + lam_scale)) {
            for (int i = 0; i < n; ++i) lambda[std::size_t(i)] -= step[std::size_t(i)];
            g = dot(lambda, p) + log_partition(lambda);
            continue;
        }

        double t = 1.0;
        bool accepted = false;
        for (int back = 0; back < 60; ++back) {
            std::vector<double> trial(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) trial[std::size_t(i)] = lambda[std::size_t(i)] - t * step[std::size_t(i)];
            const double gt = dot(trial, p) + log_partition(trial);
            if (gt <= g + 1e-4 * t * slope) {
                lambda = std::move(trial);
                g = gt;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;  // stalled line search: report the best iterate
    }

    const double lbar = mean(lambda);
    for (double& x : lambda) x -= lbar;
    const double lnz = log_partition(lambda);
    return SolveReport{Multiplier(lambda), dot(lambda, p) + lnz, lnz, gnorm, iter, converged};
}

double entropy_dual(std::span<const double> p) {
    return solve_lambda(p).entropy;
}

}  // namespace qent
