#include "qent/entropy.hpp"

#include <cmath>
#include <string>

#include "qent/dexp.hpp"
#include "qent/errors.hpp"
#include "qent/tolerances.hpp"

namespace qent {

namespace {

double shannon(std::span<const double> p) {
    double s = 0.0;
    for (double pi : p)
        if (pi > 0.0) s -= pi * std::log(pi);
    return s;
}

// ln(sinh(x)/x), stable across the whole guard range.
double log_sinhc(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-4) {
        const double x2 = x * x;
        return x2 / 6.0 - x2 * x2 / 180.0;
    }
    return ax + std::log1p(-std::exp(-2.0 * ax)) - std::log(2.0 * ax);
}

// d rho_1 / d Delta = -1/Delta^2 + e^Delta / (1 - e^Delta)^2, with the same
// series switch as two_state_rho1 and an overflow-free branch for Delta > 0.
double two_state_rho1_prime(double delta) {
    if (std::abs(delta) < 1e-3) return -1.0 / 12.0 + delta * delta / 240.0;
    const double a = -std::abs(delta);
    const double u = std::expm1(a);  // in (-1, 0)
    const double tilt = std::exp(a) / (u * u);
    return -1.0 / (delta * delta) + tilt;
}

}  // namespace

double von_neumann(const DensityMatrix& rho) {
    const Spectrum spec = eigh(rho.matrix());
    return shannon(spec.eigenvalues);
}

EntropyReport quantum_shannon(const DensityMatrix& rho, double offset) {
    const Spectrum spec = eigh(rho.matrix());
    std::vector<double> p = spec.eigenvalues;
    for (double& pi : p) pi = std::max(pi, 0.0);

    SolveReport solved = [&] {
        try {
            return solve_lambda(p);
        } catch (const NearPureError& e) {
            throw NearPureError(std::string(e.what()) +
                                "; smooth the state, rho -> (1-eps) rho + eps I/n, to regularize");
        }
    }();

    EntropyReport report{std::move(p),
                         shannon(spec.eigenvalues),
                         solved.entropy + offset,
                         0.0,
                         std::move(solved.multiplier),
                         offset,
                         solved.iterations,
                         solved.gradient_norm};
    report.difference = report.s_rho - report.s_von_neumann;
    return report;
}

double two_state_rho1(double delta) {
    if (!std::isfinite(delta)) throw InvalidArgumentError("delta must be finite");
    if (std::abs(delta) < 1e-3) {
        // rho_1 = 1/2 - Delta/12 + Delta^3/720 + O(Delta^5)
        return 0.5 - delta / 12.0 + delta * delta * delta / 720.0;
    }
    // 1/(1 - e^Delta) = -1/expm1(Delta); expm1 saturates harmlessly.
    return 1.0 / delta - 1.0 / std::expm1(delta);
}

TwoStateEntropy two_state_entropy(double lambda) {
    if (!(std::abs(lambda) <= 350.0))
        throw SpreadTooLargeError("two-state |lambda| = " + std::to_string(std::abs(lambda)) +
                                  " exceeds guard 350");
    const double p1 = two_state_rho1(-2.0 * lambda);
    const double lnz = log_sinhc(lambda);  // Z = sinh(lambda)/lambda
    const double s_rho = lambda * (1.0 - 2.0 * p1) + lnz;
    return {s_rho, shannon(std::vector<double>{p1, 1.0 - p1})};
}

std::vector<SweepRow> sweep_two_state(double lambda_min, double lambda_max, double step) {
    if (!(step > 0.0) || !std::isfinite(lambda_min) || !std::isfinite(lambda_max) || lambda_max < lambda_min)
        throw InvalidArgumentError("sweep needs finite lambda_min <= lambda_max and step > 0");

    const long count = std::lround(std::floor((lambda_max - lambda_min) / step + 1e-9)) + 1;
    std::vector<SweepRow> rows;
    rows.reserve(static_cast<std::size_t>(count));
    for (long k = 0; k < count; ++k) {
        const double lam = lambda_min + double(k) * step;
        const TwoStateEntropy e = two_state_entropy(lam);
        const double p1 = two_state_rho1(-2.0 * lam);
        const double dp1 = -2.0 * two_state_rho1_prime(-2.0 * lam);
        // dS_rho/dlambda = sum_i lambda_i dp_i/dlambda (envelope form);
        // dS_vN/dlambda = -sum_i (1 + ln p_i) dp_i/dlambda.
        const double ds_rho = -2.0 * lam * dp1;
        const double ds_vn = -dp1 * (std::log(p1) - std::log1p(-p1));
        rows.push_back({lam, p1, e.s_rho, e.s_vn, ds_rho, ds_vn});
    }
    return rows;
}

RealMatrix fisher_rao(const DensityMatrix& rho) {
    const Spectrum spec = eigh(rho.matrix());
    SolveReport solved = [&] {
        try {
            return solve_lambda(spec.eigenvalues);
        } catch (const NearPureError& e) {
            throw NearPureError(std::string(e.what()) + "; the Fisher-Rao metric needs a full-rank state");
        }
    }();
    return hessian_log_partition(solved.multiplier.values());
}

MeasurementEnsemble measurement_ensemble(const PureState& initial, const Matrix& observable) {
    if (initial.dim() != observable.dim())
        throw DimensionMismatchError("state dim " + std::to_string(initial.dim()) +
                                     " does not match observable dim " + std::to_string(observable.dim()));
    const Spectrum spec = eigh(observable);

    bool degenerate = false;
    const double scale = std::max(1.0, std::abs(spec.eigenvalues.front()));
    for (std::size_t i = 1; i < spec.eigenvalues.size(); ++i)
        if (std::abs(spec.eigenvalues[i - 1] - spec.eigenvalues[i]) <= default_tol.validation * scale)
            degenerate = true;

    std::vector<double> w = transition_weights(initial, spec);
    const double s = shannon(w);
    return {std::move(w), s, degenerate};
}

}  // namespace qent
