#include "qent/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qent/dexp.hpp"
#include "qent/errors.hpp"

namespace qent {

namespace {

struct StreamPlan {
    std::uint64_t seed;
    std::int64_t count;
};

std::vector<StreamPlan> plan_streams(const SamplerConfig& cfg) {
    std::vector<StreamPlan> plans;
    plans.reserve(std::size_t(cfg.streams));
    const std::int64_t chunk = cfg.samples / cfg.streams;
    const std::int64_t rem = cfg.samples % cfg.streams;
    for (int j = 0; j < cfg.streams; ++j)
        plans.push_back({cfg.seed + std::uint64_t(j), chunk + (j < rem ? 1 : 0)});
    return plans;
}

void check_lambda(std::span<const double> lambda) {
    if (lambda.empty()) throw InvalidArgumentError("lambda must be nonempty");
    double lo = lambda[0], hi = lambda[0];
    for (double x : lambda) {
        if (!std::isfinite(x)) throw InvalidArgumentError("lambda contains a non-finite value");
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    if (hi - lo > max_node_spread)
        throw SpreadTooLargeError("lambda spread " + std::to_string(hi - lo) + " exceeds overflow guard " +
                                  std::to_string(max_node_spread));
}

// Scalar streaming accumulator: mean and standard error of f(sample),
// reduced over streams in ascending order.
template <typename F>
McEstimate accumulate_scalar(const SamplerConfig& cfg, F&& per_sample) {
    double sum = 0.0, sum2 = 0.0;
    for (const StreamPlan& plan : plan_streams(cfg)) {
        CounterRng rng(plan.seed);
        double s = 0.0, s2 = 0.0;
        for (std::int64_t k = 0; k < plan.count; ++k) {
            const double v = per_sample(rng);
            s += v;
            s2 += v * v;
        }
        sum += s;
        sum2 += s2;
    }
    const double n = double(cfg.samples);
    const double mean = sum / n;
    const double var = std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0));
    return {mean, std::sqrt(var / n), cfg.samples};
}

std::vector<double> simplex_coordinates(const PureState& psi, const Matrix* basis) {
    const int n = psi.dim();
    std::vector<double> t(static_cast<std::size_t>(n));
    if (basis == nullptr) {
        for (int i = 0; i < n; ++i) t[std::size_t(i)] = std::norm(psi[i]);
    } else {
        for (int i = 0; i < n; ++i) {
            cplx overlap = 0.0;
            for (int k = 0; k < n; ++k) overlap += std::conj((*basis)(k, i)) * psi[k];
            t[std::size_t(i)] = std::norm(overlap);
        }
    }
    return t;
}

double neg_dot(std::span<const double> lambda, std::span<const double> t) {
    double s = 0.0;
    for (std::size_t i = 0; i < lambda.size(); ++i) s -= lambda[i] * t[i];
    return s;
}

}  // namespace

SamplerConfig::SamplerConfig(std::uint64_t seed_, std::int64_t samples_, int streams_)
    : seed(seed_), samples(samples_), streams(streams_) {
    if (samples < 100)
        throw InvalidArgumentError("sampler needs at least 100 samples, got " + std::to_string(samples));
    if (streams < 1) throw InvalidArgumentError("sampler needs at least one stream");
}

PureState sample_haar(int dim, CounterRng& rng) {
    if (dim < 1) throw InvalidArgumentError("dimension must be >= 1");
    std::vector<cplx> amp(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
        const auto [re, im] = rng.next_gaussian_pair();
        amp[std::size_t(i)] = cplx(re, im);
    }
    return PureState::normalized(std::move(amp));
}

McEstimate estimate_log_partition(std::span<const double> lambda, const SamplerConfig& config) {
    check_lambda(lambda);
    const int n = int(lambda.size());
    const McEstimate w = accumulate_scalar(config, [&](CounterRng& rng) {
        const PureState psi = sample_haar(n, rng);
        const std::vector<double> t = simplex_coordinates(psi, nullptr);
        return std::exp(neg_dot(lambda, t));
    });
    // Delta method through the logarithm.
    return {std::log(w.mean), w.std_error / w.mean, w.samples};
}

McEstimate estimate_entropy(std::span<const double> lambda, const SamplerConfig& config) {
    check_lambda(lambda);
    const int n = int(lambda.size());
    const double lnz = log_partition(lambda);
    return accumulate_scalar(config, [&](CounterRng& rng) {
        const PureState psi = sample_haar(n, rng);
        const std::vector<double> t = simplex_coordinates(psi, nullptr);
        const double lw = neg_dot(lambda, t) - lnz;  // log of the normalized density
        return -std::exp(lw) * lw;
    });
}

McEstimate estimate_expectation(const std::function<double(const PureState&)>& observable,
                                std::span<const double> lambda, const SamplerConfig& config) {
    check_lambda(lambda);
    const int n = int(lambda.size());
    double sw = 0.0, swf = 0.0, sw2 = 0.0, sw2f = 0.0, sw2f2 = 0.0;
    for (const StreamPlan& plan : plan_streams(config)) {
        CounterRng rng(plan.seed);
        double a = 0.0, b = 0.0, c = 0.0, d = 0.0, e = 0.0;
        for (std::int64_t k = 0; k < plan.count; ++k) {
            const PureState psi = sample_haar(n, rng);
            const std::vector<double> t = simplex_coordinates(psi, nullptr);
            const double w = std::exp(neg_dot(lambda, t));
            const double f = observable(psi);
            a += w;
            b += w * f;
            c += w * w;
            d += w * w * f;
            e += w * w * f * f;
        }
        sw += a;
        swf += b;
        sw2 += c;
        sw2f += d;
        sw2f2 += e;
    }
    const double ratio = swf / sw;
    // Delta method for the self-normalized estimator:
    // Var ~ sum w^2 (f - ratio)^2 / (sum w)^2.
    const double var_num = std::max(0.0, sw2f2 - 2.0 * ratio * sw2f + ratio * ratio * sw2);
    return {ratio, std::sqrt(var_num) / sw, config.samples};
}

McMatrixEstimate estimate_density_matrix(std::span<const double> lambda, const Matrix* basis,
                                         const SamplerConfig& config) {
    check_lambda(lambda);
    const int n = int(lambda.size());
    if (basis != nullptr && basis->dim() != n)
        throw DimensionMismatchError("basis dim " + std::to_string(basis->dim()) +
                                     " does not match lambda length " + std::to_string(n));

    Matrix acc_wp(n);                 // sum w * Pi
    Matrix acc_w2p(n);                // sum w^2 * Pi
    RealMatrix acc_w2re(n), acc_w2im(n);  // sum w^2 * Re(Pi)^2, Im(Pi)^2
    double sw = 0.0, sw2 = 0.0;

    for (const StreamPlan& plan : plan_streams(config)) {
        CounterRng rng(plan.seed);
        Matrix s_wp(n), s_w2p(n);
        RealMatrix s_w2re(n), s_w2im(n);
        double s_w = 0.0, s_w2 = 0.0;
        for (std::int64_t k = 0; k < plan.count; ++k) {
            const PureState psi = sample_haar(n, rng);
            const std::vector<double> t = simplex_coordinates(psi, basis);
            const double w = std::exp(neg_dot(lambda, t));
            const double w2 = w * w;
            s_w += w;
            s_w2 += w2;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const cplx pij = psi[i] * std::conj(psi[j]);
                    s_wp(i, j) += w * pij;
                    s_w2p(i, j) += w2 * pij;
                    s_w2re(i, j) += w2 * pij.real() * pij.real();
                    s_w2im(i, j) += w2 * pij.imag() * pij.imag();
                }
        }
        sw += s_w;
        sw2 += s_w2;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                acc_wp(i, j) += s_wp(i, j);
                acc_w2p(i, j) += s_w2p(i, j);
                acc_w2re(i, j) += s_w2re(i, j);
                acc_w2im(i, j) += s_w2im(i, j);
            }
    }

    McMatrixEstimate out{Matrix(n), RealMatrix(n), RealMatrix(n), config.samples};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const cplx r = acc_wp(i, j) / sw;
            out.mean(i, j) = r;
            const double vre = std::max(
                0.0, acc_w2re(i, j) - 2.0 * r.real() * acc_w2p(i, j).real() + r.real() * r.real() * sw2);
            const double vim = std::max(
                0.0, acc_w2im(i, j) - 2.0 * r.imag() * acc_w2p(i, j).imag() + r.imag() * r.imag() * sw2);
            out.std_error_re(i, j) = std::sqrt(vre) / sw;
            out.std_error_im(i, j) = std::sqrt(vim) / sw;
        }
    return out;
}

McCovariance estimate_projector_covariance(std::span<const double> lambda, const SamplerConfig& config) {
    check_lambda(lambda);
    const int n = int(lambda.size());

    // Pass 1: weighted mean of the simplex coordinates.
    std::vector<double> tbar(static_cast<std::size_t>(n), 0.0);
    double sw = 0.0;
    for (const StreamPlan& plan : plan_streams(config)) {
        CounterRng rng(plan.seed);
        std::vector<double> s_t(static_cast<std::size_t>(n), 0.0);
        double s_w = 0.0;
        for (std::int64_t k = 0; k < plan.count; ++k) {
            const PureState psi = sample_haar(n, rng);
            const std::vector<double> t = simplex_coordinates(psi, nullptr);
            const double w = std::exp(neg_dot(lambda, t));
            s_w += w;
            for (int i = 0; i < n; ++i) s_t[std::size_t(i)] += w * t[std::size_t(i)];
        }
        sw += s_w;
        for (int i = 0; i < n; ++i) tbar[std::size_t(i)] += s_t[std::size_t(i)];
    }
    for (double& x : tbar) x /= sw;

    // Pass 2: replay the same streams for the centered second moments.
    RealMatrix acc_wy(n), acc_w2y(n), acc_w2y2(n);
    double sw2 = 0.0;
    for (const StreamPlan& plan : plan_streams(config)) {
        CounterRng rng(plan.seed);
        RealMatrix s_wy(n), s_w2y(n), s_w2y2(n);
        double s_w2 = 0.0;
        for (std::int64_t k = 0; k < plan.count; ++k) {
            const PureState psi = sample_haar(n, rng);
            const std::vector<double> t = simplex_coordinates(psi, nullptr);
            const double w = std::exp(neg_dot(lambda, t));
            s_w2 += w * w;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const double y = (t[std::size_t(i)] - tbar[std::size_t(i)]) *
                                     (t[std::size_t(j)] - tbar[std::size_t(j)]);
                    s_wy(i, j) += w * y;
                    s_w2y(i, j) += w * w * y;
                    s_w2y2(i, j) += w * w * y * y;
                }
        }
        sw2 += s_w2;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                acc_wy(i, j) += s_wy(i, j);
                acc_w2y(i, j) += s_w2y(i, j);
                acc_w2y2(i, j) += s_w2y2(i, j);
            }
    }

    McCovariance out{RealMatrix(n), RealMatrix(n), config.samples};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double c = acc_wy(i, j) / sw;
            out.mean(i, j) = c;
            const double var = std::max(0.0, acc_w2y2(i, j) - 2.0 * c * acc_w2y(i, j) + c * c * sw2);
            out.std_error(i, j) = std::sqrt(var) / sw;
        }
    return out;
}

// ---------------------------------------------------------------------------
// Deterministic simplex quadrature (adaptive Simpson), the analytic oracle.

namespace {

struct Simpson {
    double tol;
    int max_depth = 48;

    template <typename F>
    double integrate(F&& f, double a, double b) const {
        const double m = 0.5 * (a + b);
        const double fa = f(a), fm = f(m), fb = f(b);
        const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        return recurse(f, a, b, fa, fm, fb, whole, tol, max_depth);
    }

private:
    template <typename F>
    static double recurse(F&& f, double a, double b, double fa, double fm, double fb, double whole,
                          double eps, int depth) {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        const double flm = f(lm), frm = f(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double delta = left + right - whole;
        if (std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
        if (depth <= 0)
            throw ToleranceNotReachedError("adaptive quadrature exhausted its refinement depth");
        return recurse(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
               recurse(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
    }
};

// Rough magnitude via a fixed composite rule, to convert the relative
// request into an absolute Simpson budget.
template <typename F>
double rough_scale(F&& f, double a, double b) {
    double s = 0.0;
    const int k = 32;
    for (int i = 0; i <= k; ++i) s += std::abs(f(a + (b - a) * double(i) / k));
    return std::max((b - a) * s / (k + 1), 1e-300);
}

}  // namespace

QuadratureResult simplex_quadrature(std::span<const double> lambda, double tol) {
    check_lambda(lambda);
    if (!(tol > 0.0)) throw InvalidArgumentError("quadrature tolerance must be positive");
    const int n = int(lambda.size());
    if (n > 3)
        throw InvalidArgumentError("simplex quadrature supports n in {1, 2, 3}, got " + std::to_string(n));

    if (n == 1) return {-lambda[0], {1.0}};

    double c = 0.0;
    for (double x : lambda) c += x;
    c /= n;
    std::vector<double> mu(lambda.begin(), lambda.end());
    for (double& x : mu) x -= c;

    if (n == 2) {
        auto f = [&](double t) { return std::exp(-mu[0] * t - mu[1] * (1.0 - t)); };
        const Simpson outer{tol * rough_scale(f, 0.0, 1.0)};
        const double i0 = outer.integrate(f, 0.0, 1.0);
        const double i1 = outer.integrate([&](double t) { return t * f(t); }, 0.0, 1.0);
        const double i2 = outer.integrate([&](double t) { return (1.0 - t) * f(t); }, 0.0, 1.0);
        return {std::log(i0) - c, {i1 / i0, i2 / i0}};
    }

    // n == 3: iterated rule over the triangle t1 + t2 <= 1. `moment` selects
    // the extra coordinate factor (-1: none, 0..2: t_i).
    auto integrand = [&](double t1, double t2, int moment) {
        const double t3 = 1.0 - t1 - t2;
        double v = std::exp(-mu[0] * t1 - mu[1] * t2 - mu[2] * t3);
        if (moment == 0) v *= t1;
        if (moment == 1) v *= t2;
        if (moment == 2) v *= t3;
        return v;
    };
    auto plane = [&](int moment, double eps) {
        auto outer_f = [&](double t1) {
            if (t1 >= 1.0) return 0.0;
            auto inner_f = [&](double t2) { return integrand(t1, t2, moment); };
            const Simpson inner{0.25 * eps * std::max(1.0 - t1, 1e-6)};
            return inner.integrate(inner_f, 0.0, 1.0 - t1);
        };
        const Simpson outer{eps};
        return outer.integrate(outer_f, 0.0, 1.0);
    };

    auto coarse = [&](double t1) {
        double s = 0.0;
        const int k = 16;
        for (int i = 0; i <= k; ++i) s += integrand(t1, (1.0 - t1) * double(i) / k, -1) * (1.0 - t1) / (k + 1);
        return s;
    };
    const double eps0 = tol * rough_scale(coarse, 0.0, 1.0);
    const double i0 = plane(-1, eps0);
    const double p0 = plane(0, eps0) / i0;
    const double p1 = plane(1, eps0) / i0;
    const double p2 = plane(2, eps0) / i0;
    return {std::log(2.0 * i0) - c, {p0, p1, p2}};
}

Matrix random_unitary(int dim, CounterRng& rng) {
    if (dim < 1) throw InvalidArgumentError("dimension must be >= 1");
    Matrix a(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            const auto [re, im] = rng.next_gaussian_pair();
            a(i, j) = cplx(re, im);
        }
    // Modified Gram-Schmidt; the positive-diagonal convention on a Gaussian
    // matrix yields the invariant distribution.
    for (int j = 0; j < dim; ++j) {
        for (int k = 0; k < j; ++k) {
            cplx proj = 0.0;
            for (int i = 0; i < dim; ++i) proj += std::conj(a(i, k)) * a(i, j);
            for (int i = 0; i < dim; ++i) a(i, j) -= proj * a(i, k);
        }
        double nrm = 0.0;
        for (int i = 0; i < dim; ++i) nrm += std::norm(a(i, j));
        nrm = std::sqrt(nrm);
        for (int i = 0; i < dim; ++i) a(i, j) /= nrm;
    }
    return a;
}

DensityMatrix random_density(int dim, CounterRng& rng, double min_eigenvalue) {
    if (dim < 1) throw InvalidArgumentError("dimension must be >= 1");
    const double floor = std::min(min_eigenvalue, 0.5 / dim);
    std::vector<double> p(static_cast<std::size_t>(dim));
    double sum = 0.0;
    for (double& x : p) {
        x = -std::log(rng.next_uniform_open());  // Dirichlet(1,..,1) after normalizing
        sum += x;
    }
    for (double& x : p) x = floor + (1.0 - dim * floor) * (x / sum);

    const Matrix u = random_unitary(dim, rng);
    Matrix m(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            cplx s = 0.0;
            for (int k = 0; k < dim; ++k) s += p[std::size_t(k)] * u(i, k) * std::conj(u(j, k));
            m(i, j) = s;
        }
    return validate_density(m);
}

}  // namespace qent
