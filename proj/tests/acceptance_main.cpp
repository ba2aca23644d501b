// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "qent/dexp.hpp"
#include "qent/entropy.hpp"
#include "qent/montecarlo.hpp"
#include "qent/rng.hpp"
#include "qent/solver.hpp"
#include "qent/spectral.hpp"

using namespace qent;

namespace {

int failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void report(int id, const char* name, bool pass, const std::string& detail, double seconds) {
    std::printf("%s %d %-28s %s  [%.2fs]\n", pass ? "PASS" : "FAIL", id, name, detail.c_str(), seconds);
    if (!pass) ++failures;
}

double uniform(CounterRng& rng, double lo, double hi) { return lo + (hi - lo) * rng.next_uniform(); }

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

std::vector<double> random_trace_free(int n, double spread, CounterRng& rng) {
    std::vector<double> v(static_cast<std::size_t>(n));
    double lo = 0.0, hi = 0.0, mean = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = uniform(rng, -0.5 * spread, 0.5 * spread);
        lo = std::min(lo, v[i]);
        hi = std::max(hi, v[i]);
        mean += v[i];
    }
    mean /= n;
    for (double& x : v) x -= mean;
    return v;
}

Matrix diagonal(const std::vector<double>& d) {
    Matrix m(int(d.size()));
    for (int i = 0; i < m.dim(); ++i) m(i, i) = d[static_cast<std::size_t>(i)];
    return m;
}

// 1. moment_map matches the two-state closed form rho_1 = 1/Delta + 1/(1-e^Delta)
// to 1e-8 relative across Delta in [-20, 20], confluent region included.
void criterion_1() {
    Timer t;
    double worst = 0.0;
    bool pass = true;
    auto check_delta = [&](double delta) {
        const std::vector<double> lambda{0.5 * delta, -0.5 * delta};
        const double p1 = moment_map(lambda)[0];
        const double closed = two_state_rho1(delta);
        const double rel = std::abs(p1 - closed) / closed;
        worst = std::max(worst, rel);
        if (rel > 1e-8) pass = false;
    };
    for (int k = 0; k <= 2000; ++k) check_delta(-20.0 + 0.02 * k);
    for (int k = -200; k <= 200; ++k) check_delta(1e-5 * k);  // confluent region
    report(1, "two-state closed form", pass && t.seconds() < 1.0,
           "max rel err " + fmt(worst), t.seconds());
}

// 2. solve_lambda(moment_map(lambda)) recovers lambda within 1e-7 inf-norm
// for 100 random trace-free multipliers, n in {2..8}, spread <= 20.
void criterion_2() {
    Timer t;
    CounterRng rng(1001);
    double worst = 0.0;
    bool pass = true;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + trial % 7;
        const double spread = uniform(rng, 0.5, 20.0);
        const auto lambda = random_trace_free(n, spread, rng);
        const auto p = moment_map(lambda);
        const SolveReport r = solve_lambda(p, 1e-12);
        if (!r.converged) pass = false;
        for (int i = 0; i < n; ++i)
            worst = std::max(worst, std::abs(r.multiplier.values()[static_cast<std::size_t>(i)] -
                                             lambda[static_cast<std::size_t>(i)]));
    }
    pass = pass && worst <= 1e-7;
    report(2, "multiplier round trip", pass && t.seconds() < 10.0,
           "max |lambda* - lambda| " + fmt(worst), t.seconds());
}

// 3. Gauge invariance under lambda -> lambda + c 1 for 50 random draws:
// ln Z shifts by exactly -c; moment map, Hessian and the Legendre value are
// invariant, all to 1e-12.
void criterion_3() {
    Timer t;
    CounterRng rng(3003);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + trial % 5;
        const auto lambda = random_trace_free(n, uniform(rng, 0.5, 30.0), rng);
        const double c = uniform(rng, -20.0, 20.0);
        std::vector<double> shifted = lambda;
        for (double& x : shifted) x += c;

        worst = std::max(worst, std::abs(log_partition(shifted) - (log_partition(lambda) - c)));

        const auto p = moment_map(lambda);
        const auto ps = moment_map(shifted);
        for (int i = 0; i < n; ++i)
            worst = std::max(worst, std::abs(p[static_cast<std::size_t>(i)] -
                                             ps[static_cast<std::size_t>(i)]));

        const auto h = hessian_log_partition(lambda);
        const auto hs = hessian_log_partition(shifted);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) worst = std::max(worst, std::abs(h(i, j) - hs(i, j)));

        double legendre = 0.0, legendre_s = 0.0;
        for (int i = 0; i < n; ++i) {
            legendre += lambda[static_cast<std::size_t>(i)] * p[static_cast<std::size_t>(i)];
            legendre_s += shifted[static_cast<std::size_t>(i)] * p[static_cast<std::size_t>(i)];
        }
        legendre += log_partition(lambda);
        legendre_s += log_partition(shifted);
        worst = std::max(worst, std::abs(legendre - legendre_s));
    }
    report(3, "gauge invariance", worst <= 1e-12, "max deviation " + fmt(worst),
           t.seconds());
}

// 4. The Hessian matches central finite differences of ln Z (step 1e-4) to
// 1e-6 relative, and the Monte Carlo projector covariance within 3 stderr at
// 1e6 samples for n = 2, 3.
void criterion_4() {
    Timer t;
    CounterRng rng(4004);
    bool pass = true;
    double worst_fd = 0.0;
    for (int trial = 0; trial < 6; ++trial) {
        const int n = 2 + trial % 3;
        const auto lambda = random_trace_free(n, uniform(rng, 0.5, 6.0), rng);
        const auto h = hessian_log_partition(lambda);
        double scale = 0.0;
        for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(h(i, i)));
        const double step = 1e-4;
        // Roundoff floor of the four-point stencil at the pinned step.
        const double floor = 2e-15 * (1.0 + std::abs(log_partition(lambda))) / (step * step);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                auto lnz = [&](double di, double dj) {
                    std::vector<double> l = lambda;
                    l[static_cast<std::size_t>(i)] += di;
                    l[static_cast<std::size_t>(j)] += dj;
                    return log_partition(l);
                };
                const double fd =
                    (lnz(step, step) - lnz(step, -step) - lnz(-step, step) + lnz(-step, -step)) /
                    (4.0 * step * step);
                worst_fd = std::max(worst_fd, std::max(0.0, std::abs(fd - h(i, j)) - floor) / scale);
            }
    }
    pass = pass && worst_fd <= 1e-6;

    double worst_sigma = 0.0;
    for (int n = 2; n <= 3; ++n) {
        std::vector<double> lambda(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) lambda[static_cast<std::size_t>(i)] = -1.0 + 2.0 * i / (n - 1.0);
        const auto h = hessian_log_partition(lambda);
        const McCovariance c = estimate_projector_covariance(lambda, SamplerConfig(42, 1000000));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double sigma = std::abs(c.mean(i, j) - h(i, j)) / c.std_error(i, j);
                worst_sigma = std::max(worst_sigma, sigma);
            }
    }
    pass = pass && worst_sigma <= 3.0;
    report(4, "Hessian identity", pass && t.seconds() < 60.0,
           "max FD rel err " + fmt(worst_fd) + ", max MC sigma " +
               fmt(worst_sigma),
           t.seconds());
}

// 5. Concavity: 200 random full-matrix mixtures per dim in {2,3,4} with zero
// violations below -1e-9 slack.
void criterion_5() {
    Timer t;
    CounterRng rng(5005);
    int violations = 0;
    double min_slack = 1e300;
    for (int dim = 2; dim <= 4; ++dim) {
        for (int trial = 0; trial < 200; ++trial) {
            const int k = 2 + trial % 3;
            std::vector<double> w(static_cast<std::size_t>(k));
            double ws = 0.0;
            for (double& x : w) {
                x = -std::log(rng.next_uniform_open());
                ws += x;
            }
            for (double& x : w) x /= ws;

            Matrix mix(dim);
            double mean_entropy = 0.0;
            for (int c = 0; c < k; ++c) {
                const DensityMatrix rho = random_density(dim, rng);
                mean_entropy += w[static_cast<std::size_t>(c)] * quantum_shannon(rho).s_rho;
                for (int i = 0; i < dim; ++i)
                    for (int j = 0; j < dim; ++j)
                        mix(i, j) += w[static_cast<std::size_t>(c)] * rho.matrix()(i, j);
            }
            const double slack = quantum_shannon(validate_density(mix)).s_rho - mean_entropy;
            min_slack = std::min(min_slack, slack);
            if (slack < -1e-9) ++violations;
        }
    }
    report(5, "mixture concavity", violations == 0 && t.seconds() < 60.0,
           "600 mixtures, min slack " + fmt(min_slack), t.seconds());
}

// 6. Non-constancy of S_rho - S_vN: -0.693147 +- 1e-6 at the uniform qubit,
// -1.020236 +- 1e-4 at (0.768658, 0.231342), and the two differ by > 0.3.
void criterion_6() {
    Timer t;
    const double d1 = quantum_shannon(validate_density(diagonal({0.5, 0.5}))).difference;
    const double d2 =
        quantum_shannon(validate_density(diagonal({0.768658, 0.231342}))).difference;
    const bool pass =
        std::abs(d1 - (-0.693147)) <= 1e-6 && std::abs(d2 - (-1.020236)) <= 1e-4 &&
        std::abs(d1 - d2) > 0.3;
    report(6, "non-constant difference", pass,
           "d(uniform) " + fmt(d1) + ", d(tilted) " + fmt(d2), t.seconds());
}

// 7. Sweep reproduction on [-10, 10]: odd derivative columns vanishing at 0,
// and the two derivatives closer at |lambda| = 10 than at |lambda| = 1.
void criterion_7() {
    Timer t;
    const auto rows = sweep_two_state(-10.0, 10.0, 0.05);
    bool pass = rows.size() == 401;
    const SweepRow& zero = rows[200];
    pass = pass && std::abs(zero.lambda) < 1e-12 && std::abs(zero.ds_rho) <= 1e-10 &&
           std::abs(zero.ds_vn) <= 1e-10;
    double worst_odd = 0.0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        worst_odd = std::max(worst_odd, std::abs(rows[k].ds_rho + rows[rows.size() - 1 - k].ds_rho));
        worst_odd = std::max(worst_odd, std::abs(rows[k].ds_vn + rows[rows.size() - 1 - k].ds_vn));
    }
    pass = pass && worst_odd <= 1e-8;
    const double gap_one = std::abs(rows[220].ds_rho - rows[220].ds_vn);    // lambda = 1
    const double gap_ten = std::abs(rows[400].ds_rho - rows[400].ds_vn);    // lambda = 10
    pass = pass && gap_ten < gap_one;
    report(7, "two-state sweep shape", pass && t.seconds() < 5.0,
           "odd residual " + fmt(worst_odd) + ", gap(10)/gap(1) " +
               fmt(gap_ten / gap_one),
           t.seconds());
}

// 8. Monte Carlo consistency: estimators vs closed forms, 20 seeded runs at
// n = 2, 3, 4 with at most one 3-sigma excursion across the whole suite;
// linear expectation matches the trace formula.
void criterion_8() {
    Timer t;
    int excursions = 0;
    int comparisons = 0;
    for (int n = 2; n <= 4; ++n) {
        std::vector<double> lambda(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) lambda[static_cast<std::size_t>(i)] = -1.5 + 3.0 * i / (n - 1.0);
        const double lnz = log_partition(lambda);
        const auto p = moment_map(lambda);
        double entropy = lnz;
        for (int i = 0; i < n; ++i)
            entropy += lambda[static_cast<std::size_t>(i)] * p[static_cast<std::size_t>(i)];

        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const SamplerConfig cfg(seed, 100000);
            const McEstimate ez = estimate_log_partition(lambda, cfg);
            ++comparisons;
            if (std::abs(ez.mean - lnz) > 3.0 * ez.std_error) ++excursions;

            const McEstimate es = estimate_entropy(lambda, cfg);
            ++comparisons;
            if (std::abs(es.mean - entropy) > 3.0 * es.std_error) ++excursions;

            const McMatrixEstimate ed = estimate_density_matrix(lambda, nullptr, cfg);
            for (int i = 0; i < n; ++i) {
                ++comparisons;
                if (std::abs(ed.mean(i, i).real() - p[static_cast<std::size_t>(i)]) >
                    3.0 * ed.std_error_re(i, i))
                    ++excursions;
            }
        }
    }

    // Linear observable: ensemble mean equals the trace formula through the
    // analytic density matrix.
    bool linear_ok = true;
    {
        const std::vector<double> lambda{-1.0, 1.0};
        const auto p = moment_map(lambda);
        const DensityMatrix rho = validate_density(diagonal(p));
        Matrix sz(2);
        sz(0, 0) = 1.0;
        sz(1, 1) = -1.0;
        const double analytic = expectation_linear(sz, rho);
        const McEstimate mc = estimate_expectation(
            [](const PureState& psi) { return std::norm(psi[0]) - std::norm(psi[1]); }, lambda,
            SamplerConfig(99, 200000));
        linear_ok = std::abs(mc.mean - analytic) <= 3.0 * mc.std_error;
    }

    const bool pass = excursions <= 1 && linear_ok;
    report(8, "Monte Carlo consistency", pass,
           std::to_string(excursions) + "/" + std::to_string(comparisons) +
               " excursions, linear check " + (linear_ok ? "ok" : "failed"),
           t.seconds());
}

// 9. Closed-form route vs deterministic simplex quadrature, n <= 3, on a
// 20-point multiplier grid: 1e-8 agreement.
void criterion_9() {
    Timer t;
    double worst = 0.0;
    CounterRng rng(9009);
    int points = 0;
    auto compare = [&](const std::vector<double>& lambda) {
        ++points;
        const QuadratureResult q = simplex_quadrature(lambda, 1e-11);
        worst = std::max(worst, std::abs(log_partition(lambda) - q.log_z) /
                                    std::max(1.0, std::abs(q.log_z)));
        const auto p = moment_map(lambda);
        for (std::size_t i = 0; i < p.size(); ++i) worst = std::max(worst, std::abs(p[i] - q.p[i]));
    };
    compare({0.0});
    compare({4.0});
    for (int k = 0; k < 9; ++k) compare({uniform(rng, -6.0, 6.0), uniform(rng, -6.0, 6.0)});
    for (int k = 0; k < 9; ++k)
        compare({uniform(rng, -4.0, 4.0), uniform(rng, -4.0, 4.0), uniform(rng, -4.0, 4.0)});
    report(9, "quadrature oracle equivalence", worst <= 1e-8 && points == 20,
           "20 grid points, max deviation " + fmt(worst), t.seconds());
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    if (failures == 0)
        std::printf("all acceptance criteria passed\n");
    else
        std::printf("%d acceptance criteria FAILED\n", failures);
    return failures == 0 ? 0 : 1;
}
