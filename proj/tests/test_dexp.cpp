#include <cmath>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "qent/dexp.hpp"
#include "qent/errors.hpp"
#include "qent/montecarlo.hpp"

using namespace qent;

namespace {

// Independent 1-D oracle for two-node divided differences:
// exp[a,b] = integral_0^1 exp(a t + b (1-t)) dt, composite Simpson.
double dd2_quadrature(double a, double b) {
    const int k = 4096;
    double s = 0.0;
    for (int i = 0; i <= k; ++i) {
        const double t = double(i) / k;
        const double w = (i == 0 || i == k) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        s += w * std::exp(a * t + b * (1.0 - t));
    }
    return s / (3.0 * k);
}

}  // namespace

TEST_CASE("dd_exp point values") {
    CHECK(dd_exp(std::vector<double>{0.0}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(dd_exp(std::vector<double>{0.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(dd_exp(std::vector<double>{0.0, 0.0, 0.0}) == doctest::Approx(0.5).epsilon(1e-14));
    // sinh(1), cross-checked against the quadrature oracle
    const double oracle = dd2_quadrature(1.0, -1.0);
    CHECK(dd_exp(std::vector<double>{1.0, -1.0}) == doctest::Approx(1.1752011936438014).epsilon(1e-12));
    CHECK(dd_exp(std::vector<double>{1.0, -1.0}) == doctest::Approx(oracle).epsilon(1e-10));
    CHECK(dd_exp(std::vector<double>{-1.0, 1.0}) == dd_exp(std::vector<double>{1.0, -1.0}));
}

TEST_CASE("dd_exp guards") {
    CHECK_THROWS_AS(dd_exp(std::vector<double>{}), InvalidArgumentError);
    CHECK_THROWS_AS(dd_exp(std::vector<double>{0.0, 800.0}), SpreadTooLargeError);
    CHECK_THROWS_AS(dd_exp(std::vector<double>{0.0, std::nan("")}), InvalidArgumentError);
    // Just inside the guard still works and stays positive.
    CHECK(log_dd_exp(std::vector<double>{-349.0, 349.0}) > 0.0);
}

TEST_CASE("dd_exp confluent consistency") {
    // exp[a, a+eps] = e^a (e^eps - 1)/eps, so the gap to the confluent value
    // closes linearly in eps (slope 1/2) and the computed value must track
    // the closed form without cancellation.
    for (double a : {-3.0, 0.0, 2.5}) {
        const double confluent = dd_exp(std::vector<double>{a, a});
        for (double eps : {1e-4, 1e-6, 1e-8}) {
            const double nearby = dd_exp(std::vector<double>{a, a + eps});
            CHECK(std::abs(nearby - confluent) / confluent <= eps);
            const double closed = std::exp(a) * std::expm1(eps) / eps;
            CHECK(std::abs(nearby - closed) / closed <= 1e-12);
        }
    }
}

TEST_CASE("log_partition values") {
    for (int n = 1; n <= 6; ++n) {
        std::vector<double> zero(static_cast<std::size_t>(n), 0.0);
        CHECK(std::abs(log_partition(zero)) <= 1e-13);
    }
    CHECK(log_partition(std::vector<double>{3.0}) == doctest::Approx(-3.0).epsilon(1e-14));
    CHECK(log_partition(std::vector<double>{-1.0, 1.0}) ==
          doctest::Approx(0.16143936157119563).epsilon(1e-12));
    CHECK(log_partition(std::vector<double>{0.0, 1.0, 2.0}) ==
          doctest::Approx(-0.91735029077416378).epsilon(1e-12));
}

TEST_CASE("moment_map values and structure") {
    auto p0 = moment_map(std::vector<double>{7.0});
    CHECK(p0.size() == 1);
    CHECK(p0[0] == 1.0);

    for (int n = 2; n <= 5; ++n) {
        std::vector<double> zero(static_cast<std::size_t>(n), 0.0);
        for (double pi : moment_map(zero)) CHECK(pi == doctest::Approx(1.0 / n).epsilon(1e-13));
    }

    auto p = moment_map(std::vector<double>{-1.0, 1.0});
    CHECK(p[0] == doctest::Approx(0.65651764274966565).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.34348235725033435).epsilon(1e-12));

    auto q = moment_map(std::vector<double>{-2.0, 2.0});
    CHECK(q[0] == doctest::Approx(0.76865736036377405).epsilon(1e-12));

    CounterRng rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + int(rng.next_u64() % 6);
        const auto lambda = testing::random_trace_free(n, 25.0, rng);
        const auto pm = moment_map(lambda);
        double sum = 0.0;
        for (double pi : pm) {
            CHECK(pi > 0.0);
            CHECK(pi < 1.0);
            sum += pi;
        }
        CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
}

TEST_CASE("moment_map permutation equivariance is exact") {
    const std::vector<double> lambda{0.3, -1.2, 0.9, 0.0};
    const auto p = moment_map(lambda);
    const std::vector<double> perm{0.9, 0.3, 0.0, -1.2};  // positions 2,0,3,1
    const auto pp = moment_map(perm);
    CHECK(pp[0] == p[2]);
    CHECK(pp[1] == p[0]);
    CHECK(pp[2] == p[3]);
    CHECK(pp[3] == p[1]);
}

TEST_CASE("moment_map two-state monotonicity") {
    double prev = 1.0;
    for (double d = -18.0; d <= 18.0; d += 0.5) {
        const auto p = moment_map(std::vector<double>{0.5 * d, -0.5 * d});
        CHECK(p[0] < prev);
        prev = p[0];
    }
}

TEST_CASE("second_moments uniform and row sums") {
    auto m2 = second_moments(std::vector<double>{0.0, 0.0});
    CHECK(m2(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK(m2(0, 1) == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
    CHECK(m2(1, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));

    for (int n = 1; n <= 6; ++n) {
        std::vector<double> zero(static_cast<std::size_t>(n), 0.0);
        const auto m = second_moments(zero);
        for (int i = 0; i < n; ++i)
            CHECK(m(i, i) == doctest::Approx(2.0 / (double(n) * (n + 1))).epsilon(1e-12));
    }

    CounterRng rng(17);
    for (int trial = 0; trial < 6; ++trial) {
        const int n = 2 + int(rng.next_u64() % 5);
        const auto lambda = testing::random_trace_free(n, 15.0, rng);
        const auto m = second_moments(lambda);
        const auto p = moment_map(lambda);
        for (int i = 0; i < n; ++i) {
            double row = 0.0;
            for (int j = 0; j < n; ++j) {
                row += m(i, j);
                CHECK(m(i, j) == m(j, i));
            }
            CHECK(std::abs(row - p[static_cast<std::size_t>(i)]) <= 1e-10);
        }
    }
}

TEST_CASE("hessian: uniform value, gauge null direction, finite differences") {
    auto h2 = hessian_log_partition(std::vector<double>{0.0, 0.0});
    CHECK(h2(0, 0) == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
    CHECK(h2(0, 1) == doctest::Approx(-1.0 / 12.0).epsilon(1e-12));

    auto h1 = hessian_log_partition(std::vector<double>{4.0});
    CHECK(std::abs(h1(0, 0)) <= 1e-14);

    CounterRng rng(23);
    for (int trial = 0; trial < 6; ++trial) {
        const int n = 2 + int(rng.next_u64() % 4);
        const auto lambda = testing::random_trace_free(n, 8.0, rng);
        const auto h = hessian_log_partition(lambda);
        for (int i = 0; i < n; ++i) {
            double row = 0.0;
            for (int j = 0; j < n; ++j) row += h(i, j);
            CHECK(std::abs(row) <= 1e-10);
        }

        // Central differences of ln Z, step 1e-4: 1e-6 relative to the
        // Hessian scale, plus the provable roundoff floor of the four-point
        // stencil, eps (1 + |ln Z|) / h^2.
        const double step = 1e-4;
        double scale = 0.0;
        for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(h(i, i)));
        const double floor =
            2e-15 * (1.0 + std::abs(log_partition(lambda))) / (step * step);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                std::vector<double> l = lambda;
                auto eval = [&](double di, double dj) {
                    l = lambda;
                    l[static_cast<std::size_t>(i)] += di;
                    l[static_cast<std::size_t>(j)] += dj;
                    return log_partition(l);
                };
                const double fd = (eval(step, step) - eval(step, -step) - eval(-step, step) +
                                   eval(-step, -step)) /
                                  (4.0 * step * step);
                CHECK(std::abs(fd - h(i, j)) <= 1e-6 * scale + floor);
            }
    }
}

TEST_CASE("gauge covariance of the partition function") {
    CounterRng rng(5);
    for (int trial = 0; trial < 8; ++trial) {
        const int n = 2 + int(rng.next_u64() % 5);
        const auto lambda = testing::random_trace_free(n, 20.0, rng);
        const double c = testing::uniform(rng, -15.0, 15.0);
        std::vector<double> shifted = lambda;
        for (double& x : shifted) x += c;

        CHECK(std::abs(log_partition(shifted) - (log_partition(lambda) - c)) <= 1e-12);

        const auto p = moment_map(lambda);
        const auto ps = moment_map(shifted);
        for (int i = 0; i < n; ++i)
            CHECK(std::abs(p[static_cast<std::size_t>(i)] - ps[static_cast<std::size_t>(i)]) <= 1e-12);

        const auto h = hessian_log_partition(lambda);
        const auto hs = hessian_log_partition(shifted);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) CHECK(std::abs(h(i, j) - hs(i, j)) <= 1e-12);
    }
}

TEST_CASE("log_partition convexity") {
    CounterRng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + int(rng.next_u64() % 5);
        const auto a = testing::random_trace_free(n, 20.0, rng);
        const auto b = testing::random_trace_free(n, 20.0, rng);
        const double theta = rng.next_uniform();
        std::vector<double> mix(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            mix[static_cast<std::size_t>(i)] = theta * a[static_cast<std::size_t>(i)] +
                                               (1.0 - theta) * b[static_cast<std::size_t>(i)];
        CHECK(log_partition(mix) <= theta * log_partition(a) + (1.0 - theta) * log_partition(b) + 1e-12);
    }
}

TEST_CASE("divided-difference route matches the quadrature oracle") {
    CounterRng rng(47);
    for (int trial = 0; trial < 8; ++trial) {
        const int n = 1 + int(rng.next_u64() % 3);
        const auto lambda = testing::random_trace_free(n, 12.0, rng);
        const auto q = simplex_quadrature(lambda, 1e-11);
        CHECK(std::abs(log_partition(lambda) - q.log_z) <= 1e-8 * std::max(1.0, std::abs(q.log_z)));
        const auto p = moment_map(lambda);
        for (int i = 0; i < n; ++i)
            CHECK(std::abs(p[static_cast<std::size_t>(i)] - q.p[static_cast<std::size_t>(i)]) <= 1e-8);
    }
}
