#pragma once

#include <vector>

#include "qent/matrix.hpp"
#include "qent/rng.hpp"

namespace qent::testing {

inline double uniform(CounterRng& rng, double lo, double hi) {
    return lo + (hi - lo) * rng.next_uniform();
}

inline Matrix random_hermitian(int n, CounterRng& rng, double scale = 1.0) {
    Matrix m(n);
    for (int i = 0; i < n; ++i) {
        m(i, i) = uniform(rng, -scale, scale);
        for (int j = i + 1; j < n; ++j) {
            const cplx z(uniform(rng, -scale, scale), uniform(rng, -scale, scale));
            m(i, j) = z;
            m(j, i) = std::conj(z);
        }
    }
    return m;
}

// Trace-free multiplier with max - min not exceeding `spread`.
inline std::vector<double> random_trace_free(int n, double spread, CounterRng& rng) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (double& x : v) x = uniform(rng, -0.5 * spread, 0.5 * spread);
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    for (double& x : v) x -= mean;
    return v;
}

inline std::vector<double> random_spectrum(int n, CounterRng& rng, double floor = 5e-3) {
    std::vector<double> p(static_cast<std::size_t>(n));
    double sum = 0.0;
    for (double& x : p) {
        x = -std::log(rng.next_uniform_open());
        sum += x;
    }
    for (double& x : p) x = floor + (1.0 - n * floor) * (x / sum);
    return p;
}

}  // namespace qent::testing
