#include "qent/dexp.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>

#include "qent/errors.hpp"

// Divided differences of the exponential via the Opitz construction: for the
// upper-bidiagonal matrix A with nodes v_1..v_m on the diagonal and ones on
// the superdiagonal, exp(A)(i,j) = exp[v_i,...,v_j]. The exponential is
// evaluated by scaling-and-squaring with a truncated Taylor series after
// subtracting the node mean. Because every entry of exp(A) is a positive
// divided difference, the squaring phase multiplies and adds positive
// numbers only, so the naive recurrence's catastrophic cancellation for
// clustered nodes never appears.
//
// One refinement: instead of ones, the superdiagonal carries sigma = 2^t
// (a diagonal similarity D A D^{-1}, D = diag(sigma^-i), so the same matrix
// up to exact rescaling; entry (i,j) picks up sigma^(j-i)). Choosing t near
// the squaring count keeps the scaled superdiagonal at 1 and holds every
// table entry inside the normal double range even for long node lists.

namespace qent {

namespace {

constexpr double ln2 = 0.6931471805599453;
constexpr int taylor_order = 22;  // exp tail below 1e-18 for inf-norm <= 1.5

struct Table {
    int m = 0;
    int log2_sigma = 0;
    double mean = 0.0;               // subtracted node mean
    std::vector<double> a;           // row-major m x m, upper triangular

    double at(int i, int j) const { return a[std::size_t(i) * m + j]; }
};

// Bound on log of the largest table entry at the final squaring stage, which
// dominates all intermediate stages for t <= squarings.
double log_entry_ceiling(int m, int t, double cmax) {
    double best = -std::numeric_limits<double>::infinity();
    for (int d = 0; d < m; ++d)
        best = std::max(best, t * d * ln2 + cmax - std::lgamma(double(d) + 1.0));
    return best;
}

// Bound on log of the smallest entry, attained before any squaring.
double log_entry_floor(int m, int t, int squarings, double cmin) {
    double worst = std::numeric_limits<double>::infinity();
    const double scale = std::ldexp(1.0, -squarings);
    for (int d = 0; d < m; ++d)
        worst = std::min(worst, (t - squarings) * d * ln2 + cmin * scale - std::lgamma(double(d) + 1.0));
    return worst;
}

// exp of the Opitz matrix for the node sequence as given (order matters for
// which stretches the caller reads; the values are divided differences over
// contiguous stretches).
Table opitz_exp(std::span<const double> seq) {
    const int m = int(seq.size());
    Table table;
    table.m = m;

    double lo = seq[0], hi = seq[0], sum = 0.0;
    for (double v : seq) {
        if (!std::isfinite(v)) throw InvalidArgumentError("node list contains a non-finite value");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        sum += v;
    }
    if (hi - lo > max_node_spread)
        throw SpreadTooLargeError("node spread " + std::to_string(hi - lo) + " exceeds overflow guard " +
                                  std::to_string(max_node_spread));
    table.mean = sum / m;

    std::vector<double> c(seq.begin(), seq.end());
    double amax = 0.0;
    for (double& v : c) {
        v -= table.mean;
        amax = std::max(amax, std::abs(v));
    }

    int squarings = 0;
    while (std::ldexp(amax, -squarings) > 0.5) ++squarings;

    int t = squarings;
    while (t > 0 && log_entry_ceiling(m, t, amax) > 700.0) --t;
    if (log_entry_ceiling(m, t, amax) > 700.0 || log_entry_floor(m, t, squarings, -amax) < -700.0)
        throw SpreadTooLargeError("node list (length " + std::to_string(m) + ", spread " +
                                  std::to_string(hi - lo) + ") exceeds the double dynamic range");

    // Scaled matrix B: diagonal c/2^s, superdiagonal 2^(t-s).
    const double diag_scale = std::ldexp(1.0, -squarings);
    const double super = std::ldexp(1.0, t - squarings);
    std::vector<double> d(m);
    for (int i = 0; i < m; ++i) d[i] = c[std::size_t(i)] * diag_scale;

    // Horner on the Taylor polynomial: P = I + B(I + B/2(...)). B is
    // bidiagonal, so each pass is O(m^2).
    const std::size_t mm = std::size_t(m) * m;
    std::vector<double> p(mm, 0.0), q(mm, 0.0);
    auto idx = [m](int i, int j) { return std::size_t(i) * m + j; };
    for (int i = 0; i < m; ++i) p[idx(i, i)] = 1.0;

    for (int k = taylor_order; k >= 1; --k) {
        const double inv_k = 1.0 / k;
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j) {
                double v = d[i] * p[idx(i, j)];
                if (i + 1 <= j) v += super * p[idx(i + 1, j)];
                q[idx(i, j)] = v * inv_k;
            }
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j) p[idx(i, j)] = q[idx(i, j)] + (i == j ? 1.0 : 0.0);
    }

    // Repeated squaring, upper triangular.
    std::vector<double> r(mm, 0.0);
    for (int s = 0; s < squarings; ++s) {
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j) {
                double v = 0.0;
                for (int k = i; k <= j; ++k) v += p[idx(i, k)] * p[idx(k, j)];
                r[idx(i, j)] = v;
            }
        p.swap(r);
    }

    table.log2_sigma = t;
    table.a = std::move(p);
    return table;
}

std::vector<std::size_t> sorted_order(std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    return order;
}

void check_nonempty(std::span<const double> nodes, const char* what) {
    if (nodes.empty()) throw InvalidArgumentError(std::string(what) + " needs at least one node");
}

}  // namespace

double log_dd_exp(std::span<const double> nodes) {
    check_nonempty(nodes, "dd_exp");
    if (nodes.size() == 1) {
        if (!std::isfinite(nodes[0])) throw InvalidArgumentError("node list contains a non-finite value");
        return nodes[0];
    }
    // Sorting makes the result exactly symmetric in the nodes.
    std::vector<double> s(nodes.begin(), nodes.end());
    std::sort(s.begin(), s.end());
    const Table t = opitz_exp(s);
    const int m = t.m;
    return std::log(t.at(0, m - 1)) - double(m - 1) * t.log2_sigma * ln2 + t.mean;
}

double dd_exp(std::span<const double> nodes) {
    return std::exp(log_dd_exp(nodes));
}

double log_partition(std::span<const double> lambda) {
    check_nonempty(lambda, "log_partition");
    std::vector<double> neg(lambda.size());
    for (std::size_t i = 0; i < lambda.size(); ++i) neg[i] = -lambda[i];
    return std::lgamma(double(lambda.size())) + log_dd_exp(neg);
}

std::vector<double> moment_map(std::span<const double> lambda) {
    check_nonempty(lambda, "moment_map");
    const int n = int(lambda.size());
    if (n == 1) {
        if (!std::isfinite(lambda[0])) throw InvalidArgumentError("node list contains a non-finite value");
        return {1.0};
    }

    std::vector<double> neg(n);
    for (int i = 0; i < n; ++i) neg[std::size_t(i)] = -lambda[std::size_t(i)];
    const auto order = sorted_order(neg);

    // Sequence [v, v] of the sorted nodes: the stretch (i, i+n) covers every
    // node once plus node i once more, which is exactly the derivative
    // divided difference in the numerator of p_i.
    std::vector<double> seq(2 * std::size_t(n));
    for (int i = 0; i < n; ++i) seq[std::size_t(i)] = seq[std::size_t(i) + n] = neg[order[std::size_t(i)]];
    const Table t = opitz_exp(seq);

    const double denom = t.at(0, n - 1);
    const double sigma = std::ldexp(1.0, t.log2_sigma);
    std::vector<double> p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) p[order[std::size_t(i)]] = t.at(i, i + n) / (sigma * denom);
    return p;
}

RealMatrix second_moments(std::span<const double> lambda) {
    check_nonempty(lambda, "second_moments");
    const int n = int(lambda.size());

    std::vector<double> neg(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) neg[std::size_t(i)] = -lambda[std::size_t(i)];
    const auto order = sorted_order(neg);
    std::vector<double> sorted(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) sorted[std::size_t(i)] = neg[order[std::size_t(i)]];

    // For each i, the sequence [v_0..v_{n-1}, v_i, v_0..v_{n-1}] exposes
    // every pair numerator as a contiguous stretch: (j, n+1+j) covers the
    // full node list plus one extra v_i and one extra v_j.
    RealMatrix raw(n);
    std::vector<double> seq(2 * std::size_t(n) + 1);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) seq[std::size_t(k)] = seq[std::size_t(k) + n + 1] = sorted[std::size_t(k)];
        seq[std::size_t(n)] = sorted[std::size_t(i)];
        const Table t = opitz_exp(seq);
        const double denom = t.at(0, n - 1);
        const double sigma2 = std::ldexp(1.0, 2 * t.log2_sigma);
        for (int j = 0; j < n; ++j) {
            const double factor = (i == j) ? 2.0 : 1.0;
            raw(i, j) = factor * t.at(j, n + 1 + j) / (sigma2 * denom);
        }
    }

    RealMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double sym = 0.5 * (raw(i, j) + raw(j, i));
            m(int(order[std::size_t(i)]), int(order[std::size_t(j)])) = sym;
        }
    return m;
}

RealMatrix hessian_log_partition(std::span<const double> lambda) {
    const RealMatrix m = second_moments(lambda);
    const std::vector<double> p = moment_map(lambda);
    const int n = m.dim();
    RealMatrix h(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) h(i, j) = m(i, j) - p[std::size_t(i)] * p[std::size_t(j)];
    return h;
}

}  // namespace qent
