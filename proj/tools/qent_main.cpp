#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qent/dexp.hpp"
#include "qent/entropy.hpp"
#include "qent/errors.hpp"
#include "qent/io.hpp"
#include "qent/montecarlo.hpp"
#include "qent/solver.hpp"
#include "qent/spectral.hpp"

using json = nlohmann::ordered_json;

namespace {

// Exit codes: 0 ok, 2 invalid input, 3 unsupported state, 4 verification
// failure. Errors go to stderr as machine-readable JSON; stdout carries only
// results.
constexpr int exit_invalid = 2;
constexpr int exit_unsupported = 3;
constexpr int exit_verification = 4;

int exit_code_for(const qent::Error& e) {
    if (e.kind() == "near_pure" || e.kind() == "spread_too_large") return exit_unsupported;
    return exit_invalid;
}

void emit_error(const std::string& kind, const std::string& message) {
    json err{{"error", {{"kind", kind}, {"message", message}}}};
    std::cerr << err.dump() << "\n";
}

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream f(path);
    if (!f) throw qent::InvalidArgumentError("cannot open input file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& payload) {
    if (path == "-") {
        std::cout << payload;
        return;
    }
    std::ofstream f(path);
    if (!f) throw qent::InvalidArgumentError("cannot open output file: " + path);
    f << payload;
}

qent::Matrix parse_matrix(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw qent::InvalidArgumentError(std::string("input is not valid JSON: ") + e.what());
    }
    return qent::matrix_from_json(j);
}

qent::DensityMatrix load_density(const std::string& input, double smooth) {
    qent::Matrix m = parse_matrix(read_input(input));
    if (smooth > 0.0) {
        if (smooth >= 1.0) throw qent::InvalidArgumentError("--smooth must be in (0, 1)");
        const int n = m.dim();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                m(i, j) *= 1.0 - smooth;
                if (i == j) m(i, j) += smooth / n;
            }
    }
    return qent::validate_density(m);
}

json solve_to_json(const qent::DensityMatrix& rho, double offset, double tol) {
    const qent::Spectrum spec = qent::eigh(rho.matrix());
    qent::SolveReport solved = qent::solve_lambda(spec.eigenvalues, tol);
    double s_vn = 0.0;
    for (double p : spec.eigenvalues)
        if (p > 0.0) s_vn -= p * std::log(p);
    const double s_rho = solved.entropy + offset;
    json out;
    out["dim"] = rho.dim();
    out["eigenvalues"] = qent::to_json_rounded(spec.eigenvalues);
    out["lambda"] = qent::to_json_rounded(solved.multiplier.values());
    out["s_rho"] = qent::round12(s_rho);
    out["s_vn"] = qent::round12(s_vn);
    out["difference"] = qent::round12(s_rho - s_vn);
    out["iterations"] = solved.iterations;
    out["gradient_norm"] = qent::round12(solved.gradient_norm);
    out["offset"] = qent::round12(offset);
    return out;
}

int run_entropy(const std::string& input, const std::string& output, double offset, double smooth,
                double tol) {
    const qent::DensityMatrix rho = load_density(input, smooth);
    write_output(output, solve_to_json(rho, offset, tol).dump(2) + "\n");
    return 0;
}

int run_sweep(double lo, double hi, double step, const std::string& output) {
    write_output(output, qent::sweep_to_csv(qent::sweep_two_state(lo, hi, step)));
    return 0;
}

int run_mc_check(const std::string& input, const std::string& output, std::uint64_t seed,
                 std::int64_t samples, int streams, double smooth, double tol, double inject_bias) {
    const qent::DensityMatrix rho = load_density(input, smooth);
    const qent::Spectrum spec = qent::eigh(rho.matrix());
    const qent::SolveReport solved = qent::solve_lambda(spec.eigenvalues, tol);
    const std::vector<double>& lambda = solved.multiplier.values();

    // Testing hook: sample a deliberately shifted ensemble so the
    // comparisons must fail (negative control for the 3-sigma gate).
    std::vector<double> lambda_mc = lambda;
    lambda_mc[0] += inject_bias;

    const qent::SamplerConfig cfg(seed, samples, streams);
    json checks = json::array();
    bool all_pass = true;
    auto add_check = [&](const std::string& name, double analytic, double estimate, double se) {
        const double sigmas = se > 0.0 ? std::abs(estimate - analytic) / se
                                       : (estimate == analytic ? 0.0 : std::numeric_limits<double>::infinity());
        const bool pass = sigmas <= 3.0;
        all_pass = all_pass && pass;
        checks.push_back({{"name", name},
                          {"analytic", qent::round12(analytic)},
                          {"estimate", qent::round12(estimate)},
                          {"std_error", qent::round12(se)},
                          {"sigmas", qent::round12(sigmas)},
                          {"pass", pass}});
    };

    const qent::McEstimate mz = qent::estimate_log_partition(lambda_mc, cfg);
    add_check("log_partition", solved.log_partition, mz.mean, mz.std_error);

    const qent::McMatrixEstimate md = qent::estimate_density_matrix(lambda_mc, nullptr, cfg);
    for (int i = 0; i < rho.dim(); ++i)
        add_check("spectrum_" + std::to_string(i), spec.eigenvalues[std::size_t(i)],
                  md.mean(i, i).real(), md.std_error_re(i, i));

    const qent::McEstimate ms = qent::estimate_entropy(lambda_mc, cfg);
    add_check("entropy", solved.entropy, ms.mean, ms.std_error);

    json out;
    out["dim"] = rho.dim();
    out["seed"] = seed;
    out["samples"] = samples;
    out["streams"] = streams;
    out["checks"] = std::move(checks);
    out["pass"] = all_pass;
    write_output(output, out.dump(2) + "\n");
    return all_pass ? 0 : exit_verification;
}

int run_concavity(int dim, int trials, std::uint64_t seed, const std::string& output) {
    if (dim < 2) throw qent::InvalidArgumentError("--dim must be >= 2");
    if (trials < 1) throw qent::InvalidArgumentError("--trials must be >= 1");

    qent::CounterRng rng(seed);
    double min_slack = std::numeric_limits<double>::infinity();
    int violations = 0;
    const double slack_floor = -1e-9;

    for (int trial = 0; trial < trials; ++trial) {
        const int k = 2 + trial % 3;
        std::vector<double> w(static_cast<std::size_t>(k));
        double wsum = 0.0;
        for (double& x : w) {
            x = -std::log(rng.next_uniform_open());
            wsum += x;
        }
        for (double& x : w) x /= wsum;

        qent::Matrix mix(dim);
        double mean_entropy = 0.0;
        for (int c = 0; c < k; ++c) {
            const qent::DensityMatrix rho = qent::random_density(dim, rng);
            mean_entropy += w[std::size_t(c)] * qent::quantum_shannon(rho).s_rho;
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j) mix(i, j) += w[std::size_t(c)] * rho.matrix()(i, j);
        }
        const double mixed_entropy = qent::quantum_shannon(qent::validate_density(mix)).s_rho;
        const double slack = mixed_entropy - mean_entropy;
        min_slack = std::min(min_slack, slack);
        if (slack < slack_floor) ++violations;
    }

    json out;
    out["dim"] = dim;
    out["trials"] = trials;
    out["seed"] = seed;
    out["min_slack"] = qent::round12(min_slack);
    out["violations"] = violations;
    out["pass"] = violations == 0;
    write_output(output, out.dump(2) + "\n");
    return violations == 0 ? 0 : exit_verification;
}

int run_fisher(const std::string& input, const std::string& output, double smooth) {
    const qent::DensityMatrix rho = load_density(input, smooth);
    const qent::Spectrum spec = qent::eigh(rho.matrix());
    const qent::RealMatrix h = qent::fisher_rao(rho);
    const int n = h.dim();

    // Spectrum of the metric itself, through the complex eigensolver.
    qent::Matrix hc(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) hc(i, j) = h(i, j);
    const qent::Spectrum hspec = qent::eigh(hc);

    double ones_residual = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += h(i, j);
        ones_residual = std::max(ones_residual, std::abs(row));
    }

    json out;
    out["dim"] = n;
    out["eigenvalues"] = qent::to_json_rounded(spec.eigenvalues);
    out["matrix"] = qent::to_json_rounded(h);
    out["matrix_spectrum"] = qent::to_json_rounded(hspec.eigenvalues);
    out["ones_residual"] = qent::round12(ones_residual);
    write_output(output, out.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qent: entropy of finite-dimensional quantum states over pure-state phase space"};
    app.require_subcommand(1);

    std::string input = "-";
    std::string output = "-";
    double offset = 0.0;
    double smooth = 0.0;
    double tol = 1e-10;
    std::uint64_t seed = 0;
    std::int64_t samples = 100000;
    int streams = 1;
    double inject_bias = 0.0;
    double sweep_min = -10.0, sweep_max = 10.0, sweep_step = 0.05;
    int dim = 2, trials = 200;

    auto* entropy = app.add_subcommand("entropy", "entropies of a density matrix (JSON input)");
    entropy->add_option("-i,--input", input, "matrix JSON file, or - for stdin");
    entropy->add_option("-o,--output", output, "output file, or - for stdout");
    entropy->add_option("--offset", offset, "additive volume-convention constant for s_rho");
    entropy->add_option("--smooth", smooth, "mix with the maximally mixed state: (1-eps) rho + eps I/n");
    entropy->add_option("--tol", tol, "solver gradient tolerance");

    auto* sweep = app.add_subcommand("sweep", "two-state entropy sweep as CSV");
    sweep->add_option("--min", sweep_min, "lower lambda bound");
    sweep->add_option("--max", sweep_max, "upper lambda bound");
    sweep->add_option("--step", sweep_step, "grid step (> 0)");
    sweep->add_option("-o,--output", output, "output file, or - for stdout");

    auto* mc = app.add_subcommand("mc-check", "compare closed forms against Monte Carlo at 3 sigma");
    mc->add_option("-i,--input", input, "matrix JSON file, or - for stdin");
    mc->add_option("-o,--output", output, "output file, or - for stdout");
    mc->add_option("--seed", seed, "sampler seed")->envname("QENT_SEED");
    mc->add_option("--samples", samples, "sample count")->envname("QENT_SAMPLES");
    mc->add_option("--streams", streams, "independent streams, reduced in order");
    mc->add_option("--smooth", smooth, "mix with the maximally mixed state before checking");
    mc->add_option("--tol", tol, "solver gradient tolerance");
    mc->add_option("--inject-bias", inject_bias, "testing hook: bias the sampled ensemble")->group("");

    auto* conc = app.add_subcommand("concavity", "random-mixture concavity check");
    conc->add_option("--dim", dim, "state dimension (>= 2)");
    conc->add_option("--trials", trials, "number of random mixtures (>= 1)");
    conc->add_option("--seed", seed, "generator seed")->envname("QENT_SEED");
    conc->add_option("-o,--output", output, "output file, or - for stdout");

    auto* fisher = app.add_subcommand("fisher", "Fisher-Rao metric of a density matrix");
    fisher->add_option("-i,--input", input, "matrix JSON file, or - for stdin");
    fisher->add_option("-o,--output", output, "output file, or - for stdout");
    fisher->add_option("--smooth", smooth, "mix with the maximally mixed state first");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::stringstream ss;
        ss << e.what();
        emit_error("invalid_argument", ss.str());
        return exit_invalid;
    }

    try {
        if (entropy->parsed()) return run_entropy(input, output, offset, smooth, tol);
        if (sweep->parsed()) return run_sweep(sweep_min, sweep_max, sweep_step, output);
        if (mc->parsed()) return run_mc_check(input, output, seed, samples, streams, smooth, tol, inject_bias);
        if (conc->parsed()) return run_concavity(dim, trials, seed, output);
        if (fisher->parsed()) return run_fisher(input, output, smooth);
    } catch (const qent::Error& e) {
        emit_error(e.kind(), e.what());
        return exit_code_for(e);
    } catch (const std::exception& e) {
        emit_error("internal", e.what());
        return exit_invalid;
    }
    return exit_invalid;
}
