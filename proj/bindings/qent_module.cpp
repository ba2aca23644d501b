#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qent/dexp.hpp"
#include "qent/entropy.hpp"
#include "qent/errors.hpp"
#include "qent/montecarlo.hpp"
#include "qent/rng.hpp"
#include "qent/solver.hpp"
#include "qent/spectral.hpp"

namespace py = pybind11;

namespace {

using complex_array = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;
using real_array = py::array_t<double, py::array::c_style | py::array::forcecast>;

qent::Matrix matrix_from_array(const complex_array& a) {
    if (a.ndim() != 2 || a.shape(0) != a.shape(1))
        throw qent::InvalidArgumentError("expected a square 2-D array");
    const int n = int(a.shape(0));
    qent::Matrix m(n);
    auto r = a.unchecked<2>();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = r(i, j);
    return m;
}

py::array_t<std::complex<double>> array_from_matrix(const qent::Matrix& m) {
    const int n = m.dim();
    py::array_t<std::complex<double>> a({n, n});
    auto w = a.mutable_unchecked<2>();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) w(i, j) = m(i, j);
    return a;
}

py::array_t<double> array_from_real(const qent::RealMatrix& m) {
    const int n = m.dim();
    py::array_t<double> a({n, n});
    auto w = a.mutable_unchecked<2>();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) w(i, j) = m(i, j);
    return a;
}

std::vector<double> vector_from_array(const real_array& a) {
    if (a.ndim() != 1) throw qent::InvalidArgumentError("expected a 1-D array");
    return std::vector<double>(a.data(), a.data() + a.shape(0));
}

std::vector<std::complex<double>> cvector_from_array(const complex_array& a) {
    if (a.ndim() != 1) throw qent::InvalidArgumentError("expected a 1-D array");
    return std::vector<std::complex<double>>(a.data(), a.data() + a.shape(0));
}

py::array_t<std::complex<double>> array_from_state(const qent::PureState& s) {
    py::array_t<std::complex<double>> a(s.dim());
    auto w = a.mutable_unchecked<1>();
    for (int i = 0; i < s.dim(); ++i) w(i) = s[i];
    return a;
}

qent::DensityMatrix density_from_array(const complex_array& a, double tol) {
    return qent::validate_density(matrix_from_array(a), tol);
}

py::dict estimate_to_dict(const qent::McEstimate& e) {
    py::dict d;
    d["mean"] = e.mean;
    d["std_error"] = e.std_error;
    d["samples"] = e.samples;
    return d;
}

qent::SamplerConfig make_config(std::uint64_t seed, std::int64_t samples, int streams) {
    return qent::SamplerConfig(seed, samples, streams);
}

}  // namespace

PYBIND11_MODULE(_qent, m) {
    m.doc() = "Entropy of finite-dimensional quantum states over pure-state phase space";

    static py::exception<qent::Error> qent_error(m, "QentError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const qent::Error& e) {
            py::set_error(qent_error, (e.kind() + ": " + e.what()).c_str());
        }
    });

    // spectral
    m.def(
        "validate_density",
        [](const complex_array& rho, double tol) {
            return array_from_matrix(density_from_array(rho, tol).matrix());
        },
        py::arg("rho"), py::arg("tol") = qent::default_tol.validation,
        "Check Hermiticity, unit trace and positivity; returns the state with tiny negative "
        "eigenvalues clipped.");

    m.def(
        "eigh",
        [](const complex_array& h) {
            const qent::Spectrum s = qent::eigh(matrix_from_array(h));
            return py::make_tuple(py::array_t<double>(py::ssize_t(s.eigenvalues.size()), s.eigenvalues.data()),
                                  array_from_matrix(s.eigenvectors));
        },
        py::arg("hermitian"),
        "Descending eigenvalues and eigenvector columns of a Hermitian matrix.");

    m.def(
        "projector",
        [](const complex_array& psi) {
            return array_from_matrix(qent::projector(qent::PureState::normalized(cvector_from_array(psi))));
        },
        py::arg("psi"));

    m.def(
        "expectation_linear",
        [](const complex_array& observable, const complex_array& rho) {
            return qent::expectation_linear(matrix_from_array(observable),
                                            density_from_array(rho, qent::default_tol.validation));
        },
        py::arg("observable"), py::arg("rho"), "trace(rho F) for Hermitian F.");

    m.def(
        "transition_weights",
        [](const complex_array& psi, const complex_array& observable) {
            const qent::Spectrum basis = qent::eigh(matrix_from_array(observable));
            return qent::transition_weights(qent::PureState::normalized(cvector_from_array(psi)), basis);
        },
        py::arg("psi"), py::arg("observable"),
        "|<eigenvector_i, psi>|^2 in the eigenbasis of the observable.");

    // dexp
    m.def(
        "dd_exp", [](const real_array& nodes) { return qent::dd_exp(vector_from_array(nodes)); },
        py::arg("nodes"), "Divided difference of exp over the nodes.");
    m.def(
        "log_partition", [](const real_array& l) { return qent::log_partition(vector_from_array(l)); },
        py::arg("lam"), "ln Z(lambda), normalized so Z(0) = 1.");
    m.def(
        "moment_map",
        [](const real_array& l) {
            const std::vector<double> p = qent::moment_map(vector_from_array(l));
            return py::array_t<double>(py::ssize_t(p.size()), p.data());
        },
        py::arg("lam"), "-grad ln Z: the canonical-ensemble spectrum.");
    m.def(
        "second_moments",
        [](const real_array& l) { return array_from_real(qent::second_moments(vector_from_array(l))); },
        py::arg("lam"));
    m.def(
        "hessian_log_partition",
        [](const real_array& l) {
            return array_from_real(qent::hessian_log_partition(vector_from_array(l)));
        },
        py::arg("lam"), "Covariance of the simplex coordinates: the Fisher-Rao metric.");

    // solver
    m.def(
        "solve_lambda",
        [](const real_array& p, double tol, int max_iter) {
            const qent::SolveReport r = qent::solve_lambda(vector_from_array(p), tol, max_iter);
            py::dict d;
            d["lambda"] = py::array_t<double>(py::ssize_t(r.multiplier.values().size()),
                                              r.multiplier.values().data());
            d["entropy"] = r.entropy;
            d["log_partition"] = r.log_partition;
            d["gradient_norm"] = r.gradient_norm;
            d["iterations"] = r.iterations;
            d["converged"] = r.converged;
            return d;
        },
        py::arg("p"), py::arg("tol") = 1e-10, py::arg("max_iter") = 100,
        "Gauge-fixed multiplier with moment_map(lambda) = p, plus the entropy.");
    m.def(
        "entropy_dual", [](const real_array& p) { return qent::entropy_dual(vector_from_array(p)); },
        py::arg("p"));

    // entropy
    m.def(
        "von_neumann",
        [](const complex_array& rho) {
            return qent::von_neumann(density_from_array(rho, qent::default_tol.validation));
        },
        py::arg("rho"));
    m.def(
        "quantum_shannon",
        [](const complex_array& rho, double offset) {
            const qent::EntropyReport r =
                qent::quantum_shannon(density_from_array(rho, qent::default_tol.validation), offset);
            py::dict d;
            d["spectrum"] = py::array_t<double>(py::ssize_t(r.spectrum.size()), r.spectrum.data());
            d["s_von_neumann"] = r.s_von_neumann;
            d["s_rho"] = r.s_rho;
            d["difference"] = r.difference;
            d["lambda"] = py::array_t<double>(py::ssize_t(r.multiplier.values().size()),
                                              r.multiplier.values().data());
            d["volume_offset"] = r.volume_offset;
            d["iterations"] = r.iterations;
            d["gradient_norm"] = r.gradient_norm;
            return d;
        },
        py::arg("rho"), py::arg("offset") = 0.0,
        "Phase-space and von Neumann entropies of a density matrix.");
    m.def("two_state_rho1", &qent::two_state_rho1, py::arg("delta"));
    m.def(
        "two_state_entropy",
        [](double lam) {
            const qent::TwoStateEntropy e = qent::two_state_entropy(lam);
            return py::make_tuple(e.s_rho, e.s_vn);
        },
        py::arg("lam"));
    m.def(
        "sweep_two_state",
        [](double lo, double hi, double step) {
            py::list rows;
            for (const qent::SweepRow& r : qent::sweep_two_state(lo, hi, step)) {
                py::dict d;
                d["lambda"] = r.lambda;
                d["p1"] = r.p1;
                d["s_rho"] = r.s_rho;
                d["s_vn"] = r.s_vn;
                d["ds_rho"] = r.ds_rho;
                d["ds_vn"] = r.ds_vn;
                rows.append(std::move(d));
            }
            return rows;
        },
        py::arg("lambda_min") = -10.0, py::arg("lambda_max") = 10.0, py::arg("step") = 0.05);
    m.def(
        "fisher_rao",
        [](const complex_array& rho) {
            return array_from_real(qent::fisher_rao(density_from_array(rho, qent::default_tol.validation)));
        },
        py::arg("rho"));
    m.def(
        "measurement_ensemble",
        [](const complex_array& psi, const complex_array& observable) {
            const qent::MeasurementEnsemble e = qent::measurement_ensemble(
                qent::PureState::normalized(cvector_from_array(psi)), matrix_from_array(observable));
            py::dict d;
            d["weights"] = py::array_t<double>(py::ssize_t(e.weights.size()), e.weights.data());
            d["s_vn"] = e.s_vn;
            d["degenerate"] = e.degenerate;
            return d;
        },
        py::arg("psi"), py::arg("observable"));

    // montecarlo
    m.def(
        "sample_haar",
        [](int dim, std::uint64_t seed) {
            qent::CounterRng rng(seed);
            return array_from_state(qent::sample_haar(dim, rng));
        },
        py::arg("dim"), py::arg("seed"));
    m.def(
        "estimate_log_partition",
        [](const real_array& l, std::uint64_t seed, std::int64_t samples, int streams) {
            return estimate_to_dict(
                qent::estimate_log_partition(vector_from_array(l), make_config(seed, samples, streams)));
        },
        py::arg("lam"), py::arg("seed"), py::arg("samples"), py::arg("streams") = 1);
    m.def(
        "estimate_entropy",
        [](const real_array& l, std::uint64_t seed, std::int64_t samples, int streams) {
            return estimate_to_dict(
                qent::estimate_entropy(vector_from_array(l), make_config(seed, samples, streams)));
        },
        py::arg("lam"), py::arg("seed"), py::arg("samples"), py::arg("streams") = 1);
    m.def(
        "estimate_density_matrix",
        [](const real_array& l, std::uint64_t seed, std::int64_t samples, int streams,
           py::object basis) {
            qent::Matrix b;
            const qent::Matrix* bp = nullptr;
            if (!basis.is_none()) {
                b = matrix_from_array(basis.cast<complex_array>());
                bp = &b;
            }
            const qent::McMatrixEstimate e = qent::estimate_density_matrix(
                vector_from_array(l), bp, make_config(seed, samples, streams));
            py::dict d;
            d["mean"] = array_from_matrix(e.mean);
            d["std_error_re"] = array_from_real(e.std_error_re);
            d["std_error_im"] = array_from_real(e.std_error_im);
            d["samples"] = e.samples;
            return d;
        },
        py::arg("lam"), py::arg("seed"), py::arg("samples"), py::arg("streams") = 1,
        py::arg("basis") = py::none());
    m.def(
        "estimate_expectation",
        [](const std::function<double(const complex_array&)>& f, const real_array& l,
           std::uint64_t seed, std::int64_t samples, int streams) {
            auto wrapped = [&f](const qent::PureState& s) { return f(array_from_state(s)); };
            return estimate_to_dict(qent::estimate_expectation(wrapped, vector_from_array(l),
                                                               make_config(seed, samples, streams)));
        },
        py::arg("observable"), py::arg("lam"), py::arg("seed"), py::arg("samples"),
        py::arg("streams") = 1,
        "Canonical-ensemble mean of an arbitrary real function of the sampled state.");
    m.def(
        "estimate_projector_covariance",
        [](const real_array& l, std::uint64_t seed, std::int64_t samples, int streams) {
            const qent::McCovariance c = qent::estimate_projector_covariance(
                vector_from_array(l), make_config(seed, samples, streams));
            py::dict d;
            d["mean"] = array_from_real(c.mean);
            d["std_error"] = array_from_real(c.std_error);
            d["samples"] = c.samples;
            return d;
        },
        py::arg("lam"), py::arg("seed"), py::arg("samples"), py::arg("streams") = 1);
    m.def(
        "simplex_quadrature",
        [](const real_array& l, double tol) {
            const qent::QuadratureResult q = qent::simplex_quadrature(vector_from_array(l), tol);
            return py::make_tuple(q.log_z, py::array_t<double>(py::ssize_t(q.p.size()), q.p.data()));
        },
        py::arg("lam"), py::arg("tol") = 1e-11,
        "Deterministic simplex-quadrature oracle for n <= 3: (log_z, p).");
    m.def(
        "random_unitary",
        [](int dim, std::uint64_t seed) {
            qent::CounterRng rng(seed);
            return array_from_matrix(qent::random_unitary(dim, rng));
        },
        py::arg("dim"), py::arg("seed"));
    m.def(
        "random_density",
        [](int dim, std::uint64_t seed, double min_eigenvalue) {
            qent::CounterRng rng(seed);
            return array_from_matrix(qent::random_density(dim, rng, min_eigenvalue).matrix());
        },
        py::arg("dim"), py::arg("seed"), py::arg("min_eigenvalue") = 5e-3);
    m.def("rng_value", &qent::CounterRng::value_at, py::arg("seed"), py::arg("counter"),
          "Raw counter-mode generator output (see docs/rng.md).");

    m.attr("__version__") = "0.1.0";
}
