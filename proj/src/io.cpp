#include "qent/io.hpp"

#include <cstdio>
#include <cstdlib>

#include "qent/errors.hpp"

namespace qent {

Matrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("re") || !j.contains("im"))
        throw InvalidArgumentError("matrix JSON needs fields dim, re, im");
    if (!j["dim"].is_number_integer())
        throw InvalidArgumentError("matrix JSON field dim must be an integer");
    const int dim = j["dim"].get<int>();
    if (dim < 1) throw InvalidArgumentError("matrix JSON dim must be >= 1");

    const auto& re = j["re"];
    const auto& im = j["im"];
    const std::size_t need = std::size_t(dim) * std::size_t(dim);
    if (!re.is_array() || !im.is_array() || re.size() != need || im.size() != need)
        throw InvalidArgumentError("matrix JSON re/im must be arrays of length dim^2 = " +
                                   std::to_string(need));

    std::vector<cplx> entries(need);
    for (std::size_t k = 0; k < need; ++k) {
        if (!re[k].is_number() || !im[k].is_number())
            throw InvalidArgumentError("matrix JSON re/im entries must be numbers");
        entries[k] = cplx(re[k].get<double>(), im[k].get<double>());
    }
    return Matrix(dim, std::move(entries));
}

nlohmann::json matrix_to_json(const Matrix& m) {
    nlohmann::json re = nlohmann::json::array();
    nlohmann::json im = nlohmann::json::array();
    for (const cplx& z : m.entries()) {
        re.push_back(round12(z.real()));
        im.push_back(round12(z.imag()));
    }
    return {{"dim", m.dim()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

double round12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

std::string format12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

nlohmann::json to_json_rounded(const std::vector<double>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (double x : v) a.push_back(round12(x));
    return a;
}

nlohmann::json to_json_rounded(const RealMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < m.dim(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < m.dim(); ++j) row.push_back(round12(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::string out = "lambda,p1,s_rho,s_vn,ds_rho,ds_vn\n";
    for (const SweepRow& r : rows) {
        out += format12(r.lambda);
        out += ',';
        out += format12(r.p1);
        out += ',';
        out += format12(r.s_rho);
        out += ',';
        out += format12(r.s_vn);
        out += ',';
        out += format12(r.ds_rho);
        out += ',';
        out += format12(r.ds_vn);
        out += '\n';
    }
    return out;
}

}  // namespace qent
