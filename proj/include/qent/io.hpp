#pragma once

#include <string>
#include <vector>

#include "qent/entropy.hpp"
#include "qent/matrix.hpp"

#include "json.hpp"

namespace qent {

/// Matrix wire format: {"dim": n, "re": [n*n row-major], "im": [n*n]}.
Matrix matrix_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const Matrix& m);

/// Numbers in reports are rounded to 12 significant digits: below the
/// validation tolerances, above double-precision noise, and byte-stable.
double round12(double x);
std::string format12(double x);

nlohmann::json to_json_rounded(const std::vector<double>& v);
nlohmann::json to_json_rounded(const RealMatrix& m);

/// CSV with header lambda,p1,s_rho,s_vn,ds_rho,ds_vn, one row per grid point.
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

}  // namespace qent
