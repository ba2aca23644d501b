#pragma once

#include <span>
#include <vector>

#include "qent/matrix.hpp"

namespace qent {

/// Hard overflow guard on max(nodes) - min(nodes).
inline constexpr double max_node_spread = 700.0;

/// Divided difference of exp over the given nodes (repetitions allowed, order
/// irrelevant). exp[v] for a single node is exp(v); confluent lists give
/// derivative values, e.g. exp[a,...,a] (m copies) = exp(a)/(m-1)!.
double dd_exp(std::span<const double> nodes);

/// log of dd_exp; avoids overflow when the node mean is large.
double log_dd_exp(std::span<const double> nodes);

/// ln Z(lambda) = ln[(n-1)! * exp[-lambda_1,...,-lambda_n]] under the
/// unit-total-volume convention, so Z(0) = 1 for every n.
double log_partition(std::span<const double> lambda);

/// p_i = -d ln Z / d lambda_i: the canonical-ensemble first moments.
/// Strictly positive, sums to 1.
std::vector<double> moment_map(std::span<const double> lambda);

/// M_ij = E[t_i t_j] under the canonical ensemble. Symmetric; each row sums
/// to the moment map because sum_j t_j = 1.
RealMatrix second_moments(std::span<const double> lambda);

/// Hessian of ln Z: the covariance of the simplex coordinates. Positive
/// semidefinite with the all-ones vector as null direction (trace gauge).
RealMatrix hessian_log_partition(std::span<const double> lambda);

}  // namespace qent
