#pragma once

#include <vector>

#include "qent/matrix.hpp"
#include "qent/solver.hpp"
#include "qent/spectral.hpp"

namespace qent {

struct EntropyReport {
    std::vector<double> spectrum;  // eigenvalues, descending
    double s_von_neumann;
    double s_rho;          // phase-space entropy, volume offset included
    double difference;     // s_rho - s_von_neumann
    Multiplier multiplier;
    double volume_offset;
    int iterations;        // solver diagnostics
    double gradient_norm;
};

/// -sum p ln p over the spectrum (0 ln 0 := 0). In [0, ln n].
double von_neumann(const DensityMatrix& rho);

/// Eigendecomposes rho, solves the dual problem on the spectrum, and reports
/// both entropies. `offset` is an additive volume-convention constant for
/// s_rho (the default normalizes total phase-space volume to 1).
EntropyReport quantum_shannon(const DensityMatrix& rho, double offset = 0.0);

/// Two-state first moment rho_1 = 1/Delta + 1/(1 - e^Delta) for
/// Delta = lambda_1 - lambda_2, with a series branch near Delta = 0.
double two_state_rho1(double delta);

struct TwoStateEntropy {
    double s_rho;
    double s_vn;
};

/// Closed forms for the two-state family lambda_1 = -lambda,
/// lambda_2 = lambda. Guarded to |lambda| <= 350.
TwoStateEntropy two_state_entropy(double lambda);

struct SweepRow {
    double lambda;
    double p1;
    double s_rho;
    double s_vn;
    double ds_rho;  // analytic d s_rho / d lambda
    double ds_vn;
};

/// Closed-form grid of the two-state entropies and their lambda-derivatives.
std::vector<SweepRow> sweep_two_state(double lambda_min, double lambda_max, double step);

/// Hessian of ln Z at the solved multiplier, in the descending-eigenvalue
/// basis of rho: the Fisher-Rao metric. PSD with all-ones null direction.
RealMatrix fisher_rao(const DensityMatrix& rho);

struct MeasurementEnsemble {
    std::vector<double> weights;
    double s_vn;
    bool degenerate;  // observable eigenvalues not distinct; weights then
                      // depend on the eigenbasis choice
};

/// Post-measurement ensemble of `observable` measured in state `initial`:
/// transition weights and their Shannon entropy.
MeasurementEnsemble measurement_ensemble(const PureState& initial, const Matrix& observable);

}  // namespace qent
