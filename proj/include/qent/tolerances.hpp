#pragma once

namespace qent {

// Finite-precision contracts, fixed in one place. Structural validation
// (Hermiticity, unit trace, positivity, reconstruction) uses `validation`;
// elementwise arithmetic identities (unit norms, probability sums) use the
// tighter `arithmetic`.
struct Tolerances {
    double validation = 1e-10;
    double arithmetic = 1e-12;
};

inline constexpr Tolerances default_tol{};

}  // namespace qent
