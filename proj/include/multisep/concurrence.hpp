#pragma once

#include <vector>

#include "multisep/tensor_core.hpp"

namespace multisep {

/// C(psi) = sqrt(normalization * sum over canonical minors |S|^2).
/// The default normalization of 1 together with the canonical (duplicated)
/// enumeration reproduces the two-qubit closed form 2|a00 a11 - a01 a10| and,
/// bipartitely, sqrt(2(1 - Tr rho_A^2)).
struct ConcurrenceConfig {
    double normalization = 1.0;  // must be > 0
    double zero_tol = 1e-10;     // zero-detection tolerance, e.g. in reports
};

double concurrence_pure(const StateTensor& state, const ConcurrenceConfig& config = {});

/// Two-qubit closed form 2|a00 a11 - a01 a10| on the normalized amplitudes.
/// Requires dims exactly [2,2].
double concurrence_two_qubit(const StateTensor& state);

/// Independent bipartite oracle across the given cut: sqrt(2(1 - Tr rho_A^2))
/// with rho_A = M M^dagger for M = matricize(state, cut).
double linear_entropy_concurrence(const StateTensor& state, const std::vector<int>& cut);

}  // namespace multisep
