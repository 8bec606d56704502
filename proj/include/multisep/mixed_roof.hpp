#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "multisep/concurrence.hpp"
#include "multisep/tensor_core.hpp"

namespace multisep {

/// Largest density-matrix side supported by the roof estimator.
inline constexpr std::size_t kMaxRoofDim = 64;

struct DensityMatrix {
    std::vector<int> dims;
    Eigen::MatrixXcd matrix;  // D x D, D = prod(dims)
};

/// Validates shape, Hermiticity (1e-12), positivity (eigenvalues >= -1e-10)
/// and unit trace (1e-12); throws ArgumentError on violation.
DensityMatrix make_density(std::vector<int> dims, Eigen::MatrixXcd matrix);
void validate_density(const DensityMatrix& rho);

/// Numerical rank of rho: eigenvalues above 1e-12 * largest.
int density_rank(const DensityMatrix& rho);

/// A pure-state mixture: weights are nonnegative and sum to 1, states are
/// normalized, and sum_i weights[i] |psi_i><psi_i| reproduces the source.
struct Ensemble {
    std::vector<double> weights;
    std::vector<StateTensor> states;
};

/// Ensemble from an n x r isometry (U^dagger U = I within 1e-10, r the rank
/// of rho): unnormalized |phi_i> = sum_k conj(U_{ik}) sqrt(lambda_k) |v_k>
/// over the eigenpairs of rho, weight p_i = <phi_i|phi_i>; terms with
/// p_i <= 1e-14 are dropped. Every pure decomposition of rho with at most n
/// terms arises this way.
Ensemble pure_decomposition(const DensityMatrix& rho, const Eigen::MatrixXcd& isometry);

struct RoofConfig {
    int ensemble_size = 0;  // number of ensemble terms n; 0 = rank + 2
    int restarts = 32;
    int max_iters = 500;    // coordinate-descent sweeps per restart
    std::uint64_t seed = 1;
    double initial_step = 0.9;
    double step_shrink = 0.5;
    double min_step = 1e-8;
    ConcurrenceConfig concurrence;
};

struct RoofResult {
    double value = 0.0;
    Ensemble ensemble;  // the achieving decomposition
};

/// Convex-roof estimate: minimizes the average pure-state concurrence
/// sum_i p_i C(psi_i) over pure decompositions, parameterizing the isometry
/// by products of two-coordinate rotations with phases and running
/// derivative-free coordinate descent with shrinking steps from random
/// restarts. The result is an upper bound on the true roof (up to numerical
/// error) and is deterministic for a fixed config.
RoofResult convex_roof_concurrence(const DensityMatrix& rho, const RoofConfig& config = {});

/// Two-qubit closed form: max(0, l1-l2-l3-l4) with l_i the decreasing square
/// roots of the eigenvalues of rho (Y(x)Y) conj(rho) (Y(x)Y), Y the
/// antisymmetric qubit involution. Oracle for validating the roof estimate.
double wootters_concurrence(const DensityMatrix& rho);

}  // namespace multisep
