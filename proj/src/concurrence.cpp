#include "multisep/concurrence.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "multisep/errors.hpp"
#include "multisep/separability.hpp"

namespace multisep {

double concurrence_pure(const StateTensor& state, const ConcurrenceConfig& config) {
    if (!(config.normalization > 0.0)) {
        throw ArgumentError("concurrence normalization constant must be positive");
    }
    if (norm(state) == 0.0) throw ArgumentError("the zero state has no concurrence");
    const MinorScan scan = scan_minors(normalize(state));
    return std::sqrt(config.normalization * scan.sum_sq);
}

double concurrence_two_qubit(const StateTensor& state) {
    if (state.dims != std::vector<int>{2, 2}) {
        throw ArgumentError("the two-qubit closed form requires dims [2,2]");
    }
    if (norm(state) == 0.0) throw ArgumentError("the zero state has no concurrence");
    const StateTensor unit = normalize(state);
    const std::vector<cxd>& a = unit.amplitudes;
    return 2.0 * std::abs(a[0] * a[3] - a[1] * a[2]);
}

double linear_entropy_concurrence(const StateTensor& state, const std::vector<int>& cut) {
    if (norm(state) == 0.0) throw ArgumentError("the zero state has no concurrence");
    const Eigen::MatrixXcd unfolding = matricize(normalize(state), cut);
    // Tr rho_A^2 = ||M M^dagger||_F^2 for unit-norm amplitudes.
    const double purity = (unfolding * unfolding.adjoint()).squaredNorm();
    return std::sqrt(2.0 * std::max(0.0, 1.0 - purity));
}

}  // namespace multisep
