#pragma once

// Seeded random generators shared by the test binaries. Everything routes
// through std::mt19937_64 so failures reproduce from the printed seed.

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/QR>

#include "multisep/mixed_roof.hpp"
#include "multisep/tensor_core.hpp"

namespace testsupport {

using multisep::cxd;

inline cxd random_complex(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    return {gauss(rng), gauss(rng)};
}

inline multisep::FactorVector random_factor(int dim, std::mt19937_64& rng) {
    multisep::FactorVector vec;
    vec.entries.resize(static_cast<std::size_t>(dim));
    for (cxd& entry : vec.entries) entry = random_complex(rng);
    return vec;
}

/// Unnormalized dense state with Gaussian amplitudes.
inline multisep::StateTensor random_state(const std::vector<int>& dims, std::mt19937_64& rng) {
    std::vector<cxd> amplitudes(multisep::space_dim(dims));
    for (cxd& amplitude : amplitudes) amplitude = random_complex(rng);
    return multisep::make_state(dims, std::move(amplitudes));
}

inline multisep::StateTensor random_unit_state(const std::vector<int>& dims,
                                               std::mt19937_64& rng) {
    return multisep::normalize(random_state(dims, rng));
}

/// Product of independent random factors.
inline multisep::StateTensor random_product_state(const std::vector<int>& dims,
                                                  std::mt19937_64& rng) {
    std::vector<multisep::FactorVector> factors;
    factors.reserve(dims.size());
    for (int dim : dims) factors.push_back(random_factor(dim, rng));
    return multisep::tensor_product(factors);
}

inline Eigen::MatrixXcd random_matrix(int rows, int cols, std::mt19937_64& rng) {
    Eigen::MatrixXcd matrix(rows, cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) matrix(r, c) = random_complex(rng);
    }
    return matrix;
}

/// Haar-style random unitary via QR of a Gaussian matrix.
inline Eigen::MatrixXcd random_unitary(int dim, std::mt19937_64& rng) {
    const Eigen::MatrixXcd gaussian = random_matrix(dim, dim, rng);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(gaussian);
    return qr.householderQ() * Eigen::MatrixXcd::Identity(dim, dim);
}

/// n x r random isometry (orthonormal columns).
inline Eigen::MatrixXcd random_isometry(int rows, int cols, std::mt19937_64& rng) {
    const Eigen::MatrixXcd gaussian = random_matrix(rows, cols, rng);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(gaussian);
    return qr.householderQ() * Eigen::MatrixXcd::Identity(rows, cols);
}

/// Random mixed state of the requested rank: convex mixture of rank-1
/// projectors of Haar-random pure states with Dirichlet-like weights.
inline multisep::DensityMatrix random_density(const std::vector<int>& dims, int rank,
                                              std::mt19937_64& rng) {
    const int total = static_cast<int>(multisep::space_dim(dims));
    std::gamma_distribution<double> gamma(1.0, 1.0);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(total, total);
    std::vector<double> weights(static_cast<std::size_t>(rank));
    double sum = 0.0;
    for (double& w : weights) sum += (w = gamma(rng));
    for (int k = 0; k < rank; ++k) {
        const multisep::StateTensor psi = random_unit_state(dims, rng);
        Eigen::VectorXcd vec(total);
        for (int i = 0; i < total; ++i) vec(i) = psi.amplitudes[static_cast<std::size_t>(i)];
        rho += (weights[static_cast<std::size_t>(k)] / sum) * (vec * vec.adjoint());
    }
    // Exact Hermitization absorbs rounding from the rank-1 accumulation.
    rho = ((rho + rho.adjoint()) / 2.0).eval();
    rho /= rho.trace().real();
    return multisep::make_density(dims, std::move(rho));
}

/// Bell projector mixed with white noise: p |Phi+><Phi+| + (1-p) I/4.
inline multisep::DensityMatrix werner_density(double p) {
    Eigen::Vector4cd bell;
    bell << 1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0);
    Eigen::Matrix4cd rho = p * (bell * bell.adjoint()) +
                           (1.0 - p) * Eigen::Matrix4cd::Identity() / 4.0;
    return multisep::make_density({2, 2}, rho);
}

}  // namespace testsupport
