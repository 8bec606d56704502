#include "multisep/mixed_roof.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "multisep/errors.hpp"
#include "multisep/separability.hpp"

namespace multisep {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kTraceTol = 1e-12;
constexpr double kPositivityFloor = -1e-10;
constexpr double kRankCutoff = 1e-12;
constexpr double kIsometryTol = 1e-10;
constexpr double kWeightFloor = 1e-14;

// Eigenpairs of rho above the rank cutoff, largest eigenvalue first.
struct SpectralRank {
    Eigen::VectorXd values;   // length r, descending
    Eigen::MatrixXcd vectors; // D x r, matching columns
};

SpectralRank spectral_rank(const DensityMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.matrix);
    const Eigen::VectorXd& ascending = solver.eigenvalues();
    const double largest = ascending(ascending.size() - 1);
    int rank = 0;
    for (Eigen::Index i = 0; i < ascending.size(); ++i) {
        if (ascending(i) > kRankCutoff * largest) ++rank;
    }
    SpectralRank top;
    top.values.resize(rank);
    top.vectors.resize(rho.matrix.rows(), rank);
    for (int i = 0; i < rank; ++i) {
        const Eigen::Index from = ascending.size() - 1 - i;
        top.values(i) = ascending(from);
        top.vectors.col(i) = solver.eigenvectors().col(from);
    }
    return top;
}

// Flat amplitude offsets (k, l, k-swapped, l-swapped) of every canonical
// minor, precomputed once so the descent loop touches amplitudes only.
std::vector<std::array<std::size_t, 4>> minor_quads(const std::vector<int>& dims) {
    std::vector<std::array<std::size_t, 4>> quads;
    quads.reserve(minor_count(dims));
    for_each_minor(dims, [&](const MinorId& id) {
        MultiIndex k_swapped = id.k;
        MultiIndex l_swapped = id.l;
        std::swap(k_swapped.entries[id.axis - 1], l_swapped.entries[id.axis - 1]);
        quads.push_back({flatten_index(dims, id.k), flatten_index(dims, id.l),
                         flatten_index(dims, k_swapped), flatten_index(dims, l_swapped)});
    });
    return quads;
}

// p * C(phi / sqrt(p)) for the unnormalized row phi with p = |phi|^2: the
// minors are quadratic in the amplitudes, so the weights cancel and the
// average concurrence of an ensemble is a plain sum of these terms.
double weighted_concurrence(const Eigen::RowVectorXcd& phi,
                            const std::vector<std::array<std::size_t, 4>>& quads,
                            double normalization) {
    double sum_sq = 0.0;
    const cxd* a = phi.data();
    for (const auto& q : quads) {
        sum_sq += std::norm(a[q[0]] * a[q[1]] - a[q[2]] * a[q[3]]);
    }
    return std::sqrt(normalization * sum_sq);
}

Eigen::MatrixXcd random_isometry(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd gaussian(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) gaussian(r, c) = cxd(gauss(rng), gauss(rng));
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(gaussian);
    return qr.householderQ() * Eigen::MatrixXcd::Identity(rows, cols);
}

}  // namespace

void validate_density(const DensityMatrix& rho) {
    const std::size_t total = space_dim(rho.dims);
    if (rho.matrix.rows() != static_cast<Eigen::Index>(total) ||
        rho.matrix.cols() != static_cast<Eigen::Index>(total)) {
        throw DimensionError("density matrix must be " + std::to_string(total) + "x" +
                             std::to_string(total) + " for the declared dims");
    }
    const double asymmetry = (rho.matrix - rho.matrix.adjoint()).cwiseAbs().maxCoeff();
    if (asymmetry > kHermitianTol) {
        throw ArgumentError("density matrix is not Hermitian (asymmetry " +
                            std::to_string(asymmetry) + ")");
    }
    const double trace_gap = std::abs(rho.matrix.trace() - cxd(1.0, 0.0));
    if (trace_gap > kTraceTol) {
        throw ArgumentError("density matrix trace differs from 1 by " +
                            std::to_string(trace_gap));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.matrix,
                                                           Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < kPositivityFloor) {
        throw ArgumentError("density matrix has a negative eigenvalue " +
                            std::to_string(solver.eigenvalues().minCoeff()));
    }
}

DensityMatrix make_density(std::vector<int> dims, Eigen::MatrixXcd matrix) {
    DensityMatrix rho;
    rho.dims = std::move(dims);
    rho.matrix = std::move(matrix);
    validate_density(rho);
    return rho;
}

int density_rank(const DensityMatrix& rho) {
    validate_density(rho);
    return static_cast<int>(spectral_rank(rho).values.size());
}

Ensemble pure_decomposition(const DensityMatrix& rho, const Eigen::MatrixXcd& isometry) {
    validate_density(rho);
    const SpectralRank top = spectral_rank(rho);
    const Eigen::Index rank = top.values.size();
    if (isometry.cols() != rank) {
        throw ArgumentError("isometry has " + std::to_string(isometry.cols()) +
                            " columns, the density matrix has rank " + std::to_string(rank));
    }
    const double defect =
        (isometry.adjoint() * isometry -
         Eigen::MatrixXcd::Identity(rank, rank)).cwiseAbs().maxCoeff();
    if (defect > kIsometryTol) {
        throw ArgumentError("ensemble parameterization needs an isometry; columns deviate "
                            "from orthonormal by " + std::to_string(defect));
    }

    // Rows of conj(U) * diag(sqrt(lambda)) * V^T are the unnormalized members.
    Eigen::MatrixXcd scaled = top.vectors.transpose();
    for (Eigen::Index k = 0; k < rank; ++k) scaled.row(k) *= std::sqrt(top.values(k));
    const Eigen::MatrixXcd members = isometry.conjugate() * scaled;

    Ensemble ensemble;
    for (Eigen::Index i = 0; i < members.rows(); ++i) {
        const double weight = members.row(i).squaredNorm();
        if (weight <= kWeightFloor) continue;
        const Eigen::RowVectorXcd unit = members.row(i) / std::sqrt(weight);
        ensemble.weights.push_back(weight);
        ensemble.states.push_back(
            make_state(rho.dims, std::vector<cxd>(unit.data(), unit.data() + unit.size())));
    }
    return ensemble;
}

RoofResult convex_roof_concurrence(const DensityMatrix& rho, const RoofConfig& config) {
    validate_density(rho);
    const std::size_t total = space_dim(rho.dims);
    if (total > kMaxRoofDim) {
        throw CapacityError("roof estimation supports density matrices up to dimension " +
                            std::to_string(kMaxRoofDim) + ", got " + std::to_string(total));
    }
    if (config.restarts < 1) throw ArgumentError("roof estimation needs at least one restart");
    if (config.max_iters < 0) throw ArgumentError("roof iteration budget must be nonnegative");
    if (!(config.concurrence.normalization > 0.0)) {
        throw ArgumentError("concurrence normalization constant must be positive");
    }

    const SpectralRank top = spectral_rank(rho);
    const Eigen::Index rank = top.values.size();
    const Eigen::Index terms =
        config.ensemble_size == 0 ? rank + 2 : static_cast<Eigen::Index>(config.ensemble_size);
    if (terms < rank) {
        throw ArgumentError("ensemble size " + std::to_string(terms) +
                            " is below the density matrix rank " + std::to_string(rank));
    }

    Eigen::MatrixXcd scaled = top.vectors.transpose();  // rank x D
    for (Eigen::Index k = 0; k < rank; ++k) scaled.row(k) *= std::sqrt(top.values(k));
    const std::vector<std::array<std::size_t, 4>> quads = minor_quads(rho.dims);
    const double normalization = config.concurrence.normalization;
    const std::array<cxd, 2> phases = {cxd(1.0, 0.0), cxd(0.0, 1.0)};

    double best_value = 0.0;
    Eigen::MatrixXcd best_isometry;
    for (int restart = 0; restart < config.restarts; ++restart) {
        std::mt19937_64 rng(config.seed +
                            0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(restart + 1));
        Eigen::MatrixXcd isometry = random_isometry(terms, rank, rng);
        Eigen::MatrixXcd members = isometry.conjugate() * scaled;  // terms x D

        Eigen::VectorXd contribution(terms);
        for (Eigen::Index i = 0; i < terms; ++i) {
            contribution(i) = weighted_concurrence(members.row(i), quads, normalization);
        }
        double value = contribution.sum();

        double step = config.initial_step;
        for (int iter = 0; iter < config.max_iters && step >= config.min_step; ++iter) {
            bool improved = false;
            for (Eigen::Index i = 0; i < terms; ++i) {
                for (Eigen::Index j = i + 1; j < terms; ++j) {
                    for (const cxd& phase : phases) {
                        for (const double sign : {1.0, -1.0}) {
                            const double co = std::cos(sign * step);
                            const cxd si = phase * std::sin(sign * step);
                            // Two-coordinate rotation of rows i and j; the
                            // member rows transform with conjugated weights.
                            const Eigen::RowVectorXcd row_i =
                                co * members.row(i) + std::conj(si) * members.row(j);
                            const Eigen::RowVectorXcd row_j =
                                -si * members.row(i) + co * members.row(j);
                            const double c_i =
                                weighted_concurrence(row_i, quads, normalization);
                            const double c_j =
                                weighted_concurrence(row_j, quads, normalization);
                            if (c_i + c_j < contribution(i) + contribution(j)) {
                                const Eigen::RowVectorXcd u_i =
                                    co * isometry.row(i) + si * isometry.row(j);
                                const Eigen::RowVectorXcd u_j = -std::conj(si) * isometry.row(i) +
                                                                co * isometry.row(j);
                                isometry.row(i) = u_i;
                                isometry.row(j) = u_j;
                                members.row(i) = row_i;
                                members.row(j) = row_j;
                                value += c_i + c_j - contribution(i) - contribution(j);
                                contribution(i) = c_i;
                                contribution(j) = c_j;
                                improved = true;
                            }
                        }
                    }
                }
            }
            if (!improved) step *= config.step_shrink;
        }
        if (restart == 0 || value < best_value) {
            best_value = value;
            best_isometry = isometry;
        }
    }

    RoofResult result;
    result.ensemble = pure_decomposition(rho, best_isometry);
    result.value = 0.0;
    for (std::size_t i = 0; i < result.ensemble.states.size(); ++i) {
        result.value += result.ensemble.weights[i] *
                        concurrence_pure(result.ensemble.states[i], config.concurrence);
    }
    return result;
}

double wootters_concurrence(const DensityMatrix& rho) {
    if (rho.dims != std::vector<int>{2, 2}) {
        throw ArgumentError("the Wootters closed form requires dims [2,2]");
    }
    validate_density(rho);

    Eigen::Matrix4cd flip = Eigen::Matrix4cd::Zero();
    flip(0, 3) = -1.0;
    flip(1, 2) = 1.0;
    flip(2, 1) = 1.0;
    flip(3, 0) = -1.0;

    const Eigen::Matrix4cd product = rho.matrix * flip * rho.matrix.conjugate() * flip;
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(product);

    std::array<double, 4> roots{};
    for (int i = 0; i < 4; ++i) {
        roots[static_cast<std::size_t>(i)] =
            std::sqrt(std::max(0.0, solver.eigenvalues()(i).real()));
    }
    std::sort(roots.begin(), roots.end(), std::greater<double>());
    return std::max(0.0, roots[0] - roots[1] - roots[2] - roots[3]);
}

}  // namespace multisep
