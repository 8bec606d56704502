#include "multisep/decomposition.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include <Eigen/SVD>

#include "multisep/errors.hpp"

namespace multisep {

namespace {

Eigen::MatrixXcd as_columns(const std::vector<Eigen::VectorXcd>& vectors) {
    const Eigen::Index rows = vectors.empty() ? 0 : vectors.front().size();
    Eigen::MatrixXcd matrix(rows, static_cast<Eigen::Index>(vectors.size()));
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        matrix.col(static_cast<Eigen::Index>(i)) = vectors[i];
    }
    return matrix;
}

// Column-pivoted modified Gram-Schmidt sweep. Returns the index of one
// numerically dependent column (the next pivot candidate once its residual
// falls below tol * largest column norm; ties at the pivot choice broken by
// lowest index), or nothing when the columns are independent.
std::optional<Eigen::Index> find_dependent_column(const Eigen::MatrixXcd& matrix, double tol) {
    const Eigen::Index count = matrix.cols();
    if (count <= 1) return std::nullopt;

    Eigen::MatrixXcd residual = matrix;
    std::vector<bool> used(static_cast<std::size_t>(count), false);
    double largest = 0.0;
    for (Eigen::Index c = 0; c < count; ++c) largest = std::max(largest, matrix.col(c).norm());
    const double limit = tol * largest;

    for (Eigen::Index step = 0; step < count; ++step) {
        Eigen::Index pivot = -1;
        double pivot_norm = -1.0;
        for (Eigen::Index c = 0; c < count; ++c) {
            if (used[static_cast<std::size_t>(c)]) continue;
            const double n = residual.col(c).norm();
            if (n > pivot_norm) {
                pivot_norm = n;
                pivot = c;
            }
        }
        if (pivot_norm <= limit) return pivot;  // every remaining column is dependent
        used[static_cast<std::size_t>(pivot)] = true;
        const Eigen::VectorXcd q = residual.col(pivot) / pivot_norm;
        for (Eigen::Index c = 0; c < count; ++c) {
            if (used[static_cast<std::size_t>(c)]) continue;
            residual.col(c) -= q * q.dot(residual.col(c));
        }
    }
    return std::nullopt;
}

void check_factor_lists(const std::vector<Eigen::VectorXcd>& primary,
                        const std::vector<Eigen::VectorXcd>& secondary) {
    if (primary.size() != secondary.size()) {
        throw ArgumentError("factor lists must pair up term by term");
    }
    for (const auto& list : {primary, secondary}) {
        for (const Eigen::VectorXcd& vec : list) {
            if (vec.size() != list.front().size()) {
                throw ArgumentError("factor vectors within one list must share a dimension");
            }
        }
    }
}

std::size_t complement_dim(const std::vector<int>& dims, const std::vector<int>& cut) {
    std::vector<bool> in_cut(dims.size(), false);
    for (int axis : cut) {
        if (axis < 1 || axis > static_cast<int>(dims.size()) ||
            in_cut[static_cast<std::size_t>(axis - 1)]) {
            throw ArgumentError("cut axes must be distinct labels in 1.." +
                                std::to_string(dims.size()));
        }
        in_cut[static_cast<std::size_t>(axis - 1)] = true;
    }
    if (cut.empty() || cut.size() == dims.size()) {
        throw ArgumentError("cut must be a nonempty proper subset of the axes");
    }
    std::size_t dim = 1;
    for (std::size_t j = 0; j < dims.size(); ++j) {
        if (!in_cut[j]) dim *= static_cast<std::size_t>(dims[j]);
    }
    return dim;
}

}  // namespace

bool merge_step(std::vector<Eigen::VectorXcd>& primary,
                std::vector<Eigen::VectorXcd>& secondary, double tol) {
    check_factor_lists(primary, secondary);
    if (primary.size() <= 1) return false;

    const Eigen::MatrixXcd columns = as_columns(primary);
    const std::optional<Eigen::Index> found = find_dependent_column(columns, tol);
    if (!found) return false;
    const std::size_t dep = static_cast<std::size_t>(*found);

    Eigen::MatrixXcd others(columns.rows(), columns.cols() - 1);
    Eigen::Index at = 0;
    for (Eigen::Index c = 0; c < columns.cols(); ++c) {
        if (c != *found) others.col(at++) = columns.col(c);
    }
    const Eigen::VectorXcd gamma =
        others.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(columns.col(*found));

    at = 0;
    for (std::size_t i = 0; i < primary.size(); ++i) {
        if (i == dep) continue;
        secondary[i] += gamma(at++) * secondary[dep];
    }
    primary.erase(primary.begin() + static_cast<std::ptrdiff_t>(dep));
    secondary.erase(secondary.begin() + static_cast<std::ptrdiff_t>(dep));
    return true;
}

Decomposition minimal_decomposition(const StateTensor& state, const std::vector<int>& cut,
                                    double tol) {
    if (norm(state) == 0.0) throw ArgumentError("the zero state has no minimal decomposition");
    const Eigen::MatrixXcd unfolding = matricize(state, cut);

    Decomposition result;
    result.dims = state.dims;
    result.cut = cut;
    for (Eigen::Index r = 0; r < unfolding.rows(); ++r) {
        if (unfolding.row(r).norm() == 0.0) continue;
        Eigen::VectorXcd left = Eigen::VectorXcd::Zero(unfolding.rows());
        left(r) = cxd(1.0, 0.0);
        result.left_factors.push_back(std::move(left));
        result.right_factors.push_back(unfolding.row(r).transpose());
    }
    while (merge_step(result.left_factors, result.right_factors, tol) ||
           merge_step(result.right_factors, result.left_factors, tol)) {
    }
    result.rank = static_cast<int>(result.left_factors.size());
    return result;
}

int rank_oracle(const StateTensor& state, const std::vector<int>& cut, double tol) {
    if (norm(state) == 0.0) throw ArgumentError("the zero state has no matricization rank");
    if (!(tol >= 0.0)) throw ArgumentError("rank tolerance must be nonnegative");
    const Eigen::MatrixXcd unfolding = matricize(state, cut);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(unfolding);
    const Eigen::VectorXd& sigma = svd.singularValues();
    int rank = 0;
    if (sigma.size() > 0 && sigma(0) > 0.0) {
        const double threshold = tol * sigma(0);
        while (rank < sigma.size() && sigma(rank) > threshold) ++rank;
    }
    return rank;
}

StateTensor reconstruct(const Decomposition& decomposition) {
    const std::size_t total = space_dim(decomposition.dims);
    if (decomposition.left_factors.size() != decomposition.right_factors.size() ||
        decomposition.rank != static_cast<int>(decomposition.left_factors.size())) {
        throw ArgumentError("decomposition rank and factor list lengths disagree");
    }
    const std::size_t cols = complement_dim(decomposition.dims, decomposition.cut);
    const std::size_t rows = total / cols;

    Eigen::MatrixXcd unfolding = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows),
                                                        static_cast<Eigen::Index>(cols));
    for (int i = 0; i < decomposition.rank; ++i) {
        const Eigen::VectorXcd& left = decomposition.left_factors[static_cast<std::size_t>(i)];
        const Eigen::VectorXcd& right = decomposition.right_factors[static_cast<std::size_t>(i)];
        if (left.size() != unfolding.rows() || right.size() != unfolding.cols()) {
            throw ArgumentError("decomposition factor " + std::to_string(i + 1) +
                                " does not match the cut shape");
        }
        unfolding += left * right.transpose();
    }
    return dematricize(unfolding, decomposition.dims, decomposition.cut);
}

Decomposition orthogonalize(const Decomposition& decomposition, double tol) {
    const StateTensor state = reconstruct(decomposition);
    const Eigen::MatrixXcd unfolding = matricize(state, decomposition.cut);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(unfolding, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();

    Decomposition orthogonal;
    orthogonal.dims = decomposition.dims;
    orthogonal.cut = decomposition.cut;
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
        if (sigma.size() > 0 && sigma(i) <= tol * sigma(0)) break;
        orthogonal.left_factors.push_back(sigma(i) * svd.matrixU().col(i));
        orthogonal.right_factors.push_back(svd.matrixV().col(i).conjugate());
    }
    orthogonal.rank = static_cast<int>(orthogonal.left_factors.size());
    return orthogonal;
}

}  // namespace multisep
