#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "multisep/errors.hpp"

namespace multisep {

using cxd = std::complex<double>;

/// Largest dense amplitude array handled by this library.
inline constexpr std::size_t kMaxDenseSize = std::size_t{1} << 20;

/// Dense multipartite amplitude tensor over factor spaces C^{N_1} x ... x C^{N_m}.
///
/// Flattening is row-major with the last factor index fastest:
///   offset(i_1,...,i_m) = ((i_1*N_2 + i_2)*N_3 + ...)*N_m + i_m.
/// Every module and file format in this project uses this one bijection.
struct StateTensor {
    std::vector<int> dims;
    std::vector<cxd> amplitudes;

    int factor_count() const { return static_cast<int>(dims.size()); }
    std::size_t size() const { return amplitudes.size(); }
};

/// One basis index per factor, entry j in [0, N_j).
struct MultiIndex {
    std::vector<int> entries;
};

/// A vector in a single factor space.
struct FactorVector {
    std::vector<cxd> entries;

    int dim() const { return static_cast<int>(entries.size()); }
};

/// One component of a direct-sum block decomposition. `label` holds the
/// partition class chosen for each factor; the component keeps the full
/// input dims with amplitudes outside the block zeroed.
struct Block {
    std::vector<int> label;
    StateTensor component;
};

/// Validates a dims list and returns the total space dimension.
/// Throws ArgumentError for empty dims or a factor below 1, CapacityError
/// when the product exceeds kMaxDenseSize.
std::size_t space_dim(const std::vector<int>& dims);

/// Row-major strides; stride[j] is the offset step of index j.
std::vector<std::size_t> index_strides(const std::vector<int>& dims);

StateTensor make_state(std::vector<int> dims, std::vector<cxd> amplitudes);

std::size_t flatten_index(const std::vector<int>& dims, const MultiIndex& index);
MultiIndex unflatten_index(const std::vector<int>& dims, std::size_t offset);

/// Product state with amplitudes a_{i_1...i_m} = prod_j factors[j][i_j].
StateTensor tensor_product(const std::vector<FactorVector>& factors);

/// Reshapes the tensor into a matrix. `row_axes` are 1-based factor labels
/// forming a nonempty proper subset of {1..m}; rows are indexed by the
/// row-axis multi-indices and columns by the complement, both row-major.
Eigen::MatrixXcd matricize(const StateTensor& state, const std::vector<int>& row_axes);

/// Inverse of matricize for the same dims and row_axes.
StateTensor dematricize(const Eigen::MatrixXcd& matrix, const std::vector<int>& dims,
                        const std::vector<int>& row_axes);

double norm(const StateTensor& state);
StateTensor normalize(const StateTensor& state);

/// Splits the state along a per-factor partition of basis indices.
/// partitions[j] lists the index classes of factor j+1 and must cover
/// {0..N_j-1} disjointly. Returns one block per label tuple, row-major
/// over class counts; components sum to the input (masking only).
std::vector<Block> block_decompose(const StateTensor& state,
                                   const std::vector<std::vector<std::vector<int>>>& partitions);

}  // namespace multisep
