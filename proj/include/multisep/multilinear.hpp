#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "multisep/tensor_core.hpp"

namespace multisep {

/// A complex matrix acting on flattened tensor coordinates.
using LinearOperator = Eigen::MatrixXcd;

/// An m-linear map C^{N_1} x ... x C^{N_m} -> C^M given extensionally by its
/// coefficients on the standard bases. Storage is flat row-major with the
/// target index fastest: coefficients[flat(i) * M + a] is the a-th output
/// component on the basis tuple i.
struct MultilinearMap {
    std::vector<int> source_dims;
    int target_dim = 0;
    std::vector<cxd> coefficients;

    int factor_count() const { return static_cast<int>(source_dims.size()); }
};

/// Validates shapes and builds a map. Throws DimensionError when the
/// coefficient length is not target_dim * prod(source_dims), ArgumentError
/// for target_dim < 1 or invalid source dims.
MultilinearMap make_map(std::vector<int> source_dims, int target_dim,
                        std::vector<cxd> coefficients);

/// The map whose induced operator is the identity: M = prod(dims) and
/// coefficients[flat(i), flat(i)] = 1. This is the tensor-product map itself.
MultilinearMap canonical_tensor_map(const std::vector<int>& dims);

/// output[a] = sum over basis tuples i of coefficients[i, a] * prod_j psi_j[i_j].
FactorVector evaluate(const MultilinearMap& map, const std::vector<FactorVector>& factors);

struct MultilinearityReport {
    double max_violation = 0.0;
    bool passed = false;
};

/// Samples the m-linearity identity slot by slot: replaces slot j by
/// lambda*psi + mu*phi and compares against the linear combination of
/// evaluations, over `trials` random draws.
MultilinearityReport check_multilinearity(const MultilinearMap& map, int trials = 20,
                                          std::uint64_t seed = 1, double tol = 1e-10);

/// Black-box variant for testing foreign evaluators against the same identity.
using MapEvaluator = std::function<FactorVector(const std::vector<FactorVector>&)>;
MultilinearityReport check_multilinearity(const MapEvaluator& evaluator,
                                          const std::vector<int>& source_dims, int trials = 20,
                                          std::uint64_t seed = 1, double tol = 1e-10);

/// The unique linear factorization through the tensor product:
/// Theta[a, flat(i)] = coefficients[i, a], so that
/// evaluate(map, tuple) = Theta * tensor_product(tuple).
LinearOperator induced_linear(const MultilinearMap& map);

/// The Proposition's two characterizations of a tensor product, decided on
/// the induced operator: condition I (image spans the target) is
/// surjectivity, condition II (unique linear factorization from the target)
/// is injectivity.
struct TensorProductCriteria {
    bool surjective = false;  // rank(Theta) == target_dim
    bool injective = false;   // rank(Theta) == prod(source_dims)
};

/// Numerical rank via singular values above tol * sigma_max. Throws
/// CapacityError when Theta has more than kMaxDenseSize entries.
TensorProductCriteria tensor_product_criteria(const MultilinearMap& map, double tol = 1e-10);

MultilinearMap map_add(const MultilinearMap& a, const MultilinearMap& b);
MultilinearMap map_scale(cxd scale, const MultilinearMap& map);

/// Kronecker product of square factor operators, consistent with the global
/// flattening (last factor fastest), so that
/// (A_1 (x) ... (x) A_m)(psi_1 (x) ... (x) psi_m) = (A_1 psi_1) (x) ... (x) (A_m psi_m).
LinearOperator operator_tensor(const std::vector<LinearOperator>& ops);

}  // namespace multisep
