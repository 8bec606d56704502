#pragma once

#include <vector>

#include <Eigen/Dense>

#include "multisep/tensor_core.hpp"

namespace multisep {

/// A sum-of-products representation of a state across one bipartition:
/// state = sum_i left_factors[i] (x) right_factors[i], with the left factors
/// living on the cut axes and the right factors on the complement (both
/// row-major flattened). A minimal decomposition has both factor lists
/// linearly independent; its length equals the matricization rank.
struct Decomposition {
    std::vector<int> dims;
    std::vector<int> cut;  // 1-based axes, proper nonempty subset
    int rank = 0;
    std::vector<Eigen::VectorXcd> left_factors;
    std::vector<Eigen::VectorXcd> right_factors;
};

/// One dependence-elimination step: finds a numerically dependent vector in
/// `primary` (column-pivoted elimination, threshold tol * largest column
/// norm, pivot ties broken by lowest index), expands it over the remaining
/// vectors as primary[dep] = sum_i gamma_i * primary[i], folds the term into
/// the partner list via secondary[i] += gamma_i * secondary[dep], and drops
/// term dep from both lists. Returns whether a term was merged; false when
/// `primary` is already independent. The represented sum of products is
/// unchanged by a merge.
bool merge_step(std::vector<Eigen::VectorXcd>& primary,
                std::vector<Eigen::VectorXcd>& secondary, double tol = 1e-10);

/// Minimal-length decomposition across the cut: starts from the basis
/// expansion (one term per nonzero matricization row) and merges dependent
/// terms until both factor lists are independent.
Decomposition minimal_decomposition(const StateTensor& state, const std::vector<int>& cut,
                                    double tol = 1e-10);

/// Independent check: numerical rank of matricize(state, cut) via singular
/// values above tol * sigma_max.
int rank_oracle(const StateTensor& state, const std::vector<int>& cut, double tol = 1e-10);

/// sum_i left_factors[i] (x) right_factors[i], reshaped to the stored dims.
StateTensor reconstruct(const Decomposition& decomposition);

/// Post-pass producing an orthogonal decomposition of the same state and
/// rank (singular vectors of the reconstruction); minimality is preserved,
/// orthogonality is extra — the minimal contract never requires it.
Decomposition orthogonalize(const Decomposition& decomposition, double tol = 1e-10);

}  // namespace multisep
