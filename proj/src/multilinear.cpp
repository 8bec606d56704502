#include "multisep/multilinear.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <Eigen/SVD>

#include "multisep/errors.hpp"

namespace multisep {

namespace {

std::size_t checked_coefficient_count(const std::vector<int>& source_dims, int target_dim) {
    const std::size_t source = space_dim(source_dims);
    if (target_dim < 1) {
        throw ArgumentError("target dimension must be at least 1, got " +
                            std::to_string(target_dim));
    }
    return source * static_cast<std::size_t>(target_dim);
}

void check_map(const MultilinearMap& map) {
    const std::size_t expected = checked_coefficient_count(map.source_dims, map.target_dim);
    if (map.coefficients.size() != expected) {
        throw DimensionError("coefficient array has " + std::to_string(map.coefficients.size()) +
                             " entries, shape requires " + std::to_string(expected));
    }
}

void check_factors(const std::vector<int>& source_dims, const std::vector<FactorVector>& factors) {
    if (factors.size() != source_dims.size()) {
        throw DimensionError("map of " + std::to_string(source_dims.size()) +
                             " factors applied to " + std::to_string(factors.size()) +
                             " vectors");
    }
    for (std::size_t j = 0; j < factors.size(); ++j) {
        if (factors[j].dim() != source_dims[j]) {
            throw DimensionError("factor " + std::to_string(j + 1) + " has dimension " +
                                 std::to_string(factors[j].dim()) + ", map requires " +
                                 std::to_string(source_dims[j]));
        }
    }
}

cxd random_unit_scale(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    return {gauss(rng), gauss(rng)};
}

FactorVector random_factor(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    FactorVector vec;
    vec.entries.resize(static_cast<std::size_t>(dim));
    for (cxd& entry : vec.entries) entry = {gauss(rng), gauss(rng)};
    return vec;
}

MultilinearityReport run_multilinearity(const MapEvaluator& evaluator,
                                        const std::vector<int>& source_dims, int trials,
                                        std::uint64_t seed, double tol) {
    if (trials < 1) {
        throw ArgumentError("multilinearity check needs at least one trial, got " +
                            std::to_string(trials));
    }
    space_dim(source_dims);
    std::mt19937_64 rng(seed);
    const int factors = static_cast<int>(source_dims.size());

    MultilinearityReport report;
    for (int trial = 0; trial < trials; ++trial) {
        std::vector<FactorVector> base(source_dims.size());
        for (int j = 0; j < factors; ++j) base[j] = random_factor(source_dims[j], rng);
        for (int j = 0; j < factors; ++j) {
            const FactorVector alternative = random_factor(source_dims[j], rng);
            const cxd lambda = random_unit_scale(rng);
            const cxd mu = random_unit_scale(rng);

            std::vector<FactorVector> mixed = base;
            for (int i = 0; i < source_dims[j]; ++i) {
                mixed[j].entries[i] =
                    lambda * base[j].entries[i] + mu * alternative.entries[i];
            }
            const FactorVector left = evaluator(mixed);

            std::vector<FactorVector> swapped = base;
            swapped[j] = alternative;
            const FactorVector with_base = evaluator(base);
            const FactorVector with_alt = evaluator(swapped);
            if (left.entries.size() != with_base.entries.size() ||
                left.entries.size() != with_alt.entries.size()) {
                throw DimensionError("evaluator returned outputs of inconsistent length");
            }
            for (std::size_t a = 0; a < left.entries.size(); ++a) {
                const cxd right = lambda * with_base.entries[a] + mu * with_alt.entries[a];
                report.max_violation =
                    std::max(report.max_violation, std::abs(left.entries[a] - right));
            }
        }
    }
    report.passed = report.max_violation <= tol;
    return report;
}

}  // namespace

MultilinearMap make_map(std::vector<int> source_dims, int target_dim,
                        std::vector<cxd> coefficients) {
    MultilinearMap map;
    map.source_dims = std::move(source_dims);
    map.target_dim = target_dim;
    map.coefficients = std::move(coefficients);
    check_map(map);
    return map;
}

MultilinearMap canonical_tensor_map(const std::vector<int>& dims) {
    const std::size_t source = space_dim(dims);
    if (source * source > kMaxDenseSize) {
        throw CapacityError("canonical map on a space of dimension " + std::to_string(source) +
                            " exceeds the dense coefficient capacity");
    }
    std::vector<cxd> coefficients(source * source, cxd(0.0, 0.0));
    for (std::size_t i = 0; i < source; ++i) coefficients[i * source + i] = cxd(1.0, 0.0);
    return make_map(dims, static_cast<int>(source), std::move(coefficients));
}

FactorVector evaluate(const MultilinearMap& map, const std::vector<FactorVector>& factors) {
    check_map(map);
    check_factors(map.source_dims, factors);
    const std::size_t source = space_dim(map.source_dims);
    const std::size_t target = static_cast<std::size_t>(map.target_dim);
    const int count = map.factor_count();

    FactorVector out;
    out.entries.assign(target, cxd(0.0, 0.0));
    std::vector<int> digits(map.source_dims.size(), 0);
    for (std::size_t i = 0; i < source; ++i) {
        cxd weight(1.0, 0.0);
        for (int j = 0; j < count; ++j) weight *= factors[j].entries[digits[j]];
        if (weight != cxd(0.0, 0.0)) {
            const cxd* row = map.coefficients.data() + i * target;
            for (std::size_t a = 0; a < target; ++a) out.entries[a] += weight * row[a];
        }
        for (int j = count - 1; j >= 0; --j) {  // row-major increment, last fastest
            if (++digits[j] < map.source_dims[j]) break;
            digits[j] = 0;
        }
    }
    return out;
}

MultilinearityReport check_multilinearity(const MultilinearMap& map, int trials,
                                          std::uint64_t seed, double tol) {
    check_map(map);
    return run_multilinearity(
        [&map](const std::vector<FactorVector>& tuple) { return evaluate(map, tuple); },
        map.source_dims, trials, seed, tol);
}

MultilinearityReport check_multilinearity(const MapEvaluator& evaluator,
                                          const std::vector<int>& source_dims, int trials,
                                          std::uint64_t seed, double tol) {
    if (!evaluator) throw ArgumentError("multilinearity check needs an evaluator");
    return run_multilinearity(evaluator, source_dims, trials, seed, tol);
}

LinearOperator induced_linear(const MultilinearMap& map) {
    check_map(map);
    const std::size_t source = space_dim(map.source_dims);
    const std::size_t target = static_cast<std::size_t>(map.target_dim);
    LinearOperator theta(target, source);
    for (std::size_t i = 0; i < source; ++i) {
        for (std::size_t a = 0; a < target; ++a) {
            theta(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(i)) =
                map.coefficients[i * target + a];
        }
    }
    return theta;
}

TensorProductCriteria tensor_product_criteria(const MultilinearMap& map, double tol) {
    check_map(map);
    if (map.coefficients.size() > kMaxDenseSize) {
        throw CapacityError("criteria need a dense operator with " +
                            std::to_string(map.coefficients.size()) +
                            " entries, supported maximum is " + std::to_string(kMaxDenseSize));
    }
    if (!(tol >= 0.0)) throw ArgumentError("rank tolerance must be nonnegative");
    const LinearOperator theta = induced_linear(map);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(theta);
    const Eigen::VectorXd& sigma = svd.singularValues();

    Eigen::Index rank = 0;
    if (sigma.size() > 0 && sigma(0) > 0.0) {
        const double threshold = tol * sigma(0);
        while (rank < sigma.size() && sigma(rank) > threshold) ++rank;
    }
    TensorProductCriteria criteria;
    criteria.surjective = rank == theta.rows();
    criteria.injective = rank == theta.cols();
    return criteria;
}

MultilinearMap map_add(const MultilinearMap& a, const MultilinearMap& b) {
    check_map(a);
    check_map(b);
    if (a.source_dims != b.source_dims || a.target_dim != b.target_dim) {
        throw DimensionError("cannot add multilinear maps of different shapes");
    }
    MultilinearMap sum = a;
    for (std::size_t i = 0; i < sum.coefficients.size(); ++i) {
        sum.coefficients[i] += b.coefficients[i];
    }
    return sum;
}

MultilinearMap map_scale(cxd scale, const MultilinearMap& map) {
    check_map(map);
    MultilinearMap scaled = map;
    for (cxd& coefficient : scaled.coefficients) coefficient *= scale;
    return scaled;
}

LinearOperator operator_tensor(const std::vector<LinearOperator>& ops) {
    if (ops.empty()) throw ArgumentError("operator tensor product needs at least one factor");
    std::vector<int> dims;
    dims.reserve(ops.size());
    for (std::size_t j = 0; j < ops.size(); ++j) {
        if (ops[j].rows() != ops[j].cols() || ops[j].rows() < 1) {
            throw ArgumentError("operator factor " + std::to_string(j + 1) +
                                " must be square and nonempty");
        }
        dims.push_back(static_cast<int>(ops[j].rows()));
    }
    const std::size_t total = space_dim(dims);
    if (total * total > kMaxDenseSize) {
        throw CapacityError("operator tensor product of dimension " + std::to_string(total) +
                            " exceeds the dense matrix capacity");
    }

    LinearOperator result = LinearOperator::Ones(1, 1);
    for (const LinearOperator& op : ops) {
        const Eigen::Index rows = result.rows();
        const Eigen::Index cols = result.cols();
        const Eigen::Index n = op.rows();
        LinearOperator next(rows * n, cols * n);
        for (Eigen::Index r = 0; r < rows; ++r) {
            for (Eigen::Index c = 0; c < cols; ++c) {
                next.block(r * n, c * n, n, n) = result(r, c) * op;
            }
        }
        result = std::move(next);
    }
    return result;
}

}  // namespace multisep
