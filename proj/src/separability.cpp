#include "multisep/separability.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "multisep/errors.hpp"

namespace multisep {

namespace {

// Decomposes a flat offset around one axis: offset = hi*block + digit*stride + lo
// with lo < stride, digit < dims[axis], hi < outer.
struct AxisLayout {
    std::size_t stride = 1;  // product of dims after the axis (last index fastest)
    std::size_t block = 1;   // dims[axis] * stride
    std::size_t outer = 1;   // product of dims before the axis
};

std::vector<AxisLayout> axis_layouts(const std::vector<int>& dims, std::size_t total) {
    std::vector<AxisLayout> layout(dims.size());
    std::size_t stride = 1;
    for (std::size_t j = dims.size(); j-- > 0;) {
        layout[j].stride = stride;
        layout[j].block = stride * static_cast<std::size_t>(dims[j]);
        stride = layout[j].block;
    }
    for (auto& axis : layout) axis.outer = total / axis.block;
    return layout;
}

void check_amplitude_length(const StateTensor& state, std::size_t total) {
    if (state.amplitudes.size() != total) {
        throw DimensionError("amplitude array has " + std::to_string(state.amplitudes.size()) +
                             " entries, dims require " + std::to_string(total));
    }
}

}  // namespace

std::size_t minor_count(const std::vector<int>& dims) {
    const std::size_t total = space_dim(dims);
    std::size_t count = 0;
    for (int dim : dims) {
        const std::size_t n = static_cast<std::size_t>(dim);
        const std::size_t rest = total / n;
        count += (n * (n - 1) / 2) * rest * rest;
    }
    if (count > kMaxMinorCount) {
        throw CapacityError("minor system has " + std::to_string(count) +
                            " entries, supported maximum is " + std::to_string(kMaxMinorCount));
    }
    return count;
}

void for_each_minor(const std::vector<int>& dims,
                    const std::function<void(const MinorId&)>& visit) {
    const std::size_t total = space_dim(dims);
    minor_count(dims);  // capacity guard
    const auto layout = axis_layouts(dims, total);
    const int factors = static_cast<int>(dims.size());

    MinorId id;
    id.k.entries.resize(factors);
    id.l.entries.resize(factors);
    for (int j = 0; j < factors; ++j) {
        id.axis = j + 1;
        const AxisLayout& axis = layout[j];
        const int n = dims[j];
        for (std::size_t k = 0; k < total; ++k) {
            const int kj = static_cast<int>((k / axis.stride) % static_cast<std::size_t>(n));
            if (kj == n - 1) continue;
            id.k = unflatten_index(dims, k);
            // Row-major ascent over exactly the offsets whose axis digit exceeds kj.
            for (std::size_t hi = 0; hi < axis.outer; ++hi) {
                for (int d = kj + 1; d < n; ++d) {
                    const std::size_t base =
                        hi * axis.block + static_cast<std::size_t>(d) * axis.stride;
                    for (std::size_t lo = 0; lo < axis.stride; ++lo) {
                        id.l = unflatten_index(dims, base + lo);
                        visit(id);
                    }
                }
            }
        }
    }
}

std::vector<MinorId> enumerate_minors(const std::vector<int>& dims) {
    std::vector<MinorId> minors;
    minors.reserve(minor_count(dims));
    for_each_minor(dims, [&minors](const MinorId& id) { minors.push_back(id); });
    return minors;
}

cxd eval_minor(const StateTensor& state, const MinorId& id) {
    const std::size_t total = space_dim(state.dims);
    check_amplitude_length(state, total);
    const int factors = state.factor_count();
    if (id.axis < 1 || id.axis > factors) {
        throw IndexError("minor axis " + std::to_string(id.axis) + " outside 1.." +
                         std::to_string(factors));
    }
    const std::size_t k = flatten_index(state.dims, id.k);
    const std::size_t l = flatten_index(state.dims, id.l);

    std::size_t stride = 1;
    for (int i = factors - 1; i >= id.axis; --i) stride *= static_cast<std::size_t>(state.dims[i]);
    const std::ptrdiff_t shift =
        static_cast<std::ptrdiff_t>(id.l.entries[id.axis - 1] - id.k.entries[id.axis - 1]) *
        static_cast<std::ptrdiff_t>(stride);

    const std::vector<cxd>& a = state.amplitudes;
    const std::size_t k_swapped = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(k) + shift);
    const std::size_t l_swapped = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(l) - shift);
    return a[k] * a[l] - a[k_swapped] * a[l_swapped];
}

MinorScan scan_minors(const StateTensor& state) {
    const std::size_t total = space_dim(state.dims);
    check_amplitude_length(state, total);
    minor_count(state.dims);  // capacity guard
    const auto layout = axis_layouts(state.dims, total);
    const int factors = state.factor_count();
    const cxd* a = state.amplitudes.data();

    MinorScan scan;
    double best_sq = -1.0;
    int best_axis = 0;
    std::size_t best_k = 0;
    std::size_t best_l = 0;
    for (int j = 0; j < factors; ++j) {
        const AxisLayout& axis = layout[j];
        const int n = state.dims[j];
        for (std::size_t k = 0; k < total; ++k) {
            const int kj = static_cast<int>((k / axis.stride) % static_cast<std::size_t>(n));
            for (std::size_t hi = 0; hi < axis.outer; ++hi) {
                for (int d = kj + 1; d < n; ++d) {
                    const std::size_t base =
                        hi * axis.block + static_cast<std::size_t>(d) * axis.stride;
                    const std::size_t shift = static_cast<std::size_t>(d - kj) * axis.stride;
                    for (std::size_t lo = 0; lo < axis.stride; ++lo) {
                        const std::size_t l = base + lo;
                        const cxd value = a[k] * a[l] - a[k + shift] * a[l - shift];
                        const double sq = std::norm(value);
                        scan.sum_sq += sq;
                        ++scan.count;
                        if (sq > best_sq) {
                            best_sq = sq;
                            best_axis = j + 1;
                            best_k = k;
                            best_l = l;
                        }
                    }
                }
            }
        }
    }
    if (scan.count > 0) {
        scan.max_abs = std::sqrt(best_sq);
        scan.argmax.axis = best_axis;
        scan.argmax.k = unflatten_index(state.dims, best_k);
        scan.argmax.l = unflatten_index(state.dims, best_l);
    }
    return scan;
}

SeparabilityReport is_separable(const StateTensor& state, double tol) {
    if (!(tol >= 0.0)) throw ArgumentError("separability tolerance must be nonnegative");
    if (norm(state) == 0.0) throw ArgumentError("the zero state has no separability verdict");
    const MinorScan scan = scan_minors(normalize(state));

    SeparabilityReport report;
    report.tolerance = tol;
    report.max_abs_minor = scan.max_abs;
    report.separable = scan.max_abs <= tol;
    if (!report.separable) report.witness = scan.argmax;
    return report;
}

bool rank_one_oracle(const StateTensor& state, double tol) {
    if (!(tol >= 0.0)) throw ArgumentError("rank tolerance must be nonnegative");
    if (norm(state) == 0.0) throw ArgumentError("the zero state has no rank-one verdict");
    const int factors = state.factor_count();
    if (factors == 1) return true;
    for (int j = 1; j <= factors; ++j) {
        const Eigen::MatrixXcd unfolding = matricize(state, {j});
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(unfolding);
        const Eigen::VectorXd& sigma = svd.singularValues();
        if (sigma.size() >= 2 && sigma(1) > tol * sigma(0)) return false;
    }
    return true;
}

}  // namespace multisep
