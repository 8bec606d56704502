#include "multisep/tensor_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace multisep {

std::size_t space_dim(const std::vector<int>& dims) {
    if (dims.empty()) {
        throw ArgumentError("dims must contain at least one factor");
    }
    std::size_t product = 1;
    for (std::size_t j = 0; j < dims.size(); ++j) {
        if (dims[j] < 1) {
            throw ArgumentError("factor " + std::to_string(j + 1) + " has dimension " +
                                std::to_string(dims[j]) + "; every factor needs dimension >= 1");
        }
        product *= static_cast<std::size_t>(dims[j]);
        if (product > kMaxDenseSize) {
            throw CapacityError("total dimension exceeds the dense capacity of 2^20");
        }
    }
    return product;
}

std::vector<std::size_t> index_strides(const std::vector<int>& dims) {
    std::vector<std::size_t> strides(dims.size());
    std::size_t step = 1;
    for (std::size_t j = dims.size(); j-- > 0;) {
        strides[j] = step;
        step *= static_cast<std::size_t>(dims[j]);
    }
    return strides;
}

StateTensor make_state(std::vector<int> dims, std::vector<cxd> amplitudes) {
    const std::size_t expected = space_dim(dims);
    if (amplitudes.size() != expected) {
        throw DimensionError("amplitude count " + std::to_string(amplitudes.size()) +
                             " does not match the declared total dimension " +
                             std::to_string(expected));
    }
    return StateTensor{std::move(dims), std::move(amplitudes)};
}

std::size_t flatten_index(const std::vector<int>& dims, const MultiIndex& index) {
    if (index.entries.size() != dims.size()) {
        throw IndexError("multi-index has " + std::to_string(index.entries.size()) +
                         " entries for " + std::to_string(dims.size()) + " factors");
    }
    std::size_t offset = 0;
    for (std::size_t j = 0; j < dims.size(); ++j) {
        const int entry = index.entries[j];
        if (entry < 0 || entry >= dims[j]) {
            throw IndexError("index " + std::to_string(entry) + " out of bounds for factor " +
                             std::to_string(j + 1) + " of dimension " + std::to_string(dims[j]));
        }
        offset = offset * static_cast<std::size_t>(dims[j]) + static_cast<std::size_t>(entry);
    }
    return offset;
}

MultiIndex unflatten_index(const std::vector<int>& dims, std::size_t offset) {
    const std::size_t total = space_dim(dims);
    if (offset >= total) {
        throw IndexError("offset " + std::to_string(offset) + " out of bounds for total dimension " +
                         std::to_string(total));
    }
    MultiIndex index;
    index.entries.resize(dims.size());
    for (std::size_t j = dims.size(); j-- > 0;) {
        const auto n = static_cast<std::size_t>(dims[j]);
        index.entries[j] = static_cast<int>(offset % n);
        offset /= n;
    }
    return index;
}

StateTensor tensor_product(const std::vector<FactorVector>& factors) {
    if (factors.empty()) {
        throw ArgumentError("tensor product needs at least one factor");
    }
    std::vector<int> dims;
    dims.reserve(factors.size());
    for (const auto& factor : factors) {
        dims.push_back(factor.dim());
    }
    const std::size_t total = space_dim(dims);

    std::vector<cxd> amplitudes{cxd{1.0, 0.0}};
    amplitudes.reserve(total);
    for (const auto& factor : factors) {
        std::vector<cxd> next(amplitudes.size() * factor.entries.size());
        std::size_t pos = 0;
        for (const cxd& head : amplitudes) {
            for (const cxd& entry : factor.entries) {
                next[pos++] = head * entry;
            }
        }
        amplitudes = std::move(next);
    }
    return StateTensor{std::move(dims), std::move(amplitudes)};
}

namespace {

// Splits 1-based row_axes into validated 0-based row/column axis sets and
// the per-axis strides of the matricized index pair.
struct CutLayout {
    std::vector<std::size_t> row_stride;  // per original axis; zero where not in that group
    std::vector<std::size_t> col_stride;
    std::vector<bool> in_row;
    std::size_t rows = 1;
    std::size_t cols = 1;
};

CutLayout cut_layout(const std::vector<int>& dims, const std::vector<int>& row_axes) {
    const auto m = dims.size();
    if (row_axes.empty()) {
        throw ArgumentError("row axes must be nonempty");
    }
    std::vector<bool> in_row(m, false);
    for (int axis : row_axes) {
        if (axis < 1 || static_cast<std::size_t>(axis) > m) {
            throw ArgumentError("axis " + std::to_string(axis) + " outside 1.." + std::to_string(m));
        }
        if (in_row[static_cast<std::size_t>(axis - 1)]) {
            throw ArgumentError("axis " + std::to_string(axis) + " listed twice");
        }
        in_row[static_cast<std::size_t>(axis - 1)] = true;
    }
    if (row_axes.size() == m) {
        throw ArgumentError("row axes must form a proper subset of the factors");
    }

    CutLayout layout;
    layout.in_row = in_row;
    layout.row_stride.assign(m, 0);
    layout.col_stride.assign(m, 0);
    for (std::size_t j = m; j-- > 0;) {
        if (in_row[j]) {
            layout.row_stride[j] = layout.rows;
            layout.rows *= static_cast<std::size_t>(dims[j]);
        } else {
            layout.col_stride[j] = layout.cols;
            layout.cols *= static_cast<std::size_t>(dims[j]);
        }
    }
    return layout;
}

}  // namespace

Eigen::MatrixXcd matricize(const StateTensor& state, const std::vector<int>& row_axes) {
    const std::size_t total = space_dim(state.dims);
    const CutLayout layout = cut_layout(state.dims, row_axes);
    const auto strides = index_strides(state.dims);

    Eigen::MatrixXcd out(static_cast<Eigen::Index>(layout.rows),
                         static_cast<Eigen::Index>(layout.cols));
    for (std::size_t offset = 0; offset < total; ++offset) {
        std::size_t rest = offset;
        std::size_t row = 0;
        std::size_t col = 0;
        for (std::size_t j = 0; j < state.dims.size(); ++j) {
            const std::size_t digit = rest / strides[j];
            rest %= strides[j];
            row += digit * layout.row_stride[j];
            col += digit * layout.col_stride[j];
        }
        out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
            state.amplitudes[offset];
    }
    return out;
}

StateTensor dematricize(const Eigen::MatrixXcd& matrix, const std::vector<int>& dims,
                        const std::vector<int>& row_axes) {
    const std::size_t total = space_dim(dims);
    const CutLayout layout = cut_layout(dims, row_axes);
    if (static_cast<std::size_t>(matrix.rows()) != layout.rows ||
        static_cast<std::size_t>(matrix.cols()) != layout.cols) {
        throw DimensionError("matrix shape " + std::to_string(matrix.rows()) + "x" +
                             std::to_string(matrix.cols()) + " does not match the cut shape " +
                             std::to_string(layout.rows) + "x" + std::to_string(layout.cols));
    }
    const auto strides = index_strides(dims);

    StateTensor state;
    state.dims = dims;
    state.amplitudes.resize(total);
    for (std::size_t offset = 0; offset < total; ++offset) {
        std::size_t rest = offset;
        std::size_t row = 0;
        std::size_t col = 0;
        for (std::size_t j = 0; j < dims.size(); ++j) {
            const std::size_t digit = rest / strides[j];
            rest %= strides[j];
            row += digit * layout.row_stride[j];
            col += digit * layout.col_stride[j];
        }
        state.amplitudes[offset] =
            matrix(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
    }
    return state;
}

double norm(const StateTensor& state) {
    double sum = 0.0;
    for (const cxd& amplitude : state.amplitudes) {
        sum += std::norm(amplitude);
    }
    return std::sqrt(sum);
}

StateTensor normalize(const StateTensor& state) {
    const double length = norm(state);
    if (length == 0.0) {
        throw NormalizationError("cannot normalize a zero tensor");
    }
    StateTensor result = state;
    const double inverse = 1.0 / length;
    for (cxd& amplitude : result.amplitudes) {
        amplitude *= inverse;
    }
    return result;
}

std::vector<Block> block_decompose(const StateTensor& state,
                                   const std::vector<std::vector<std::vector<int>>>& partitions) {
    const std::size_t total = space_dim(state.dims);
    const auto m = state.dims.size();
    if (partitions.size() != m) {
        throw ArgumentError("expected one partition per factor, got " +
                            std::to_string(partitions.size()) + " for " + std::to_string(m));
    }

    // class_of[j][i] = class index of basis index i in factor j.
    std::vector<std::vector<int>> class_of(m);
    std::vector<int> class_counts(m);
    for (std::size_t j = 0; j < m; ++j) {
        class_of[j].assign(static_cast<std::size_t>(state.dims[j]), -1);
        const auto& classes = partitions[j];
        for (std::size_t c = 0; c < classes.size(); ++c) {
            for (int i : classes[c]) {
                if (i < 0 || i >= state.dims[j]) {
                    throw ArgumentError("partition of factor " + std::to_string(j + 1) +
                                        " names index " + std::to_string(i) + " out of range");
                }
                if (class_of[j][static_cast<std::size_t>(i)] != -1) {
                    throw ArgumentError("partition of factor " + std::to_string(j + 1) +
                                        " lists index " + std::to_string(i) + " twice");
                }
                class_of[j][static_cast<std::size_t>(i)] = static_cast<int>(c);
            }
        }
        for (int i = 0; i < state.dims[j]; ++i) {
            if (class_of[j][static_cast<std::size_t>(i)] == -1) {
                throw ArgumentError("partition of factor " + std::to_string(j + 1) +
                                    " misses index " + std::to_string(i));
            }
        }
        class_counts[j] = static_cast<int>(classes.size());
    }

    std::size_t label_count = 1;
    for (std::size_t j = 0; j < m; ++j) {
        label_count *= static_cast<std::size_t>(class_counts[j]);
        if (label_count * total > (std::size_t{1} << 22)) {
            throw CapacityError("block decomposition too large for dense components");
        }
    }

    std::vector<Block> blocks(label_count);
    for (std::size_t b = 0; b < label_count; ++b) {
        blocks[b].label = unflatten_index(class_counts, b).entries;
        blocks[b].component.dims = state.dims;
        blocks[b].component.amplitudes.assign(total, cxd{});
    }

    const auto strides = index_strides(state.dims);
    for (std::size_t offset = 0; offset < total; ++offset) {
        std::size_t rest = offset;
        std::size_t label = 0;
        for (std::size_t j = 0; j < m; ++j) {
            const std::size_t digit = rest / strides[j];
            rest %= strides[j];
            label = label * static_cast<std::size_t>(class_counts[j]) +
                    static_cast<std::size_t>(class_of[j][digit]);
        }
        blocks[label].component.amplitudes[offset] = state.amplitudes[offset];
    }
    return blocks;
}

}  // namespace multisep
