#include "multisep/state_io.hpp"

#include <fstream>
#include <utility>
#include <vector>

#include <json.hpp>

#include "multisep/errors.hpp"

namespace multisep {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kStateFormat = "multisep-state/1";
constexpr const char* kDensityFormat = "multisep-density/1";

json load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError(path + ": cannot open for reading");
    try {
        return json::parse(in);
    } catch (const json::parse_error& error) {
        throw FormatError(path + ": " + error.what());
    }
}

void store(const json& value, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FormatError(path + ": cannot open for writing");
    out << value.dump(2) << '\n';
    if (!out) throw FormatError(path + ": write failed");
}

void check_format(const json& root, const char* expected) {
    if (!root.is_object()) throw FormatError("top level: expected an object");
    if (!root.contains("format") || !root["format"].is_string()) {
        throw FormatError("format: missing or not a string");
    }
    if (root["format"].get<std::string>() != expected) {
        throw FormatError("format: expected \"" + std::string(expected) + "\", found \"" +
                          root["format"].get<std::string>() + "\"");
    }
}

std::vector<int> read_dims(const json& root) {
    if (!root.contains("dims") || !root["dims"].is_array() || root["dims"].empty()) {
        throw FormatError("dims: missing or not a nonempty array");
    }
    std::vector<int> dims;
    for (std::size_t j = 0; j < root["dims"].size(); ++j) {
        const json& entry = root["dims"][j];
        if (!entry.is_number_integer() || entry.get<long long>() < 1) {
            throw FormatError("dims[" + std::to_string(j) + "]: expected a positive integer");
        }
        dims.push_back(entry.get<int>());
    }
    return dims;
}

std::vector<cxd> read_pairs(const json& root, const char* field, std::size_t expected) {
    if (!root.contains(field) || !root[field].is_array()) {
        throw FormatError(std::string(field) + ": missing or not an array");
    }
    const json& array = root[field];
    if (array.size() != expected) {
        throw FormatError(std::string(field) + ": holds " + std::to_string(array.size()) +
                          " entries, dims require " + std::to_string(expected));
    }
    std::vector<cxd> values;
    values.reserve(expected);
    for (std::size_t i = 0; i < array.size(); ++i) {
        const json& pair = array[i];
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
            !pair[1].is_number()) {
            throw FormatError(std::string(field) + "[" + std::to_string(i) +
                              "]: expected a [re, im] pair");
        }
        values.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    }
    return values;
}

json write_pairs(const std::vector<cxd>& values) {
    json array = json::array();
    for (const cxd& value : values) array.push_back({value.real(), value.imag()});
    return array;
}

}  // namespace

StateTensor read_state(const std::string& path) {
    const json root = load(path);
    check_format(root, kStateFormat);
    std::vector<int> dims = read_dims(root);
    const std::size_t total = space_dim(dims);
    return make_state(std::move(dims), read_pairs(root, "amplitudes", total));
}

void write_state(const StateTensor& state, const std::string& path) {
    const std::size_t total = space_dim(state.dims);
    if (state.amplitudes.size() != total) {
        throw DimensionError("amplitude array has " + std::to_string(state.amplitudes.size()) +
                             " entries, dims require " + std::to_string(total));
    }
    json root;
    root["format"] = kStateFormat;
    root["dims"] = state.dims;
    root["amplitudes"] = write_pairs(state.amplitudes);
    store(root, path);
}

DensityMatrix read_density(const std::string& path) {
    const json root = load(path);
    check_format(root, kDensityFormat);
    std::vector<int> dims = read_dims(root);
    const std::size_t total = space_dim(dims);
    const std::vector<cxd> entries = read_pairs(root, "matrix", total * total);

    Eigen::MatrixXcd matrix(total, total);
    for (std::size_t r = 0; r < total; ++r) {
        for (std::size_t c = 0; c < total; ++c) {
            matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                entries[r * total + c];
        }
    }
    return make_density(std::move(dims), std::move(matrix));
}

void write_density(const DensityMatrix& rho, const std::string& path) {
    validate_density(rho);
    std::vector<cxd> entries;
    entries.reserve(static_cast<std::size_t>(rho.matrix.size()));
    for (Eigen::Index r = 0; r < rho.matrix.rows(); ++r) {
        for (Eigen::Index c = 0; c < rho.matrix.cols(); ++c) entries.push_back(rho.matrix(r, c));
    }
    json root;
    root["format"] = kDensityFormat;
    root["dims"] = rho.dims;
    root["matrix"] = write_pairs(entries);
    store(root, path);
}

MultilinearMap read_map(const std::string& path) {
    const json root = load(path);
    check_format(root, kStateFormat);
    std::vector<int> dims = read_dims(root);
    if (!root.contains("target_dim") || !root["target_dim"].is_number_integer() ||
        root["target_dim"].get<long long>() < 1) {
        throw FormatError("target_dim: missing or not a positive integer");
    }
    const int target_dim = root["target_dim"].get<int>();
    const std::size_t total = space_dim(dims) * static_cast<std::size_t>(target_dim);
    return make_map(std::move(dims), target_dim, read_pairs(root, "amplitudes", total));
}

void write_map(const MultilinearMap& map, const std::string& path) {
    json root;
    root["format"] = kStateFormat;
    root["dims"] = map.source_dims;
    root["target_dim"] = map.target_dim;
    root["amplitudes"] = write_pairs(map.coefficients);
    store(root, path);
}

}  // namespace multisep
