#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "multisep/concurrence.hpp"
#include "multisep/decomposition.hpp"
#include "multisep/errors.hpp"
#include "multisep/ket_parser.hpp"
#include "multisep/mixed_roof.hpp"
#include "multisep/multilinear.hpp"
#include "multisep/separability.hpp"
#include "multisep/state_io.hpp"
#include "multisep/tensor_core.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace multisep;

std::string fmt(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

std::string fmt(cxd value) {
    return "(" + fmt(value.real()) + ", " + fmt(value.imag()) + ")";
}

std::string join_ints(const std::vector<int>& values, const char* sep = ",") {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += sep;
        out += std::to_string(values[i]);
    }
    return out;
}

json index_json(const MultiIndex& index) { return json(index.entries); }

json minor_json(const MinorId& id, cxd value) {
    json record;
    record["axis"] = id.axis;
    record["k"] = index_json(id.k);
    record["l"] = index_json(id.l);
    record["re"] = value.real();
    record["im"] = value.imag();
    record["abs"] = std::abs(value);
    return record;
}

std::vector<int> parse_dims_list(const std::string& text) {
    std::vector<int> dims;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string item =
            text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        try {
            std::size_t used = 0;
            dims.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ArgumentError("cannot read '" + item + "' as a dimension");
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return dims;
}

struct Options {
    bool machine = false;  // --json

    std::string in_path;
    std::string out_path;
    std::string dims_text;
    std::string expr;
    std::string cut_text;
    std::vector<std::string> factor_paths;
    bool normalize_flag = false;
    bool oracle_flag = false;
    bool wootters_flag = false;
    double tol = 1e-10;
    double normalization = 1.0;
    RoofConfig roof;
};

void emit(const Options& opt, const json& machine_record, const std::string& human_text) {
    if (opt.machine) {
        std::cout << machine_record.dump() << '\n';
    } else {
        std::cout << human_text;
    }
}

int run_product(const Options& opt) {
    std::vector<FactorVector> factors;
    std::vector<int> dims;
    for (const std::string& path : opt.factor_paths) {
        const StateTensor loaded = read_state(path);
        if (loaded.factor_count() != 1) {
            throw ArgumentError(path + ": a factor file must declare exactly one factor");
        }
        dims.push_back(loaded.dims[0]);
        factors.push_back(FactorVector{loaded.amplitudes});
    }
    const StateTensor product = tensor_product(factors);
    write_state(product, opt.out_path);

    json record;
    record["dims"] = product.dims;
    record["norm"] = norm(product);
    record["out"] = opt.out_path;
    emit(opt, record,
         "dims: " + join_ints(product.dims) + "\nnorm: " + fmt(norm(product)) +
             "\nwrote " + opt.out_path + "\n");
    return 0;
}

int run_parse(const Options& opt) {
    const std::vector<int> dims = parse_dims_list(opt.dims_text);
    StateTensor state = parse_ket(opt.expr, dims);
    if (opt.normalize_flag) state = normalize(state);
    write_state(state, opt.out_path);

    json record;
    record["dims"] = state.dims;
    record["norm"] = norm(state);
    record["out"] = opt.out_path;
    emit(opt, record,
         "dims: " + join_ints(state.dims) + "\nnorm: " + fmt(norm(state)) + "\nwrote " +
             opt.out_path + "\n");
    return 0;
}

int run_minors(const Options& opt) {
    const StateTensor state = read_state(opt.in_path);
    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!opt.out_path.empty()) {
        file.open(opt.out_path);
        if (!file) throw FormatError(opt.out_path + ": cannot open for writing");
        out = &file;
    }
    for_each_minor(state.dims, [&](const MinorId& id) {
        *out << minor_json(id, eval_minor(state, id)).dump() << '\n';
    });
    return 0;
}

int run_separable(const Options& opt) {
    const StateTensor state = read_state(opt.in_path);
    const SeparabilityReport report = is_separable(state, opt.tol);

    json record;
    record["separable"] = report.separable;
    record["max_abs_minor"] = report.max_abs_minor;
    record["tolerance"] = report.tolerance;
    std::string text = std::string("separable: ") + (report.separable ? "yes" : "no") +
                       "\nmax |S|: " + fmt(report.max_abs_minor) +
                       "\ntolerance: " + fmt(report.tolerance) + "\n";
    if (report.witness) {
        record["witness"] = json{{"axis", report.witness->axis},
                                 {"k", index_json(report.witness->k)},
                                 {"l", index_json(report.witness->l)}};
        text += "witness: axis " + std::to_string(report.witness->axis) + ", k=(" +
                join_ints(report.witness->k.entries) + "), l=(" +
                join_ints(report.witness->l.entries) + ")\n";
    }
    emit(opt, record, text);
    return report.separable ? 0 : 1;
}

int run_concurrence(const Options& opt) {
    const StateTensor state = read_state(opt.in_path);
    ConcurrenceConfig config;
    config.normalization = opt.normalization;
    const double value = concurrence_pure(state, config);

    json record;
    record["concurrence"] = value;
    std::string text = "concurrence: " + fmt(value) + "\n";
    if (opt.oracle_flag && state.factor_count() == 2) {
        const double entropy = linear_entropy_concurrence(state, {1});
        record["linear_entropy"] = entropy;
        text += "linear-entropy oracle: " + fmt(entropy) + "\n";
        if (state.dims == std::vector<int>{2, 2}) {
            const double closed = concurrence_two_qubit(state);
            record["two_qubit"] = closed;
            text += "two-qubit closed form: " + fmt(closed) + "\n";
        }
    }
    emit(opt, record, text);
    return 0;
}

int run_schmidt(const Options& opt) {
    const StateTensor state = read_state(opt.in_path);
    const std::vector<int> cut = parse_dims_list(opt.cut_text);
    const Decomposition dec = minimal_decomposition(state, cut, opt.tol);

    json record;
    record["rank"] = dec.rank;
    record["cut"] = dec.cut;
    json left = json::array();
    json right = json::array();
    std::string text = "rank: " + std::to_string(dec.rank) + "\ncut: " + join_ints(dec.cut) + "\n";
    for (int i = 0; i < dec.rank; ++i) {
        json lvec = json::array();
        json rvec = json::array();
        text += "left[" + std::to_string(i + 1) + "]:";
        for (Eigen::Index r = 0; r < dec.left_factors[i].size(); ++r) {
            lvec.push_back({dec.left_factors[i](r).real(), dec.left_factors[i](r).imag()});
            text += " " + fmt(dec.left_factors[i](r));
        }
        text += "\nright[" + std::to_string(i + 1) + "]:";
        for (Eigen::Index r = 0; r < dec.right_factors[i].size(); ++r) {
            rvec.push_back({dec.right_factors[i](r).real(), dec.right_factors[i](r).imag()});
            text += " " + fmt(dec.right_factors[i](r));
        }
        text += "\n";
        left.push_back(lvec);
        right.push_back(rvec);
    }
    record["left"] = left;
    record["right"] = right;
    emit(opt, record, text);
    return 0;
}

int run_roof(const Options& opt) {
    const DensityMatrix rho = read_density(opt.in_path);
    const RoofResult result = convex_roof_concurrence(rho, opt.roof);

    json record;
    record["roof"] = result.value;
    record["ensemble_size"] = result.ensemble.weights.size();
    record["weights"] = result.ensemble.weights;
    std::string text = "roof estimate: " + fmt(result.value) + "\nensemble size: " +
                       std::to_string(result.ensemble.weights.size()) + "\nweights:";
    for (double w : result.ensemble.weights) text += " " + fmt(w);
    text += "\n";
    if (opt.wootters_flag && rho.dims == std::vector<int>{2, 2}) {
        const double oracle = wootters_concurrence(rho);
        record["wootters"] = oracle;
        text += "wootters closed form: " + fmt(oracle) + "\n";
    }
    emit(opt, record, text);
    return 0;
}

int run_criteria(const Options& opt) {
    const MultilinearMap map = read_map(opt.in_path);
    const TensorProductCriteria criteria = tensor_product_criteria(map, opt.tol);

    json record;
    record["surjective"] = criteria.surjective;
    record["injective"] = criteria.injective;
    emit(opt, record,
         std::string("condition I (surjective): ") + (criteria.surjective ? "yes" : "no") +
             "\ncondition II (injective): " + (criteria.injective ? "yes" : "no") + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Separability, concurrence, and multilinear-map diagnostics for "
                 "multipartite pure states"};
    app.require_subcommand(1);
    // Let subcommands hand unmatched flags back up, so --json works in either
    // position: `multisep --json separable ...` or `multisep separable ... --json`.
    app.fallthrough();
    Options opt;
    app.add_flag("--json", opt.machine, "emit machine-readable JSON on stdout");

    CLI::App* product = app.add_subcommand("product", "tensor product of factor vector files");
    product->add_option("--out", opt.out_path, "output state file")->required();
    product->add_option("factors", opt.factor_paths, "single-factor state files")
        ->required()
        ->expected(-1);

    CLI::App* parse = app.add_subcommand("parse", "parse a ket expression into a state file");
    parse->add_option("--dims", opt.dims_text, "comma-separated factor dimensions")->required();
    parse->add_option("--expr", opt.expr, "ket expression")->required();
    parse->add_option("--out", opt.out_path, "output state file")->required();
    parse->add_flag("--normalize", opt.normalize_flag, "normalize before writing");

    CLI::App* minors = app.add_subcommand("minors", "dump the minor system (one JSON per line)");
    minors->add_option("--in", opt.in_path, "state file")->required();
    minors->add_option("--out", opt.out_path, "dump file (default stdout)");

    CLI::App* separable = app.add_subcommand("separable", "product-state membership verdict");
    separable->add_option("--in", opt.in_path, "state file")->required();
    separable->add_option("--tol", opt.tol, "minor magnitude tolerance");

    CLI::App* concurrence = app.add_subcommand("concurrence", "generalized concurrence");
    concurrence->add_option("--in", opt.in_path, "state file")->required();
    concurrence->add_option("--normalization", opt.normalization,
                            "normalization constant under the square root");
    concurrence->add_flag("--oracle", opt.oracle_flag,
                          "also print independent oracle values when applicable");

    CLI::App* schmidt = app.add_subcommand("schmidt", "minimal decomposition across a cut");
    schmidt->add_option("--in", opt.in_path, "state file")->required();
    schmidt->add_option("--cut", opt.cut_text, "comma-separated 1-based row axes")->required();
    schmidt->add_option("--tol", opt.tol, "rank tolerance");

    CLI::App* roof = app.add_subcommand("roof", "convex-roof concurrence estimate");
    roof->add_option("--in", opt.in_path, "density matrix file")->required();
    roof->add_option("--ensemble-size", opt.roof.ensemble_size, "ensemble terms (0 = rank+2)");
    roof->add_option("--restarts", opt.roof.restarts, "random restarts");
    roof->add_option("--iters", opt.roof.max_iters, "descent sweeps per restart");
    roof->add_option("--seed", opt.roof.seed, "random seed");
    roof->add_flag("--wootters", opt.wootters_flag, "also print the two-qubit closed form");

    CLI::App* criteria = app.add_subcommand("criteria", "tensor-product criteria of a map file");
    criteria->add_option("--map", opt.in_path, "multilinear map file")->required();
    criteria->add_option("--tol", opt.tol, "rank tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& help) {
        return app.exit(help);
    } catch (const CLI::ParseError& error) {
        app.exit(error);
        return 2;
    }

    try {
        if (product->parsed()) return run_product(opt);
        if (parse->parsed()) return run_parse(opt);
        if (minors->parsed()) return run_minors(opt);
        if (separable->parsed()) return run_separable(opt);
        if (concurrence->parsed()) return run_concurrence(opt);
        if (schmidt->parsed()) return run_schmidt(opt);
        if (roof->parsed()) return run_roof(opt);
        if (criteria->parsed()) return run_criteria(opt);
    } catch (const CapacityError& error) {
        std::cerr << "capacity error: " << error.what() << '\n';
        return 3;
    } catch (const Error& error) {
        std::cerr << "error: " << error.what() << '\n';
        return 2;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << '\n';
        return 2;
    }
    return 0;
}
