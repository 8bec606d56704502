#include "multisep/ket_parser.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "multisep/errors.hpp"

namespace multisep {

namespace {

// Recursive-descent parser over the ket grammar; every method reports
// failures through SyntaxError/SemanticError with 0-based byte offsets.
class Parser {
  public:
    Parser(const std::string& text, const std::vector<int>& dims) : text_(text), dims_(dims) {}

    KetExpression parse() {
        KetExpression expression;
        skip_ws();
        if (at_end()) throw SyntaxError("empty expression", pos_);
        expression.terms.push_back(parse_term(1.0));
        while (true) {
            skip_ws();
            if (at_end()) break;
            const char op = peek();
            if (op != '+' && op != '-') {
                throw SyntaxError("expected '+' or '-' between terms", pos_);
            }
            ++pos_;
            skip_ws();
            expression.terms.push_back(parse_term(op == '-' ? -1.0 : 1.0));
        }
        return expression;
    }

  private:
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    }

    KetTerm parse_term(double sign) {
        KetTerm term;
        if (!at_end() && peek() == '|') {
            term.coefficient = cxd(sign, 0.0);
            term.index = parse_ket_body();
            return term;
        }
        term.coefficient = sign * parse_coefficient();
        skip_ws();
        if (!at_end() && peek() == '*') {
            ++pos_;
            skip_ws();
            if (at_end() || peek() != '|') throw SyntaxError("expected a ket after '*'", pos_);
        }
        if (!at_end() && peek() == '|') {
            term.index = parse_ket_body();
        } else {
            term.index.entries.assign(dims_.size(), 0);  // bare coefficient: coeff * |0...0>
        }
        return term;
    }

    cxd parse_coefficient() {
        if (at_end()) throw SyntaxError("expected a coefficient or ket", pos_);
        if (peek() == '(') {
            ++pos_;
            const double re = parse_real(true);
            double im = 0.0;
            if (!at_end() && (peek() == '+' || peek() == '-')) {
                const double im_sign = peek() == '-' ? -1.0 : 1.0;
                ++pos_;
                im = im_sign * parse_real(false);
                expect_imaginary_unit();
            }
            if (at_end() || peek() != ')') {
                throw SyntaxError("expected ')' to close the coefficient", pos_);
            }
            ++pos_;
            return {re, im};
        }
        const double value = parse_real(true);
        if (!at_end() && peek() == 'i') {
            ++pos_;
            return {0.0, value};
        }
        return {value, 0.0};
    }

    void expect_imaginary_unit() {
        if (at_end() || peek() != 'i') {
            throw SyntaxError("expected 'i' after the imaginary part", pos_);
        }
        ++pos_;
    }

    double parse_real(bool allow_sign) {
        const std::size_t start = pos_;
        if (!at_end() && (peek() == '+' || peek() == '-')) {
            if (!allow_sign) throw SyntaxError("expected an unsigned number", pos_);
            ++pos_;
        }
        std::size_t digits = 0;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_, ++digits;
        if (!at_end() && peek() == '.') {
            ++pos_;
            while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_, ++digits;
        }
        if (digits == 0) throw SyntaxError("expected a number", pos_);
        if (!at_end() && (peek() == 'e' || peek() == 'E')) {
            ++pos_;
            if (!at_end() && (peek() == '+' || peek() == '-')) ++pos_;
            if (at_end() || !std::isdigit(static_cast<unsigned char>(peek()))) {
                throw SyntaxError("expected exponent digits", pos_);
            }
            while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        }
        return std::strtod(text_.substr(start, pos_ - start).c_str(), nullptr);
    }

    // One nonnegative decimal integer at `cursor` (advanced past it), clamped
    // so oversized values stay representable until the dimension check
    // reports them.
    int parse_index_value(std::size_t& cursor, std::size_t limit) const {
        long long value = 0;
        while (cursor < limit && std::isdigit(static_cast<unsigned char>(text_[cursor]))) {
            if (value < (1LL << 40)) value = value * 10 + (text_[cursor] - '0');
            ++cursor;
        }
        return static_cast<int>(value > (1LL << 30) ? (1LL << 30) : value);
    }

    void check_bound(int value, std::size_t factor, std::size_t at) {
        if (value >= dims_[factor]) {
            throw SemanticError("index " + std::to_string(value) + " is outside factor " +
                                    std::to_string(factor + 1) + " of dimension " +
                                    std::to_string(dims_[factor]),
                                at, static_cast<int>(factor + 1));
        }
    }

    MultiIndex parse_ket_body() {
        const std::size_t opening = pos_;
        ++pos_;  // consume '|'
        const std::size_t factors = dims_.size();
        MultiIndex index;

        if (at_end() || !std::isdigit(static_cast<unsigned char>(peek()))) {
            throw SyntaxError("expected a basis index after '|'", pos_);
        }
        const std::size_t body = pos_;
        bool comma = false;
        while (!at_end() && peek() != '>') {
            if (peek() == ',') {
                comma = true;
            } else if (!std::isdigit(static_cast<unsigned char>(peek()))) {
                throw SyntaxError("expected a digit, ',' or '>' inside the ket", pos_);
            }
            ++pos_;
        }
        if (at_end()) throw SyntaxError("unterminated ket, expected '>'", pos_);
        const std::size_t closing = pos_;
        ++pos_;  // consume '>'

        if (comma) {
            std::size_t cursor = body;
            while (true) {
                const std::size_t entry_at = cursor;
                if (cursor >= closing ||
                    !std::isdigit(static_cast<unsigned char>(text_[cursor]))) {
                    throw SyntaxError("expected a basis index", cursor);
                }
                const int value = parse_index_value(cursor, closing);
                if (index.entries.size() >= factors) {
                    throw SemanticError("ket lists more indices than the " +
                                            std::to_string(factors) + " declared factors",
                                        opening, 0);
                }
                check_bound(value, index.entries.size(), entry_at);
                index.entries.push_back(value);
                if (cursor == closing) break;
                ++cursor;  // the scan admitted only digits and ',' here
            }
        } else if (factors == 1) {
            std::size_t cursor = body;
            const int value = parse_index_value(cursor, closing);
            check_bound(value, 0, body);
            index.entries.push_back(value);
        } else {
            for (int dim : dims_) {
                if (dim > 10) {
                    throw SemanticError(
                        "comma-separated indices are required when a factor dimension "
                        "exceeds 10",
                        opening, 0);
                }
            }
            if (closing - body != factors) {
                throw SemanticError("ket holds " + std::to_string(closing - body) +
                                        " digits, state has " + std::to_string(factors) +
                                        " factors",
                                    opening, 0);
            }
            for (std::size_t factor = 0; factor < factors; ++factor) {
                const int value = text_[body + factor] - '0';
                check_bound(value, factor, body + factor);
                index.entries.push_back(value);
            }
        }
        if (index.entries.size() != factors) {
            throw SemanticError("ket lists " + std::to_string(index.entries.size()) +
                                    " indices, state has " + std::to_string(factors) +
                                    " factors",
                                opening, 0);
        }
        return index;
    }

    const std::string& text_;
    const std::vector<int>& dims_;
    std::size_t pos_ = 0;
};

std::string format_double(double value, int precision) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.*g", precision, value);
    return buffer;
}

std::string format_coefficient(cxd value, int precision) {
    if (value.imag() == 0.0) return format_double(value.real(), precision);
    if (value.real() == 0.0) return format_double(value.imag(), precision) + "i";
    const char* joiner = value.imag() < 0.0 ? "-" : "+";
    return "(" + format_double(value.real(), precision) + joiner +
           format_double(std::abs(value.imag()), precision) + "i)";
}

}  // namespace

KetExpression parse_ket_expression(const std::string& text, const std::vector<int>& dims) {
    space_dim(dims);
    return Parser(text, dims).parse();
}

StateTensor parse_ket(const std::string& text, const std::vector<int>& dims) {
    const KetExpression expression = parse_ket_expression(text, dims);
    StateTensor state = make_state(dims, std::vector<cxd>(space_dim(dims), cxd(0.0, 0.0)));
    for (const KetTerm& term : expression.terms) {
        state.amplitudes[flatten_index(dims, term.index)] += term.coefficient;
    }
    return state;
}

std::string format_ket(const StateTensor& state, int precision) {
    const std::size_t total = space_dim(state.dims);
    if (state.amplitudes.size() != total) {
        throw DimensionError("amplitude array has " + std::to_string(state.amplitudes.size()) +
                             " entries, dims require " + std::to_string(total));
    }
    if (precision < 1) throw ArgumentError("precision must be at least 1 digit");
    bool compact = true;
    for (int dim : state.dims) compact = compact && dim <= 10;

    std::string out;
    for (std::size_t offset = 0; offset < total; ++offset) {
        const cxd amplitude = state.amplitudes[offset];
        if (amplitude.real() == 0.0 && amplitude.imag() == 0.0) continue;
        if (!out.empty()) out += " + ";
        out += format_coefficient(amplitude, precision);
        out += "|";
        const MultiIndex index = unflatten_index(state.dims, offset);
        for (std::size_t j = 0; j < index.entries.size(); ++j) {
            if (j > 0 && !compact) out += ",";
            out += std::to_string(index.entries[j]);
        }
        out += ">";
    }
    if (out.empty()) {
        out = "0|";
        for (std::size_t j = 0; j < state.dims.size(); ++j) {
            if (j > 0 && !compact) out += ",";
            out += "0";
        }
        out += ">";
    }
    return out;
}

}  // namespace multisep
