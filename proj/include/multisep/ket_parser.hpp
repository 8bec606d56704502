#pragma once

#include <string>
#include <vector>

#include "multisep/tensor_core.hpp"

namespace multisep {

/// One parsed summand: coefficient times a basis ket.
struct KetTerm {
    cxd coefficient;
    MultiIndex index;
};

/// A sum of coefficient-weighted basis kets; always holds at least one term.
struct KetExpression {
    std::vector<KetTerm> terms;
};

/// Parses the ket grammar
///
///   expr   := ws term (ws ("+"|"-") ws term)* ws
///   term   := (coeff ws "*"? ws)? ket | coeff
///   ket    := "|" idx ("," idx)* ">"
///   idx    := decimal integer
///   coeff  := real | imag | "(" real (("+"|"-") uimag)? ")"
///   real   := decimal float (optional sign); imag := real "i"; uimag := unsigned real "i"
///
/// A comma-free multi-digit ket body ("|010>") assigns one digit per factor
/// and is accepted only when every dim is at most 10; with a single factor a
/// comma-free body is one plain integer. A bare coeff term abbreviates
/// coeff*|0...0>. Grammar violations raise SyntaxError with the 0-based byte
/// offset; in-grammar violations of the declared dims (an index out of
/// range, a wrong factor count) raise SemanticError naming the factor.
KetExpression parse_ket_expression(const std::string& text, const std::vector<int>& dims);

/// Accumulates the expression into an (unnormalized) amplitude tensor,
/// summing coefficients of repeated kets.
StateTensor parse_ket(const std::string& text, const std::vector<int>& dims);

/// Renders a parseable expression reproducing the state: one term per
/// nonzero amplitude in flattening order (a single zero term for the zero
/// state), coefficients printed to `precision` significant digits. The
/// default 17 makes parse(format_ket(s)) reproduce s exactly.
std::string format_ket(const StateTensor& state, int precision = 17);

}  // namespace multisep
