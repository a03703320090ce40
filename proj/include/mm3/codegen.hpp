#pragma once

#include <string>
#include <string_view>

#include "mm3/program.hpp"

namespace mm3 {

enum class Dialect {
    Pseudo, // "u1 = a31 + a33", "m1 = u1 * v5", one statement per line
    CLike,  // C++ function template over a caller-supplied scalar type
};

// Throws std::invalid_argument for names other than "pseudo" / "c-like".
Dialect parse_dialect(std::string_view name);

// Straight-line source with one statement per assignment, product and
// output. Variable names are kept; no loops, no unary negation.
std::string emit_code(const Program& p, Dialect dialect, std::string_view function_name = "mm3_multiply");

// Human-readable listing: intermediates, products with inline operand sums,
// then the output matrix entries.
std::string render_algebraic(const Program& p);

} // namespace mm3
