#pragma once

#include <string_view>
#include <variant>
#include <vector>

#include "mm3/program.hpp"
#include "mm3/tensor.hpp"

namespace mm3 {

// The published rank-23, 58-addition program as an mm-program/1 document.
extern const std::string_view kPaper58ProgramJson;

Program paper58_program();
// Tensor form, obtained by expanding paper58_program().
Scheme paper58_scheme();

using Builtin = std::variant<Scheme, Program>;

// "naive3", "paper58-scheme" or "paper58-program". Throws
// std::invalid_argument for anything else.
Builtin builtin(std::string_view name);
std::vector<std::string_view> builtin_names();

} // namespace mm3
