#pragma once

// JSON file formats.
//
//   {"format":"mm-scheme/1","n":3,"rank":R,
//    "components":[{"u":[9 ints],"v":[9 ints],"w":[9 ints]},...],
//    "metadata":{...}}
//
//   {"format":"mm-program/1","inputs":["a11",...,"b33"],
//    "assignments":[{"name":"u1","op":"add","lhs":"a31","rhs":"a33"},...],
//    "products":[{"name":"m1","left":"u1","right":"v5"},
//                {"name":"m2","left":"u2","right":[["+","v2"],["+","v6"]]},...],
//    "outputs":{"c11":[["+","m18"],["+","m20"],["+","w8"]],...},
//    "metadata":{...}}
//
// Product operands are a variable name or a signed term list; outputs are
// always term lists. Metadata is a flat string-to-string map.

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "mm3/program.hpp"
#include "mm3/tensor.hpp"

namespace mm3 {

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Metadata = std::map<std::string, std::string>;

struct SchemeFile {
    Scheme scheme;
    Metadata metadata;
};

struct ProgramFile {
    Program program;
    Metadata metadata;
};

inline constexpr std::string_view kSchemeFormat = "mm-scheme/1";
inline constexpr std::string_view kProgramFormat = "mm-program/1";

// Throw FormatError with the offending field in the message.
SchemeFile parse_scheme(std::string_view text);
ProgramFile parse_program(std::string_view text);

std::string serialize_scheme(const Scheme& s, const Metadata& metadata = {});
std::string serialize_program(const Program& p, const Metadata& metadata = {});

enum class FileKind { Scheme, Program };

// Looks at the "format" field only.
FileKind detect_kind(std::string_view text);

using AnyFile = std::variant<SchemeFile, ProgramFile>;
AnyFile parse_any(std::string_view text);

std::string read_text(const std::filesystem::path& path);
// Writes to a sibling temporary file, then renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view text);

} // namespace mm3
