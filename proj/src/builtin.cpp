#include "mm3/builtin.hpp"

#include <stdexcept>
#include <string>

#include "mm3/io.hpp"

namespace mm3 {

const std::string_view kPaper58ProgramJson = R"json({
  "format": "mm-program/1",
  "assignments": [
    {"name": "u1", "op": "add", "lhs": "a31", "rhs": "a33"},
    {"name": "u2", "op": "add", "lhs": "a21", "rhs": "a22"},
    {"name": "u3", "op": "add", "lhs": "a13", "rhs": "u1"},
    {"name": "u4", "op": "sub", "lhs": "a32", "rhs": "u2"},
    {"name": "v1", "op": "add", "lhs": "b22", "rhs": "b32"},
    {"name": "v2", "op": "sub", "lhs": "b31", "rhs": "v1"},
    {"name": "v3", "op": "add", "lhs": "b12", "rhs": "v2"},
    {"name": "v4", "op": "sub", "lhs": "b11", "rhs": "v3"},
    {"name": "v5", "op": "add", "lhs": "b33", "rhs": "v1"},
    {"name": "v6", "op": "sub", "lhs": "b21", "rhs": "b23"},
    {"name": "v7", "op": "sub", "lhs": "b12", "rhs": "v5"},
    {"name": "v8", "op": "sub", "lhs": "v4", "rhs": "v6"},
    {"name": "w1", "op": "add", "lhs": "m5", "rhs": "m12"},
    {"name": "w2", "op": "add", "lhs": "m1", "rhs": "w1"},
    {"name": "w3", "op": "add", "lhs": "m8", "rhs": "w2"},
    {"name": "w4", "op": "sub", "lhs": "m3", "rhs": "m23"},
    {"name": "w5", "op": "add", "lhs": "m2", "rhs": "w4"},
    {"name": "w6", "op": "add", "lhs": "w3", "rhs": "w5"},
    {"name": "w7", "op": "sub", "lhs": "m10", "rhs": "w6"},
    {"name": "w8", "op": "add", "lhs": "m17", "rhs": "w7"}
  ],
  "products": [
    {"name": "m1", "left": "u1", "right": "v5"},
    {"name": "m2", "left": "u2", "right": [["+", "v2"], ["+", "v6"]]},
    {"name": "m3", "left": "a32", "right": "b23"},
    {"name": "m4", "left": "a31", "right": [["+", "b13"], ["+", "v7"]]},
    {"name": "m5", "left": "u3", "right": "v7"},
    {"name": "m6", "left": [["+", "a32"], ["-", "a33"]], "right": "b22"},
    {"name": "m7", "left": "a23", "right": "b33"},
    {"name": "m8", "left": [["+", "u1"], ["-", "u2"]], "right": "v2"},
    {"name": "m9", "left": [["+", "a12"], ["-", "a13"]], "right": "b22"},
    {"name": "m10", "left": [["+", "u3"], ["-", "a21"]], "right": "v3"},
    {"name": "m11", "left": [["+", "a13"], ["+", "a33"]], "right": [["+", "v1"], ["-", "b12"]]},
    {"name": "m12", "left": "a13", "right": "b33"},
    {"name": "m13", "left": [["+", "a31"], ["+", "u4"]], "right": "v4"},
    {"name": "m14", "left": "a11", "right": "b13"},
    {"name": "m15", "left": [["+", "a11"], ["+", "u3"]], "right": "b12"},
    {"name": "m16", "left": [["+", "a13"], ["+", "a23"]], "right": "b31"},
    {"name": "m17", "left": [["+", "a22"], ["-", "a32"]], "right": [["+", "v4"], ["-", "b21"]]},
    {"name": "m18", "left": [["+", "a11"], ["+", "a21"]], "right": "b11"},
    {"name": "m19", "left": "a12", "right": "b23"},
    {"name": "m20", "left": [["+", "a12"], ["+", "a22"]], "right": "b21"},
    {"name": "m21", "left": "a21", "right": [["+", "b13"], ["-", "v8"]]},
    {"name": "m22", "left": [["+", "a22"], ["-", "a23"]], "right": [["+", "b31"], ["-", "b32"]]},
    {"name": "m23", "left": "u4", "right": "v8"}
  ],
  "outputs": {
    "c11": [["+", "m18"], ["+", "m20"], ["+", "w8"]],
    "c12": [["+", "m9"], ["+", "m15"], ["-", "w2"]],
    "c13": [["+", "m12"], ["+", "m14"], ["+", "m19"]],
    "c21": [["+", "m16"], ["-", "w8"]],
    "c22": [["+", "m16"], ["+", "m22"], ["+", "w3"], ["-", "m10"]],
    "c23": [["+", "m7"], ["+", "m21"], ["+", "w4"], ["-", "m17"]],
    "c31": [["+", "m11"], ["+", "m13"], ["+", "w6"]],
    "c32": [["+", "m6"], ["+", "m11"], ["+", "w2"]],
    "c33": [["+", "m3"], ["+", "m4"], ["-", "m11"], ["-", "w1"]]
  },
  "metadata": {
    "name": "paper58",
    "rank": "23",
    "additions": "58"
  }
})json";

Program paper58_program() { return parse_program(kPaper58ProgramJson).program; }

Scheme paper58_scheme() { return scheme_of(paper58_program()); }

Builtin builtin(std::string_view name) {
    if (name == "naive3") return naive_scheme();
    if (name == "paper58-scheme") return paper58_scheme();
    if (name == "paper58-program") return paper58_program();
    throw std::invalid_argument("unknown built-in \"" + std::string(name) + "\"");
}

std::vector<std::string_view> builtin_names() { return {"naive3", "paper58-scheme", "paper58-program"}; }

} // namespace mm3
