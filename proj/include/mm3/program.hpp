#pragma once

// Straight-line programs of binary ADD/SUB/MUL operations computing C = A*B.
//
// Evaluation runs in three phases: A-/B-side assignments in list order,
// then the products, then product-side assignments in list order. Every
// multi-term sum is lowered to a left-to-right chain of binary
// assignments; chains for product operands use anonymous t-names and
// chains for outputs end in an assignment named after the output.

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "mm3/forms.hpp"
#include "mm3/tensor.hpp"

namespace mm3 {

class ProgramError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A program whose expansion leaves {-1, 0, 1}.
class NonTernaryExpansion : public ProgramError {
public:
    using ProgramError::ProgramError;
};

enum class Op : std::uint8_t { Add, Sub };

struct Assignment {
    Ref name;
    Op op = Op::Add;
    Ref lhs;
    Ref rhs;
    friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct Product {
    Ref name; // m_k, k = position + 1
    Ref left;
    Ref right;
    friend bool operator==(const Product&, const Product&) = default;
};

struct Program {
    std::vector<Assignment> assignments;
    std::vector<Product> products;
    std::array<Ref, kEntries> outputs{};
    friend bool operator==(const Program&, const Program&) = default;
};

// Program before lowering: named intermediates plus product operands and
// outputs as signed term lists.
struct ProgramSketch {
    std::vector<Assignment> named; // u/v/w definitions, any order
    std::vector<std::array<TermList, 2>> operands;
    std::array<TermList, kEntries> outputs;
    friend bool operator==(const ProgramSketch&, const ProgramSketch&) = default;
};

// Each sum is lowered with its first positive term as head (0 when none),
// remaining terms in their given order. Named intermediates are
// topologically ordered and placed ahead of the temporaries of their
// phase. Throws ProgramError on dangling, cyclic or cross-group references.
Program lower(const ProgramSketch& sketch);

// Collapses temporary chains back into term lists; lower(raise(p)) == p for
// every p produced by lower.
ProgramSketch raise(const Program& p);

// Group of every assignment, by index. Throws ProgramError when p is not
// well formed.
std::vector<Group> check_program(const Program& p);

struct OpCount {
    int adds = 0;
    int subs = 0;
    int adds_total = 0;
    int muls = 0;
    friend bool operator==(const OpCount&, const OpCount&) = default;
};

OpCount count_operations(const Program& p);

// Output forms over inputs and products. Throws NonTernaryExpansion if a
// product operand or output leaves {-1, 0, 1}.
FormSet expand(const Program& p);

// The forms lowered directly, without subexpression reuse.
Program program_from_forms(const FormSet& fs);

Scheme scheme_of(const Program& p);

Matrix3 evaluate(const Program& p, const Matrix3& a, const Matrix3& b);

// Program resolved to flat value slots, for repeated evaluation.
class ProgramEvaluator {
public:
    explicit ProgramEvaluator(const Program& p);
    Matrix3 operator()(const Matrix3& a, const Matrix3& b) const;

private:
    struct Step {
        enum Kind : std::uint8_t { Add, Sub, Mul } kind;
        int dst, lhs, rhs;
    };
    int slots_ = 0;
    std::vector<Step> steps_;
    std::array<int, kEntries> outputs_{};
};

// Counts of named intermediates by side: {u, v, w}.
std::array<int, 3> intermediate_counts(const Program& p);

} // namespace mm3
