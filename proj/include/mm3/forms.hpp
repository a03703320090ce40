#pragma once

// Linear forms of a scheme, as consumed by subexpression elimination.

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mm3/tensor.hpp"

namespace mm3 {

// Which side of the scheme a form or variable belongs to. U-side forms
// combine A-entries, V-side forms B-entries, W-side forms products.
enum class Group : std::uint8_t { U, V, W };

const char* group_name(Group g);

// Declaration order doubles as the variable total order used for
// tie-breaking: inputs and products sort before intermediates.
enum class RefKind : std::uint8_t {
    Zero, // literal 0, only as the head of an all-negative sum
    A,    // a11..a33
    B,    // b11..b33
    M,    // products m1..mR
    U,    // named A-side intermediates u1..
    V,    // named B-side intermediates v1..
    W,    // named product-side intermediates w1..
    T,    // anonymous temporaries from lowering t1..
    C,    // outputs c11..c33
};

struct Ref {
    RefKind kind = RefKind::Zero;
    std::uint16_t index = 0; // 0-based

    std::uint32_t id() const { return (static_cast<std::uint32_t>(kind) << 16) | index; }

    friend bool operator==(const Ref&, const Ref&) = default;
    friend auto operator<=>(const Ref&, const Ref&) = default;
};

inline Ref a_entry(int i) { return {RefKind::A, static_cast<std::uint16_t>(i)}; }
inline Ref b_entry(int i) { return {RefKind::B, static_cast<std::uint16_t>(i)}; }
inline Ref product_ref(int r) { return {RefKind::M, static_cast<std::uint16_t>(r)}; }
inline Ref output_ref(int i) { return {RefKind::C, static_cast<std::uint16_t>(i)}; }

// "a11", "m5", "u3", "t12", "c33", "0".
std::string to_string(Ref r);
std::optional<Ref> parse_ref(std::string_view text);

// Fixed group for kinds that carry one; Zero, T and C get theirs from context.
std::optional<Group> group_of(RefKind k);

struct Term {
    Ref var;
    int sign = 1; // +1 or -1
    friend bool operator==(const Term&, const Term&) = default;
};

using TermList = std::vector<Term>;

// Number of binary +/- operations needed to evaluate `terms` without unary
// negation: k-1, plus one more (0 - x ...) when no term is positive.
int lowering_cost(const TermList& terms);

struct Form {
    Group group = Group::U;
    TermList terms; // sorted by var, no var repeated
    friend bool operator==(const Form&, const Form&) = default;
};

// 2R + 9 forms: U-forms of products 1..R, V-forms 1..R, then the W-forms
// of c11..c33 over the products.
struct FormSet {
    int rank = 0;
    std::vector<Form> forms;

    Form& u_form(int r) { return forms[r]; }
    const Form& u_form(int r) const { return forms[r]; }
    Form& v_form(int r) { return forms[rank + r]; }
    const Form& v_form(int r) const { return forms[rank + r]; }
    Form& w_form(int e) { return forms[2 * rank + e]; }
    const Form& w_form(int e) const { return forms[2 * rank + e]; }

    friend bool operator==(const FormSet&, const FormSet&) = default;
};

FormSet forms_of(const Scheme& s);

// Inverse of forms_of for forms over inputs and products only.
// Throws std::invalid_argument on anything else.
Scheme scheme_from_forms(const FormSet& fs);

// Sum of lowering_cost over all forms: the operation count with no reuse.
int naive_cost(const FormSet& fs);

} // namespace mm3
