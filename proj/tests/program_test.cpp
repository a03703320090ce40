#include <doctest.h>

#include "mm3/builtin.hpp"
#include "mm3/cse.hpp"
#include "mm3/forms.hpp"
#include "mm3/program.hpp"
#include "support.hpp"

using namespace mm3;
using namespace mm3::test;

namespace {

Ref ref(const char* name) { return *parse_ref(name); }

Assignment assign(const char* name, Op op, const char* lhs, const char* rhs) {
    return {ref(name), op, ref(lhs), ref(rhs)};
}

// One product m1 = u1 * b11, c11 = m1, other outputs empty.
ProgramSketch sketch_with(std::vector<Assignment> named, TermList left) {
    ProgramSketch s;
    s.named = std::move(named);
    s.operands.push_back({left, TermList{{b_entry(0), 1}}});
    s.outputs[0] = {{product_ref(0), 1}};
    return s;
}

} // namespace

TEST_CASE("ref names") {
    for (const char* name : {"a11", "a33", "b23", "m1", "m23", "u4", "v8", "w8", "t12", "c11", "c33", "0"})
        CHECK(to_string(ref(name)) == name);
    for (const char* bad : {"", "a", "a10", "a41", "m0", "c34", "x1", "u0", "a111", "m-1"})
        CHECK_FALSE(parse_ref(bad));
    CHECK(ref("a12") == a_entry(1));
    CHECK(ref("c33") == output_ref(8));
    CHECK(ref("m5") == product_ref(4));
}

TEST_CASE("paper58 program counts") {
    Program p = paper58_program();
    CHECK(count_operations(p) == OpCount{34, 24, 58, 23});
    CHECK(intermediate_counts(p) == std::array<int, 3>{4, 8, 8});
    CHECK(to_string(p.assignments.front().name) == "u1");
}

TEST_CASE("paper58 expansion matches the tensor form") {
    Program p = paper58_program();
    Scheme s = paper58_scheme();
    CHECK(s.rank() == 23);
    CHECK(s.is_well_formed());
    CHECK(brent_verify(s).valid);
    CHECK(canonicalize(scheme_of(p)) == canonicalize(s));
    CHECK(expand(p) == forms_of(s));
}

TEST_CASE("lower and raise") {
    Program p = paper58_program();
    CHECK(lower(raise(p)) == p);
    Rng rng(89);
    for (int t = 0; t < 30; ++t) {
        Program q = greedy_reduce(forms_of(walk(rng, 100)));
        CHECK(lower(raise(q)) == q);
    }
}

TEST_CASE("programs without intermediates expand to their own forms") {
    FormSet f = forms_of(naive_scheme());
    Program p = program_from_forms(f);
    CHECK(count_operations(p) == OpCount{18, 0, 18, 27});
    CHECK(expand(p) == f);
    CHECK(intermediate_counts(p) == std::array<int, 3>{0, 0, 0});
}

TEST_CASE("empty program counts nothing") { CHECK(count_operations(Program{}) == OpCount{}); }

TEST_CASE("lowering puts a positive term first") {
    FormSet f = forms_of(Scheme({Component(lv({-1, 1}), e(1), -e(1))}));
    Program p = program_from_forms(f);
    CHECK(count_operations(p) == OpCount{0, 2, 2, 1});
    CHECK(expand(p) == f);
}

TEST_CASE("malformed sketches are rejected") {
    SUBCASE("cycle") {
        auto s = sketch_with({assign("u1", Op::Add, "u2", "a11"), assign("u2", Op::Add, "u1", "a12")},
                             {{ref("u1"), 1}});
        CHECK_THROWS_AS(lower(s), ProgramError);
    }
    SUBCASE("dangling") {
        auto s = sketch_with({assign("u1", Op::Add, "u5", "a11")}, {{ref("u1"), 1}});
        CHECK_THROWS_AS(lower(s), ProgramError);
    }
    SUBCASE("mixed sides") {
        auto s = sketch_with({assign("u1", Op::Add, "a11", "b11")}, {{ref("u1"), 1}});
        CHECK_THROWS_AS(lower(s), ProgramError);
    }
    SUBCASE("B-entries in a left operand") {
        auto s = sketch_with({}, {{ref("b12"), 1}});
        CHECK_THROWS_AS(lower(s), ProgramError);
    }
    SUBCASE("undefined product in an output") {
        auto s = sketch_with({}, {{ref("a11"), 1}});
        s.outputs[1] = {{ref("m2"), 1}};
        CHECK_THROWS_AS(lower(s), ProgramError);
    }
    SUBCASE("duplicate definition") {
        auto s = sketch_with({assign("u1", Op::Add, "a11", "a12"), assign("u1", Op::Sub, "a11", "a12")},
                             {{ref("u1"), 1}});
        CHECK_THROWS_AS(lower(s), ProgramError);
    }
    SUBCASE("well formed") {
        auto s = sketch_with({assign("u1", Op::Add, "a11", "a12")}, {{ref("u1"), 1}});
        Program p = lower(s);
        CHECK(count_operations(p) == OpCount{1, 0, 1, 1});
    }
}

TEST_CASE("non-ternary expansion is reported") {
    auto s = sketch_with({assign("u1", Op::Add, "a11", "a12")}, {{ref("u1"), 1}, {ref("a11"), 1}});
    Program p = lower(s);
    CHECK_THROWS_AS(expand(p), NonTernaryExpansion);
}

TEST_CASE("program evaluation") {
    Rng rng(97);
    Program p = paper58_program();
    ProgramEvaluator eval(p);
    for (int t = 0; t < 2000; ++t) {
        Mat a = random_matrix(rng), b = random_matrix(rng);
        REQUIRE(evaluate(p, a, b) == schoolbook(a, b));
        REQUIRE(eval(a, b) == schoolbook(a, b));
    }
}
