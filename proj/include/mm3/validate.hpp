#pragma once

#include <cstdint>
#include <optional>

#include "mm3/program.hpp"
#include "mm3/tensor.hpp"

namespace mm3 {

struct NumericOptions {
    std::uint64_t trials = 10000;
    std::int64_t lo = -100;
    std::int64_t hi = 100;
    std::uint64_t seed = 0;
};

struct Counterexample {
    std::uint64_t trial = 0;
    Matrix3 a{}, b{};
    Matrix3 expected{}, got{};
};

struct NumericReport {
    std::uint64_t trials = 0;
    std::uint64_t passed = 0;
    std::uint64_t failures = 0;
    std::optional<Counterexample> first_failure;
    bool ok() const { return failures == 0; }
};

// Random integer matrix pairs with entries uniform in [lo, hi], compared
// entry-wise against the schoolbook product. Throws std::invalid_argument
// for trials == 0 or lo > hi.
NumericReport numeric_validate(const Scheme& s, const NumericOptions& opt = {});
NumericReport numeric_validate(const Program& p, const NumericOptions& opt = {});

// Expands p back to tensors and checks the Brent equations. Propagates
// NonTernaryExpansion.
BrentReport symbolic_validate(const Program& p);

} // namespace mm3
