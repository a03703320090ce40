#pragma once

// Common subexpression elimination over the linear forms of a scheme.

#include <string_view>
#include <vector>

#include "mm3/forms.hpp"
#include "mm3/program.hpp"

namespace mm3 {

// A pair x < y that occurs as +-(x + y) (relative_sign = +1) or
// +-(x - y) (relative_sign = -1) in `occurrences` forms.
struct Candidate {
    Ref x;
    Ref y;
    int relative_sign = 1;
    int occurrences = 0;

    int savings() const { return occurrences - 1; }
    friend bool operator==(const Candidate&, const Candidate&) = default;
};

// Pairs occurring in at least two forms, best first: more occurrences,
// then (x, y) ascending, then +1 before -1.
std::vector<Candidate> collect_candidates(const FormSet& fs);

// Strategy interface of the reduction phase of the search loop.
class CseStrategy {
public:
    virtual ~CseStrategy() = default;
    virtual std::string_view name() const = 0;
    virtual Program reduce(const FormSet& fs) const = 0;
};

// Repeatedly replaces the most frequent pair by a fresh intermediate
// (u_k, v_k or w_k by side) until no pair saves an operation.
//
// A candidate is taken only when it strictly lowers the lowering cost of
// the form set; both orientations x - y and y - x are tried so a rewrite
// does not leave a form without a positive term if it can be avoided.
class GreedyIntersections final : public CseStrategy {
public:
    std::string_view name() const override { return "greedy-intersections"; }
    Program reduce(const FormSet& fs) const override;
};

Program greedy_reduce(const FormSet& fs);

} // namespace mm3
