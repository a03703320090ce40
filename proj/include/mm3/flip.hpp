#pragma once

// Moves of the ternary flip graph.
//
// A flip acts on two components whose factors in one slot agree up to
// sign. With shared slot U, transfer slot V and coefficient s = +-1:
//
//   (x, v_r, w_r), (x, v_d, w_d)  ->  (x, v_r + s v_d, w_r), (x, v_d, w_d - s w_r)
//
// where r is the receiver and d the donor. If the donor holds -x instead,
// the receiver adds -s v_d. The other (shared, transfer) choices are the
// same move with slots permuted. A flip is only offered when both
// rewritten factors stay ternary.

#include <cstddef>
#include <optional>
#include <vector>

#include "mm3/rng.hpp"
#include "mm3/tensor.hpp"

namespace mm3 {

struct Flip {
    Slot shared = Slot::U;
    std::size_t receiver = 0;
    std::size_t donor = 0;
    // Summed in the receiver; the remaining slot is differenced in the donor.
    Slot transfer = Slot::V;
    int sign = 1;

    friend bool operator==(const Flip&, const Flip&) = default;
};

// Slot that is neither `shared` nor `transfer`.
Slot remaining_slot(Slot shared, Slot transfer);

// Every valid flip of s, in a deterministic order.
std::vector<Flip> enumerate_flips(const Scheme& s);

// Appends the flips to `out` (cleared first); avoids reallocating in walks.
void enumerate_flips(const Scheme& s, std::vector<Flip>& out);

bool is_valid_flip(const Scheme& s, const Flip& f);

// True when f zeroes a factor, so applying it and pruning drops the rank.
bool is_reducing(const Scheme& s, const Flip& f);

// Applies f and re-normalizes the signs of the two touched components.
// The result may contain a degenerate component; see prune_zero.
// Throws std::invalid_argument when f is not valid for s.
Scheme apply_flip(Scheme s, const Flip& f);

// Removes components with any zero factor.
Scheme prune_zero(Scheme s);

// Replaces component `index` by two copies whose `slot` factors are
// `part` and (factor - part). Throws std::invalid_argument unless both are
// ternary and nonzero, or when the rank is already kMaxRank.
Scheme split(const Scheme& s, std::size_t index, Slot slot, const LinVec& part);

// Splits one random factor x of a random component into x' + (x - x'),
// both ternary and nonzero, raising the rank by one. Returns nullopt when
// rank is already kMaxRank or no component has a nonzero factor.
std::optional<Scheme> plus(const Scheme& s, Rng& rng);

} // namespace mm3
