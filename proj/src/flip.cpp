#include "mm3/flip.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace mm3 {

namespace {

constexpr Slot kSlots[3] = {Slot::U, Slot::V, Slot::W};

// +1 / -1 when the shared factors agree up to sign, 0 otherwise.
int shared_sign(const Component& r, const Component& d, Slot shared) {
    if (r[shared].is_zero()) return 0;
    if (r[shared] == d[shared]) return 1;
    if (r[shared] == -d[shared]) return -1;
    return 0;
}

// Rewritten (receiver, donor) factors; false if not ternary.
bool flip_result(const Component& r, const Component& d, const Flip& f, int sigma, LinVec& recv_out,
                 LinVec& donor_out) {
    const Slot rest = remaining_slot(f.shared, f.transfer);
    const LinVec add = f.sign * sigma > 0 ? d[f.transfer] : -d[f.transfer];
    const LinVec sub = f.sign > 0 ? r[rest] : -r[rest];
    return ternary_add(r[f.transfer], add, recv_out) && ternary_sub(d[rest], sub, donor_out);
}

bool result_of(const Scheme& s, const Flip& f, LinVec& recv_out, LinVec& donor_out) {
    const std::size_t n = s.components().size();
    if (f.receiver >= n || f.donor >= n || f.receiver == f.donor) return false;
    if (f.shared == f.transfer || (f.sign != 1 && f.sign != -1)) return false;
    const Component& r = s[f.receiver];
    const Component& d = s[f.donor];
    const int sigma = shared_sign(r, d, f.shared);
    return sigma != 0 && flip_result(r, d, f, sigma, recv_out, donor_out);
}

} // namespace

Slot remaining_slot(Slot shared, Slot transfer) {
    return static_cast<Slot>(3 - slot_index(shared) - slot_index(transfer));
}

void enumerate_flips(const Scheme& s, std::vector<Flip>& out) {
    out.clear();
    const auto& comps = s.components();
    const std::size_t n = comps.size();
    LinVec a, b;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            for (Slot shared : kSlots) {
                const int sigma = shared_sign(comps[i], comps[j], shared);
                if (sigma == 0) continue;
                for (Slot transfer : kSlots) {
                    if (transfer == shared) continue;
                    for (int sign : {1, -1}) {
                        Flip f{shared, i, j, transfer, sign};
                        if (flip_result(comps[i], comps[j], f, sigma, a, b)) out.push_back(f);
                        f = {shared, j, i, transfer, sign};
                        if (flip_result(comps[j], comps[i], f, sigma, a, b)) out.push_back(f);
                    }
                }
            }
        }
    }
}

std::vector<Flip> enumerate_flips(const Scheme& s) {
    std::vector<Flip> out;
    enumerate_flips(s, out);
    return out;
}

bool is_valid_flip(const Scheme& s, const Flip& f) {
    LinVec a, b;
    return result_of(s, f, a, b);
}

bool is_reducing(const Scheme& s, const Flip& f) {
    LinVec a, b;
    return result_of(s, f, a, b) && (a.is_zero() || b.is_zero());
}

Scheme apply_flip(Scheme s, const Flip& f) {
    LinVec recv_out, donor_out;
    if (!result_of(s, f, recv_out, donor_out)) throw std::invalid_argument("flip is not valid for this scheme");
    Component& r = s[f.receiver];
    Component& d = s[f.donor];
    r[f.transfer] = recv_out;
    d[remaining_slot(f.shared, f.transfer)] = donor_out;
    normalize_signs(r);
    normalize_signs(d);
    return s;
}

Scheme prune_zero(Scheme s) {
    auto& comps = s.components();
    comps.erase(std::remove_if(comps.begin(), comps.end(),
                               [](const Component& c) { return c.is_degenerate(); }),
                comps.end());
    return s;
}

std::optional<Scheme> plus(const Scheme& s, Rng& rng) {
    if (s.rank() >= kMaxRank) return std::nullopt;

    // (component, slot) pairs whose factor can be split.
    std::vector<std::pair<std::size_t, Slot>> sites;
    for (std::size_t i = 0; i < s.components().size(); ++i)
        for (Slot slot : kSlots)
            if (!s[i][slot].is_zero()) sites.emplace_back(i, slot);
    if (sites.empty()) return std::nullopt;

    auto [index, slot] = sites[rng.below(sites.size())];
    const LinVec x = s[index][slot];
    const unsigned support = x.pos() | x.neg();
    const int k = std::popcount(support);

    // Either keep a random nonempty proper subset of the support, or move
    // everything to x' = x + sign * e_m for some m outside the support, which
    // leaves x - x' = -sign * e_m.
    LinVec first;
    const bool use_subset = k == kEntries || (k >= 2 && rng.chance(0.5));
    if (use_subset) {
        unsigned keep;
        do {
            keep = 0;
            for (int bit = 0; bit < kEntries; ++bit)
                if (((support >> bit) & 1u) && rng.chance(0.5)) keep |= 1u << bit;
        } while (keep == 0 || keep == support);
        first = LinVec::from_masks(static_cast<std::uint16_t>(x.pos() & keep),
                                   static_cast<std::uint16_t>(x.neg() & keep));
    } else {
        std::vector<int> outside;
        for (int bit = 0; bit < kEntries; ++bit)
            if (!((support >> bit) & 1u)) outside.push_back(bit);
        int m = outside[rng.below(outside.size())];
        int sign = rng.chance(0.5) ? 1 : -1;
        ternary_add(x, LinVec::unit(m, sign), first);
    }
    return split(s, index, slot, first);
}

Scheme split(const Scheme& s, std::size_t index, Slot slot, const LinVec& part) {
    if (s.rank() >= kMaxRank) throw std::invalid_argument("split would exceed the rank cap");
    if (index >= s.components().size()) throw std::invalid_argument("split: component index out of range");
    const LinVec x = s[index][slot];
    LinVec rest;
    if (part.is_zero() || !ternary_sub(x, part, rest) || rest.is_zero())
        throw std::invalid_argument("split: both parts must be ternary and nonzero");

    Scheme out = s;
    Component extra = out[index];
    out[index][slot] = part;
    extra[slot] = rest;
    normalize_signs(out[index]);
    normalize_signs(extra);
    out.components().push_back(extra);
    return out;
}

} // namespace mm3
