#pragma once

// Oracles and generators shared by the test binaries. The oracles work on
// plain coefficient arrays and never call the code they check.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mm3/flip.hpp"
#include "mm3/rng.hpp"
#include "mm3/tensor.hpp"

namespace mm3::test {

using Dense = std::vector<std::int64_t>; // 9 x 9 x 9, index (a * 9 + b) * 9 + c

inline Dense dense_sum(const Scheme& s) {
    Dense t(729, 0);
    for (const Component& c : s.components()) {
        auto u = c.u().coeffs(), v = c.v().coeffs(), w = c.w().coeffs();
        for (int a = 0; a < 9; ++a)
            for (int b = 0; b < 9; ++b)
                for (int g = 0; g < 9; ++g) t[(a * 9 + b) * 9 + g] += u[a] * v[b] * w[g];
    }
    return t;
}

// a_ik * b_kj contributes to c_ij.
inline Dense matmul_tensor() {
    Dense t(729, 0);
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 3; ++j) t[((i * 3 + k) * 9 + (k * 3 + j)) * 9 + (i * 3 + j)] = 1;
    return t;
}

inline bool all_ternary(const Scheme& s) {
    for (const Component& c : s.components())
        for (const LinVec& f : c.factors)
            for (int x : f.coeffs())
                if (x < -1 || x > 1) return false;
    return true;
}

using Mat = std::array<std::int64_t, 9>;

inline Mat schoolbook(const Mat& a, const Mat& b) {
    Mat c{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) c[i * 3 + j] += a[i * 3 + k] * b[k * 3 + j];
    return c;
}

inline Mat eval_coeffs(const Scheme& s, const Mat& a, const Mat& b) {
    Mat c{};
    for (const Component& comp : s.components()) {
        auto u = comp.u().coeffs(), v = comp.v().coeffs(), w = comp.w().coeffs();
        std::int64_t x = 0, y = 0;
        for (int e = 0; e < 9; ++e) {
            x += u[e] * a[e];
            y += v[e] * b[e];
        }
        for (int e = 0; e < 9; ++e) c[e] += w[e] * x * y;
    }
    return c;
}

inline Mat random_matrix(Rng& rng, std::int64_t lo = -100, std::int64_t hi = 100) {
    Mat m;
    for (auto& x : m) x = rng.between(lo, hi);
    return m;
}

inline LinVec lv(std::initializer_list<int> c) {
    std::vector<int> v(c);
    v.resize(9, 0);
    return LinVec::from_coeffs(v);
}

inline LinVec e(int k) { return LinVec::unit(k - 1); } // 1-based basis vector

// Walks `steps` uniform flips from naive, with an occasional plus while
// the rank is below 30. Every state is Brent-valid.
inline Scheme walk(Rng& rng, int steps) {
    Scheme s = naive_scheme();
    for (int i = 0; i < steps; ++i) {
        auto flips = enumerate_flips(s);
        if (!flips.empty()) s = prune_zero(apply_flip(s, flips[rng.below(flips.size())]));
        if (s.rank() < 30 && rng.chance(0.05))
            if (auto next = plus(s, rng)) s = *next;
    }
    return s;
}

inline Scheme corrupt(Scheme s, Rng& rng) {
    std::size_t r = rng.below(s.components().size());
    Slot slot = static_cast<Slot>(rng.below(3));
    auto c = s[r][slot].coeffs();
    int pos = static_cast<int>(rng.below(9));
    c[pos] = c[pos] == 0 ? 1 : 0;
    LinVec f = LinVec::from_coeffs(c);
    if (f.is_zero()) f = LinVec::unit((pos + 1) % 9);
    s[r][slot] = f;
    return s;
}

} // namespace mm3::test
