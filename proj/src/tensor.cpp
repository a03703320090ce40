#include "mm3/tensor.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace mm3 {

Ternary::Ternary(int value) {
    if (value < -1 || value > 1)
        throw std::domain_error("ternary coefficient out of range: " + std::to_string(value));
    value_ = static_cast<std::int8_t>(value);
}

LinVec LinVec::from_masks(std::uint16_t pos, std::uint16_t neg) {
    if ((pos & neg) != 0 || ((pos | neg) & ~kMask) != 0)
        throw std::invalid_argument("invalid LinVec masks");
    return raw(pos, neg);
}

LinVec LinVec::from_coeffs(std::span<const int> coeffs) {
    if (coeffs.size() != kEntries)
        throw std::invalid_argument("LinVec needs exactly 9 coefficients, got " +
                                    std::to_string(coeffs.size()));
    std::uint16_t pos = 0, neg = 0;
    for (int i = 0; i < kEntries; ++i) {
        int c = Ternary(coeffs[i]).value();
        if (c > 0) pos |= 1u << i;
        if (c < 0) neg |= 1u << i;
    }
    return raw(pos, neg);
}

LinVec LinVec::unit(int position, int sign) {
    if (position < 0 || position >= kEntries)
        throw std::invalid_argument("LinVec position out of range");
    std::uint16_t bit = 1u << position;
    return sign >= 0 ? raw(bit, 0) : raw(0, bit);
}

int LinVec::coeff(int position) const {
    if ((pos_ >> position) & 1u) return 1;
    if ((neg_ >> position) & 1u) return -1;
    return 0;
}

std::array<int, kEntries> LinVec::coeffs() const {
    std::array<int, kEntries> out{};
    for (int i = 0; i < kEntries; ++i) out[i] = coeff(i);
    return out;
}

int LinVec::nnz() const { return std::popcount(static_cast<unsigned>(pos_ | neg_)); }

int LinVec::leading_sign() const {
    unsigned all = pos_ | neg_;
    if (all == 0) return 0;
    unsigned first = all & (~all + 1);
    return (pos_ & first) ? 1 : -1;
}

std::strong_ordering operator<=>(const LinVec& a, const LinVec& b) {
    for (int i = 0; i < kEntries; ++i) {
        int ca = a.coeff(i), cb = b.coeff(i);
        if (ca != cb) return ca <=> cb;
    }
    return std::strong_ordering::equal;
}

bool ternary_add(const LinVec& a, const LinVec& b, LinVec& out) {
    if ((a.pos_ & b.pos_) || (a.neg_ & b.neg_)) return false;
    out = LinVec::raw(static_cast<std::uint16_t>((a.pos_ & ~b.neg_) | (b.pos_ & ~a.neg_)),
                      static_cast<std::uint16_t>((a.neg_ & ~b.pos_) | (b.neg_ & ~a.pos_)));
    return true;
}

bool ternary_sub(const LinVec& a, const LinVec& b, LinVec& out) { return ternary_add(a, -b, out); }

const char* slot_name(Slot s) {
    switch (s) {
    case Slot::U: return "u";
    case Slot::V: return "v";
    case Slot::W: return "w";
    }
    return "?";
}

void normalize_signs(Component& c) {
    if (c.factors[0].leading_sign() < 0) {
        c.factors[0] = -c.factors[0];
        c.factors[2] = -c.factors[2];
    }
    if (c.factors[1].leading_sign() < 0) {
        c.factors[1] = -c.factors[1];
        c.factors[2] = -c.factors[2];
    }
}

bool Scheme::is_well_formed() const {
    if (components_.empty() || rank() > kMaxRank) return false;
    return std::none_of(components_.begin(), components_.end(),
                        [](const Component& c) { return c.is_degenerate(); });
}

void Scheme::check_well_formed() const {
    if (components_.empty()) throw std::invalid_argument("scheme has no components");
    if (rank() > kMaxRank)
        throw std::invalid_argument("scheme rank " + std::to_string(rank()) + " exceeds " +
                                    std::to_string(kMaxRank));
    for (std::size_t r = 0; r < components_.size(); ++r)
        for (Slot s : {Slot::U, Slot::V, Slot::W})
            if (components_[r][s].is_zero())
                throw std::invalid_argument("component " + std::to_string(r) + " has zero " +
                                            slot_name(s) + " factor");
}

bool TensorSum::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](std::int64_t x) { return x == 0; });
}

TensorSum tensor_sum(const Scheme& s) {
    TensorSum t;
    for (const Component& c : s.components()) {
        auto u = c.u().coeffs(), v = c.v().coeffs(), w = c.w().coeffs();
        for (int a = 0; a < kEntries; ++a) {
            if (!u[a]) continue;
            for (int b = 0; b < kEntries; ++b) {
                if (!v[b]) continue;
                for (int g = 0; g < kEntries; ++g)
                    if (w[g]) t.at(a, b, g) += u[a] * v[b] * w[g];
            }
        }
    }
    return t;
}

BrentReport brent_verify(const Scheme& s) {
    TensorSum t = tensor_sum(s);
    BrentReport report;
    for (int i = 0; i < kDim; ++i)
        for (int j = 0; j < kDim; ++j)
            for (int k = 0; k < kDim; ++k)
                for (int m = 0; m < kDim; ++m)
                    for (int p = 0; p < kDim; ++p)
                        for (int q = 0; q < kDim; ++q) {
                            std::int64_t target = (i == p && j == k && m == q) ? 1 : 0;
                            std::int64_t residual =
                                t.at(i * kDim + j, k * kDim + m, p * kDim + q) - target;
                            if (residual != 0)
                                report.violations.push_back(
                                    {{i + 1, j + 1, k + 1, m + 1, p + 1, q + 1}, residual});
                        }
    report.valid = report.violations.empty();
    return report;
}

Scheme naive_scheme() {
    std::vector<Component> comps;
    comps.reserve(27);
    for (int i = 0; i < kDim; ++i)
        for (int k = 0; k < kDim; ++k)
            for (int j = 0; j < kDim; ++j)
                comps.emplace_back(LinVec::unit(i * kDim + k), LinVec::unit(k * kDim + j),
                                   LinVec::unit(i * kDim + j));
    return Scheme(std::move(comps));
}

Scheme canonicalize(Scheme s) {
    for (Component& c : s.components()) normalize_signs(c);
    std::sort(s.components().begin(), s.components().end());
    return s;
}

AdditionCount naive_addition_count(const Scheme& s) {
    AdditionCount count;
    std::array<int, kEntries> column{};
    for (const Component& c : s.components()) {
        count.u_adds += std::max(0, c.u().nnz() - 1);
        count.v_adds += std::max(0, c.v().nnz() - 1);
        for (int g = 0; g < kEntries; ++g)
            if (c.w().coeff(g)) ++column[g];
    }
    for (int n : column) count.w_adds += std::max(0, n - 1);
    count.total = count.u_adds + count.v_adds + count.w_adds;
    return count;
}

Matrix3 multiply_naive(const Matrix3& a, const Matrix3& b) {
    Matrix3 c{};
    for (int i = 0; i < kDim; ++i)
        for (int j = 0; j < kDim; ++j)
            for (int k = 0; k < kDim; ++k) c[i * kDim + j] += a[i * kDim + k] * b[k * kDim + j];
    return c;
}

Matrix3 evaluate(const Scheme& s, const Matrix3& a, const Matrix3& b) {
    Matrix3 c{};
    for (const Component& comp : s.components()) {
        std::int64_t left = 0, right = 0;
        for (int e = 0; e < kEntries; ++e) {
            left += comp.u().coeff(e) * a[e];
            right += comp.v().coeff(e) * b[e];
        }
        std::int64_t m = left * right;
        for (int e = 0; e < kEntries; ++e) c[e] += comp.w().coeff(e) * m;
    }
    return c;
}

} // namespace mm3
