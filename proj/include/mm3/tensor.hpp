#pragma once

// Exact-integer representation of bilinear 3x3 matrix multiplication schemes.
//
// Entries of A, B and C are flattened row-major: position 0 is (1,1),
// position 1 is (1,2), ... position 8 is (3,3). A scheme with rank R
// computes m_r = (u_r . a) * (v_r . b) and c_pq = sum_r w_r[pq] * m_r.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mm3 {

inline constexpr int kDim = 3;
inline constexpr int kEntries = kDim * kDim;
inline constexpr int kMaxRank = 64;

// A coefficient in {-1, 0, +1}.
class Ternary {
public:
    constexpr Ternary() = default;
    // Throws std::domain_error for values outside {-1, 0, 1}.
    explicit Ternary(int value);

    constexpr int value() const { return value_; }
    friend constexpr bool operator==(Ternary, Ternary) = default;

private:
    std::int8_t value_ = 0;
};

// Ternary linear form over the nine entries of one matrix. Stored as two
// disjoint 9-bit masks so sums and differences reduce to bit operations.
class LinVec {
public:
    static constexpr std::uint16_t kMask = (1u << kEntries) - 1;

    constexpr LinVec() = default;

    // Throws std::invalid_argument on overlapping or out-of-range masks.
    static LinVec from_masks(std::uint16_t pos, std::uint16_t neg);
    // Throws std::invalid_argument unless coeffs has 9 entries in {-1,0,1}.
    static LinVec from_coeffs(std::span<const int> coeffs);
    static LinVec unit(int position, int sign = 1);

    std::uint16_t pos() const { return pos_; }
    std::uint16_t neg() const { return neg_; }

    int coeff(int position) const;
    Ternary at(int position) const { return Ternary(coeff(position)); }
    std::array<int, kEntries> coeffs() const;

    bool is_zero() const { return (pos_ | neg_) == 0; }
    int nnz() const;
    // Sign of the first nonzero coefficient; 0 for the zero vector.
    int leading_sign() const;

    LinVec operator-() const { return raw(neg_, pos_); }

    friend bool operator==(const LinVec&, const LinVec&) = default;
    // Lexicographic over the coefficient sequence, -1 < 0 < +1.
    friend std::strong_ordering operator<=>(const LinVec& a, const LinVec& b);

    // Sum / difference when every coefficient stays ternary.
    friend bool ternary_add(const LinVec& a, const LinVec& b, LinVec& out);
    friend bool ternary_sub(const LinVec& a, const LinVec& b, LinVec& out);

private:
    static constexpr LinVec raw(std::uint16_t pos, std::uint16_t neg) {
        LinVec v;
        v.pos_ = pos;
        v.neg_ = neg;
        return v;
    }

    std::uint16_t pos_ = 0;
    std::uint16_t neg_ = 0;
};

enum class Slot : std::uint8_t { U = 0, V = 1, W = 2 };

constexpr int slot_index(Slot s) { return static_cast<int>(s); }
const char* slot_name(Slot s);

// One rank-one term u (x) v (x) w of a scheme.
struct Component {
    std::array<LinVec, 3> factors{};

    Component() = default;
    Component(LinVec u, LinVec v, LinVec w) : factors{u, v, w} {}

    const LinVec& u() const { return factors[0]; }
    const LinVec& v() const { return factors[1]; }
    const LinVec& w() const { return factors[2]; }
    LinVec& operator[](Slot s) { return factors[slot_index(s)]; }
    const LinVec& operator[](Slot s) const { return factors[slot_index(s)]; }

    bool is_degenerate() const {
        return factors[0].is_zero() || factors[1].is_zero() || factors[2].is_zero();
    }

    friend bool operator==(const Component&, const Component&) = default;
    friend std::strong_ordering operator<=>(const Component&, const Component&) = default;
};

// Flip signs so u and v lead with +1, absorbing the flips into w.
void normalize_signs(Component& c);

// Ordered list of components. Transient states produced inside the flip
// walk may hold degenerate components; use check_well_formed() where the
// full invariant set is required.
class Scheme {
public:
    Scheme() = default;
    explicit Scheme(std::vector<Component> components) : components_(std::move(components)) {}

    int n() const { return kDim; }
    int rank() const { return static_cast<int>(components_.size()); }

    const std::vector<Component>& components() const { return components_; }
    std::vector<Component>& components() { return components_; }
    const Component& operator[](std::size_t i) const { return components_[i]; }
    Component& operator[](std::size_t i) { return components_[i]; }

    bool is_well_formed() const;
    // Throws std::invalid_argument naming the first violated invariant.
    void check_well_formed() const;

    friend bool operator==(const Scheme&, const Scheme&) = default;

private:
    std::vector<Component> components_;
};

// Dense 9x9x9 tensor sum_r u_r (x) v_r (x) w_r.
class TensorSum {
public:
    std::int64_t& at(int a, int b, int c) { return data_[(a * kEntries + b) * kEntries + c]; }
    std::int64_t at(int a, int b, int c) const { return data_[(a * kEntries + b) * kEntries + c]; }
    bool is_zero() const;
    friend bool operator==(const TensorSum&, const TensorSum&) = default;

private:
    std::array<std::int64_t, kEntries * kEntries * kEntries> data_{};
};

TensorSum tensor_sum(const Scheme& s);

struct BrentViolation {
    // 1-based (i, j, k, m, p, q): u index (i,j), v index (k,m), w index (p,q).
    std::array<int, 6> index{};
    std::int64_t residual = 0;
};

struct BrentReport {
    bool valid = true;
    std::vector<BrentViolation> violations;
};

// Evaluates all 3^6 Brent equations
//   sum_r u_r[ij] v_r[km] w_r[pq] = [i=p][j=k][m=q]
// in exact integer arithmetic. The right-hand side follows from
// c_pq = sum_r w_r[pq] m_r = sum_k a_pk b_kq.
BrentReport brent_verify(const Scheme& s);

// Standard 27-multiplication algorithm: one component per (i, k, j) with
// u = e(a_ik), v = e(b_kj), w = e(c_ij).
Scheme naive_scheme();

// Sign-normalizes every component and sorts components by (u, v, w).
Scheme canonicalize(Scheme s);

struct AdditionCount {
    int u_adds = 0;
    int v_adds = 0;
    int w_adds = 0;
    int total = 0;
    friend bool operator==(const AdditionCount&, const AdditionCount&) = default;
};

// Additions without any subexpression reuse.
AdditionCount naive_addition_count(const Scheme& s);

using Matrix3 = std::array<std::int64_t, kEntries>;

Matrix3 multiply_naive(const Matrix3& a, const Matrix3& b);
Matrix3 evaluate(const Scheme& s, const Matrix3& a, const Matrix3& b);

} // namespace mm3
