#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace foliation {

inline constexpr int kMaxVars = 10;
inline constexpr int kMaxExponent = 63;

// Exponent vector packed six bits per variable, x1 in the most significant
// field, so that integer order on the packed word is lexicographic order
// with x1 > x2 > ... .
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::span<const int> exponents);
    MultiIndex(std::initializer_list<int> exponents);

    static MultiIndex unit(int var) { return MultiIndex{}.with(var, 1); }

    int operator[](int var) const noexcept {
        return static_cast<int>((bits_ >> shift(var)) & kMask);
    }
    int degree() const noexcept;

    // Copy with exponent of var replaced.
    MultiIndex with(int var, int exponent) const;
    // Exponent-wise sum; throws on overflow of a field.
    MultiIndex operator+(const MultiIndex& o) const;
    // Exponent-wise difference; requires o divides this.
    MultiIndex operator-(const MultiIndex& o) const;
    bool divisible_by(const MultiIndex& o) const noexcept;

    std::uint64_t packed() const noexcept { return bits_; }
    static MultiIndex from_packed(std::uint64_t bits) {
        MultiIndex m;
        m.bits_ = bits;
        return m;
    }

    std::vector<int> exponents(int nvars) const;
    // "x1^2*x3" style; "1" for the zero index.
    std::string str(int nvars) const;

    friend bool operator==(const MultiIndex& a, const MultiIndex& b) noexcept { return a.bits_ == b.bits_; }
    friend bool operator!=(const MultiIndex& a, const MultiIndex& b) noexcept { return a.bits_ != b.bits_; }
    friend bool operator<(const MultiIndex& a, const MultiIndex& b) noexcept { return a.bits_ < b.bits_; }
    friend bool operator>(const MultiIndex& a, const MultiIndex& b) noexcept { return a.bits_ > b.bits_; }

private:
    static constexpr std::uint64_t kMask = 63;
    static constexpr int shift(int var) noexcept { return 6 * (kMaxVars - 1 - var); }
    std::uint64_t bits_ = 0;
};

// All exponent vectors of total degree `degree` in `nvars` variables, in
// descending lexicographic order.
std::vector<MultiIndex> monomials_of_degree(int nvars, int degree);

// Number of monomials of total degree `degree` in `nvars` variables.
std::size_t count_monomials(int nvars, int degree);

}  // namespace foliation
