#include "foliation/multi_index.hpp"

#include <stdexcept>

namespace foliation {

MultiIndex::MultiIndex(std::span<const int> exponents) {
    if (exponents.size() > static_cast<std::size_t>(kMaxVars)) throw std::invalid_argument("too many variables");
    for (std::size_t v = 0; v < exponents.size(); ++v) *this = with(static_cast<int>(v), exponents[v]);
}

MultiIndex::MultiIndex(std::initializer_list<int> exponents)
    : MultiIndex(std::span<const int>(exponents.begin(), exponents.size())) {}

int MultiIndex::degree() const noexcept {
    int d = 0;
    for (int v = 0; v < kMaxVars; ++v) d += (*this)[v];
    return d;
}

MultiIndex MultiIndex::with(int var, int exponent) const {
    if (var < 0 || var >= kMaxVars) throw std::out_of_range("variable index out of range");
    if (exponent < 0 || exponent > kMaxExponent) throw std::overflow_error("exponent out of range 0..63");
    MultiIndex m = *this;
    m.bits_ &= ~(kMask << shift(var));
    m.bits_ |= static_cast<std::uint64_t>(exponent) << shift(var);
    return m;
}

MultiIndex MultiIndex::operator+(const MultiIndex& o) const {
    MultiIndex m;
    for (int v = 0; v < kMaxVars; ++v) {
        int e = (*this)[v] + o[v];
        if (e > kMaxExponent) throw std::overflow_error("exponent overflow");
        m.bits_ |= static_cast<std::uint64_t>(e) << shift(v);
    }
    return m;
}

MultiIndex MultiIndex::operator-(const MultiIndex& o) const {
    if (!divisible_by(o)) throw std::domain_error("monomial not divisible");
    return from_packed(bits_ - o.bits_);
}

bool MultiIndex::divisible_by(const MultiIndex& o) const noexcept {
    for (int v = 0; v < kMaxVars; ++v)
        if ((*this)[v] < o[v]) return false;
    return true;
}

std::vector<int> MultiIndex::exponents(int nvars) const {
    std::vector<int> e(static_cast<std::size_t>(nvars));
    for (int v = 0; v < nvars; ++v) e[static_cast<std::size_t>(v)] = (*this)[v];
    return e;
}

std::string MultiIndex::str(int nvars) const {
    std::string s;
    for (int v = 0; v < nvars; ++v) {
        int e = (*this)[v];
        if (e == 0) continue;
        if (!s.empty()) s += '*';
        s += "x" + std::to_string(v + 1);
        if (e > 1) s += "^" + std::to_string(e);
    }
    return s.empty() ? "1" : s;
}

namespace {

void enumerate(int nvars, int var, int remaining, MultiIndex cur, std::vector<MultiIndex>& out) {
    if (var == nvars - 1) {
        out.push_back(cur.with(var, remaining));
        return;
    }
    for (int e = remaining; e >= 0; --e) enumerate(nvars, var + 1, remaining - e, cur.with(var, e), out);
}

}  // namespace

std::vector<MultiIndex> monomials_of_degree(int nvars, int degree) {
    std::vector<MultiIndex> out;
    if (nvars <= 0 || degree < 0) return out;
    out.reserve(count_monomials(nvars, degree));
    enumerate(nvars, 0, degree, MultiIndex{}, out);
    return out;
}

std::size_t count_monomials(int nvars, int degree) {
    if (nvars <= 0 || degree < 0) return 0;
    // C(degree + nvars - 1, nvars - 1)
    std::size_t r = 1;
    for (int k = 1; k < nvars; ++k) r = r * static_cast<std::size_t>(degree + k) / static_cast<std::size_t>(k);
    return r;
}

}  // namespace foliation
