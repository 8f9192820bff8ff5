#pragma once

#include "stochtaylor/legendre.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace stochtaylor {

inline constexpr int kMaxMultiplicity = 6;

/**
 * @brief Weight exponents (l_1..l_k) of psi_m(tau) = (t - tau)^{l_m}.
 *
 * Position 1 is the innermost integration variable, matching the order of the Wiener
 * indices (i_1..i_k).
 */
struct WeightProfile {
    std::vector<int> l;

    WeightProfile() = default;
    explicit WeightProfile(std::vector<int> exponents);

    int k() const { return static_cast<int>(l.size()); }
    int weight_sum() const;
    /** Exponent n with I_k = r * h^n, i.e. k + 2 * sum(l). */
    int norm_exponent() const { return k() + 2 * weight_sum(); }

    /** Compact form "001"; multi-digit exponents are comma separated. */
    std::string str() const;
    /** Accepts "0,0,1" or "001". */
    static WeightProfile parse(const std::string& text);
    static WeightProfile zeros(int k) { return WeightProfile(std::vector<int>(static_cast<std::size_t>(k), 0)); }

    friend bool operator==(const WeightProfile&, const WeightProfile&) = default;
    friend auto operator<=>(const WeightProfile&, const WeightProfile&) = default;
};

using MultiIndex = std::array<int, kMaxMultiplicity>;

/** Normalized coefficient by literal innermost-to-outermost integration in the power basis. */
Rational bar_coefficient(const WeightProfile& profile, std::span<const int> j);

/** prod sqrt(2 j_m + 1) * 2^{-(k + sum l)}; the scaled coefficient is this times barC times h^{k/2 + sum l}. */
double coefficient_scale(const WeightProfile& profile, std::span<const int> j);

/** Real coefficient of zeta_{j_1}...zeta_{j_k} for step h = T - t. */
double scaled_coefficient(const WeightProfile& profile, std::span<const int> j, double h);

struct ExactNorm {
    WeightProfile profile;
    Rational value;

    int exponent() const { return profile.norm_exponent(); }
    double at(double h) const;
};

ExactNorm exact_norm(const WeightProfile& profile);

/**
 * @brief Exact normalized coefficients over the box {0..p}^k for one weight profile.
 *
 * Only nonzero entries are stored, sorted lexicographically in (j_1, ..., j_k); every other
 * multi-index of the box has the exact value zero.
 */
class CoeffTensor {
public:
    struct Entry {
        MultiIndex j{};
        Rational value;
    };

    CoeffTensor() = default;
    CoeffTensor(WeightProfile profile, int cap, std::vector<Entry> nonzeros);

    const WeightProfile& profile() const { return profile_; }
    int k() const { return profile_.k(); }
    int cap() const { return cap_; }
    const std::vector<Entry>& nonzeros() const { return entries_; }
    /** (p + 1)^k. */
    std::uint64_t box_size() const;

    /** Value at j; throws DomainError if j lies outside the box. */
    Rational at(std::span<const int> j) const;
    const Rational* find(std::span<const int> j) const;

    /** Sub-box {0..p}^k of this tensor. */
    CoeffTensor restrict_to(int p) const;

    friend bool operator==(const CoeffTensor& a, const CoeffTensor& b);

private:
    WeightProfile profile_;
    int cap_ = 0;
    std::vector<Entry> entries_;
};

struct BuildOptions {
    std::uint64_t max_entries = 100'000'000;
};

std::uint64_t box_size(int k, int p);

/** Builds the tensor through exact Legendre-series integration. */
CoeffTensor build_tensor(const WeightProfile& profile, int p, const BuildOptions& options = {});

bool lex_less(const MultiIndex& a, const MultiIndex& b, int k);

}  // namespace stochtaylor
