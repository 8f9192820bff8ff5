#pragma once

#include "stochtaylor/coeff_engine.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace stochtaylor {

/**
 * @brief Equality structure of the Wiener indices (i_1..i_k): a set partition of the
 * positions {0..k-1}. Positions in one block share a Wiener component.
 *
 * Blocks are kept in canonical order (sorted inside, ordered by smallest position), so two
 * patterns compare equal exactly when they describe the same partition.
 */
class IndexPattern {
public:
    IndexPattern() = default;
    IndexPattern(int k, std::vector<std::vector<int>> blocks);

    static IndexPattern distinct(int k);
    static IndexPattern all_equal(int k);
    /** From concrete Wiener indices, each >= 1 (zero, the time component, is rejected). */
    static IndexPattern from_indices(std::span<const int> indices);
    /**
     * Accepts "distinct", "equal", a catalog label such as "3.3.1" or "5.7.10" (an optional
     * trailing profile letter is ignored), or a comma list of Wiener indices such as "1,1,2".
     */
    static IndexPattern parse(const std::string& text, int k);

    int k() const { return k_; }
    const std::vector<std::vector<int>>& blocks() const { return blocks_; }
    bool is_distinct() const { return static_cast<int>(blocks_.size()) == k_; }
    bool is_all_equal() const { return blocks_.size() == 1; }
    int block_of(int position) const;

    /** Smallest Wiener indices realizing the pattern: 1 for the first block, 2 for the next, ... */
    std::vector<int> representative_indices() const;

    /** Order of the product of symmetric groups over the blocks. */
    std::uint64_t group_order() const;
    /** Every element of that group as a position map: (pi j)[m] = j[perm[m]]. */
    std::vector<MultiIndex> permutations() const;

    /** 1-based block notation, e.g. "{1,2}{3}". */
    std::string str() const;

    friend bool operator==(const IndexPattern&, const IndexPattern&) = default;
    friend auto operator<=>(const IndexPattern&, const IndexPattern&) = default;

private:
    int k_ = 0;
    std::vector<std::vector<int>> blocks_;
};

/** Every pattern of multiplicity k (k <= 5) in catalog order: distinct, all-equal, then families. */
std::vector<IndexPattern> catalog_patterns(int k);

/** Catalog label such as "4.5.2"; throws for k > 5. */
std::string case_label(const IndexPattern& pattern);
IndexPattern pattern_from_label(const std::string& label);

/**
 * Letter used in case labels for the twelve scheme profiles: a for all-zero weights, then
 * b, c, d for a single unit weight at the outermost, next, ... position. Empty otherwise.
 */
std::string profile_letter(const WeightProfile& profile);

/** "3.3.1.a" style label, or the bare case label when the profile has no letter. */
std::string full_case_label(const IndexPattern& pattern, const WeightProfile& profile);

}  // namespace stochtaylor
