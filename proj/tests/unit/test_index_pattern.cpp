#include "stochtaylor/errors.hpp"
#include "stochtaylor/index_pattern.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

using namespace stochtaylor;

TEST(IndexPattern, CatalogSizesAreBellNumbers) {
    EXPECT_EQ(catalog_patterns(2).size(), 2u);
    EXPECT_EQ(catalog_patterns(3).size(), 5u);
    EXPECT_EQ(catalog_patterns(4).size(), 15u);
    EXPECT_EQ(catalog_patterns(5).size(), 52u);
    EXPECT_THROW(catalog_patterns(6), DomainError);
}

TEST(IndexPattern, CatalogStartsWithDistinctThenEqual) {
    for (int k = 2; k <= 5; ++k) {
        const auto all = catalog_patterns(k);
        EXPECT_TRUE(all[0].is_distinct());
        EXPECT_TRUE(all[1].is_all_equal());
        EXPECT_EQ(std::set<IndexPattern>(all.begin(), all.end()).size(), all.size());
    }
}

TEST(IndexPattern, LabelsRoundTrip) {
    for (int k = 2; k <= 5; ++k)
        for (const auto& p : catalog_patterns(k)) EXPECT_EQ(pattern_from_label(case_label(p)), p) << case_label(p);
    EXPECT_EQ(case_label(IndexPattern::distinct(3)), "3.1");
    EXPECT_EQ(case_label(IndexPattern::all_equal(4)), "4.2");
    EXPECT_THROW(pattern_from_label("3.9.9"), DomainError);
}

TEST(IndexPattern, FromIndicesCanonicalizesBlocks) {
    const std::vector<int> a{2, 1, 2}, b{5, 3, 5};
    EXPECT_EQ(IndexPattern::from_indices(a), IndexPattern::from_indices(b));
    EXPECT_EQ(IndexPattern::from_indices(a).str(), "{1,3}{2}");
    EXPECT_EQ(IndexPattern::from_indices(a).representative_indices(), (std::vector<int>{1, 2, 1}));
    const std::vector<int> zero{0, 1};
    EXPECT_THROW(IndexPattern::from_indices(zero), DomainError);
}

TEST(IndexPattern, ParseAcceptsEveryForm) {
    EXPECT_TRUE(IndexPattern::parse("distinct", 3).is_distinct());
    EXPECT_TRUE(IndexPattern::parse("equal", 3).is_all_equal());
    EXPECT_EQ(IndexPattern::parse("1,1,2", 3), IndexPattern(3, {{0, 1}, {2}}));
    EXPECT_EQ(IndexPattern::parse("3.3.1", 3), pattern_from_label("3.3.1"));
    EXPECT_EQ(IndexPattern::parse("3.3.1.a", 3), pattern_from_label("3.3.1"));
    EXPECT_THROW(IndexPattern::parse("1,1", 3), DomainError);
    EXPECT_THROW(IndexPattern::parse("banana", 3), DomainError);
}

TEST(IndexPattern, RejectsBadBlocks) {
    EXPECT_THROW(IndexPattern(3, {{0, 1}}), DomainError);
    EXPECT_THROW(IndexPattern(3, {{0, 1}, {1, 2}}), DomainError);
    EXPECT_THROW(IndexPattern(2, {{0}, {2}}), DomainError);
    EXPECT_THROW(IndexPattern(2, {{0, 1}, {}}), DomainError);
}

TEST(IndexPattern, GroupOrderAndPermutations) {
    for (int k = 2; k <= 5; ++k)
        for (const auto& p : catalog_patterns(k)) {
            std::uint64_t expected = 1;
            for (const auto& b : p.blocks())
                for (std::size_t f = 2; f <= b.size(); ++f) expected *= f;
            EXPECT_EQ(p.group_order(), expected);
            const auto perms = p.permutations();
            EXPECT_EQ(perms.size(), expected);
            std::set<MultiIndex> unique(perms.begin(), perms.end());
            EXPECT_EQ(unique.size(), perms.size());
            for (const auto& perm : perms)
                for (int m = 0; m < k; ++m)
                    EXPECT_EQ(p.block_of(perm[static_cast<std::size_t>(m)]), p.block_of(m)) << p.str();
        }
}

TEST(ProfileLetter, SchemeProfiles) {
    EXPECT_EQ(profile_letter(WeightProfile::parse("000")), "a");
    EXPECT_EQ(profile_letter(WeightProfile::parse("001")), "b");
    EXPECT_EQ(profile_letter(WeightProfile::parse("010")), "c");
    EXPECT_EQ(profile_letter(WeightProfile::parse("100")), "d");
    EXPECT_EQ(profile_letter(WeightProfile::parse("01")), "b");
    EXPECT_EQ(profile_letter(WeightProfile::parse("10")), "c");
    EXPECT_EQ(profile_letter(WeightProfile::parse("002")), "");
    EXPECT_EQ(full_case_label(pattern_from_label("3.3.1"), WeightProfile::parse("000")), "3.3.1.a");
}
