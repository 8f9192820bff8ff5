#include "stochtaylor/error_calculus.hpp"
#include "stochtaylor/errors.hpp"
#include "stochtaylor/integral_sampler.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace stochtaylor;

namespace {

std::uint64_t factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

}  // namespace

TEST(PairPartitions, CountsAndDisjointness) {
    for (int k = 0; k <= 6; ++k)
        for (int r = 0; 2 * r <= k; ++r) {
            const auto parts = enumerate_pair_partitions(k, r);
            const std::uint64_t expected = factorial(k) / ((1ULL << r) * factorial(r) * factorial(k - 2 * r));
            EXPECT_EQ(parts.size(), expected) << "k = " << k << " r = " << r;
            std::set<std::vector<std::pair<int, int>>> unique;
            for (const auto& part : parts) {
                std::set<int> seen(part.singles.begin(), part.singles.end());
                for (const auto& [a, b] : part.pairs) {
                    EXPECT_LT(a, b);
                    seen.insert(a);
                    seen.insert(b);
                }
                EXPECT_EQ(seen.size(), static_cast<std::size_t>(k));
                EXPECT_EQ(part.singles.size() + 2 * part.pairs.size(), static_cast<std::size_t>(k));
                unique.insert(part.pairs);
            }
            EXPECT_EQ(unique.size(), parts.size());
        }
    EXPECT_THROW(enumerate_pair_partitions(3, 2), DomainError);
}

TEST(SampleIto, SingleIntegrals) {
    Rng rng(1);
    const double h = 0.3;
    for (int trial = 0; trial < 10; ++trial) {
        const GaussianPanel z = GaussianPanel::sample(2, 4, rng);
        EXPECT_NEAR(sample_ito(IntegralSpec(WeightProfile::zeros(1), {2}, h), 3, z), std::sqrt(h) * z(2, 0), 1e-14);
        const double weighted = -std::pow(h, 1.5) / 2.0 * (z(1, 0) + z(1, 1) / std::sqrt(3.0));
        EXPECT_NEAR(sample_ito(IntegralSpec(WeightProfile::parse("1"), {1}, h), 4, z), weighted, 1e-14);
    }
}

TEST(SampleIto, RepeatedIndexIntegralsAreExactPolynomialsOfTheIncrement) {
    Rng rng(2);
    const double h = 0.7;
    for (int trial = 0; trial < 10; ++trial) {
        const GaussianPanel z = GaussianPanel::sample(1, 6, rng);
        const double w = std::sqrt(h) * z(1, 0);
        for (int p = 0; p <= 6; ++p) {
            EXPECT_NEAR(sample_ito(IntegralSpec(WeightProfile::zeros(2), {1, 1}, h), p, z), (w * w - h) / 2.0, 1e-12);
            EXPECT_NEAR(sample_ito(IntegralSpec(WeightProfile::zeros(3), {1, 1, 1}, h), p, z),
                        (w * w * w - 3.0 * h * w) / 6.0, 1e-12);
        }
    }
}

TEST(SampleStratonovich, DiffersFromItoByTheDiagonal) {
    Rng rng(3);
    const double h = 0.4;
    const WeightProfile profile = WeightProfile::zeros(2);
    for (int trial = 0; trial < 5; ++trial) {
        const GaussianPanel z = GaussianPanel::sample(2, 5, rng);
        for (int p = 0; p <= 5; ++p) {
            const IntegralSpec distinct(profile, {1, 2}, h);
            EXPECT_DOUBLE_EQ(sample_stratonovich(distinct, p, z), sample_ito(distinct, p, z));
            const IntegralSpec equal(profile, {2, 2}, h);
            double diagonal = 0.0;
            for (int j = 0; j <= p; ++j) {
                const std::vector<int> jj{j, j};
                diagonal += scaled_coefficient(profile, jj, h);
            }
            EXPECT_NEAR(sample_stratonovich(equal, p, z) - sample_ito(equal, p, z), diagonal, 1e-13);
        }
    }
}

TEST(SampleIto, MomentsMatchExpansion) {
    Rng rng(4);
    const double h = 1.0;
    const int p = 3;
    const int n = 40000;
    for (const auto& wiener : {std::vector<int>{1, 2, 3}, std::vector<int>{1, 1, 2}, std::vector<int>{2, 1, 2}}) {
        const IntegralSpec spec(WeightProfile::zeros(3), wiener, h);
        double s1 = 0.0, s2 = 0.0, s4 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double v = sample_ito(spec, p, GaussianPanel::sample(3, p, rng));
            s1 += v;
            s2 += v * v;
            s4 += v * v * v * v;
        }
        const double mean = s1 / n, second = s2 / n;
        const double second_se = std::sqrt((s4 / n - second * second) / n);
        // Second moment of the truncated integral is I - E.
        const double expected = exact_norm(spec.profile).value.get_d() -
                                exact_error(spec.profile, IndexPattern::from_indices(wiener), p, h).value;
        const double sd = std::sqrt(second);
        EXPECT_NEAR(mean, 0.0, 5.0 * sd / std::sqrt(n));
        EXPECT_NEAR(second, expected, 5.0 * second_se);
    }
}

TEST(SampleIto, RejectsBadInputs) {
    Rng rng(5);
    const GaussianPanel z = GaussianPanel::sample(1, 2, rng);
    EXPECT_THROW(sample_ito(IntegralSpec(WeightProfile::zeros(2), {1, 2}, 1.0), 1, z), DomainError);
    EXPECT_THROW(sample_ito(IntegralSpec(WeightProfile::zeros(2), {1, 1}, 1.0), 3, z), DomainError);
    EXPECT_THROW(IntegralSpec(WeightProfile::zeros(2), {0, 1}, 1.0), DomainError);
    EXPECT_THROW(IntegralSpec(WeightProfile::zeros(2), {1}, 1.0), DomainError);
    EXPECT_THROW(IntegralSpec(WeightProfile::zeros(2), {1, 1}, 0.0), DomainError);
    EXPECT_THROW(GaussianPanel(0, 2), DomainError);
}
