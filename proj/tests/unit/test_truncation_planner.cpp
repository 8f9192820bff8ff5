#include "stochtaylor/errors.hpp"
#include "stochtaylor/truncation_planner.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace stochtaylor;

namespace {

Condition cond(int exponent, double constant = 1.0, bool strict = false) { return Condition{exponent, constant, strict}; }

// ceil((h^-(e-2)/4 - 1)/2) clamped at 0, in exact arithmetic on the binary value of h.
int closed_form_order_00(double h, int exponent) {
    Rational inv = 1;
    for (int i = 0; i < exponent - 2; ++i) inv /= Rational(h);
    const Rational x = (inv / 4 - 1) / 2;
    mpz_class c;
    mpz_cdiv_q(c.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return std::max(0, static_cast<int>(c.get_si()));
}

}  // namespace

TEST(MinimalOrder, ReferenceValues) {
    TensorCache cache;
    const auto distinct2 = IndexPattern::distinct(2);
    EXPECT_EQ(minimal_order(WeightProfile::zeros(2), distinct2, cond(4), 0.125, cache), 8);
    EXPECT_EQ(minimal_order(WeightProfile::zeros(3), IndexPattern::distinct(3), cond(4), 0.011, cache), 12);
    EXPECT_EQ(minimal_order(WeightProfile::zeros(3), IndexPattern::distinct(3), cond(4), 0.0035, cache), 36);
    EXPECT_EQ(minimal_order(WeightProfile::zeros(4), IndexPattern::distinct(4), cond(5), 0.0040, cache), 16);
    EXPECT_EQ(minimal_order(WeightProfile::parse("01"), distinct2, cond(5), 0.010, cache), 4);
    EXPECT_EQ(minimal_order(WeightProfile::parse("01"), IndexPattern::all_equal(2), cond(5), 0.010, cache), 1);
    EXPECT_EQ(minimal_order(WeightProfile::parse("10"), distinct2, cond(5), 0.0025, cache), 16);
}

TEST(MinimalOrder, MilsteinColumns) {
    TensorCache cache;
    const auto pattern = IndexPattern::distinct(2);
    EXPECT_EQ(minimal_order(WeightProfile::zeros(2), pattern, cond(3), 1.0 / 16, cache), 2);
    EXPECT_EQ(minimal_order(WeightProfile::zeros(2), pattern, cond(3), 1.0 / 256, cache), 32);
    EXPECT_EQ(minimal_order(WeightProfile::zeros(2), pattern, cond(3), 1.0 / 4096, cache), 512);
}

TEST(MinimalOrder, BoundaryCellDependsOnStrictness) {
    TensorCache cache;
    const auto pattern = IndexPattern::distinct(2);
    EXPECT_EQ(minimal_order(WeightProfile::zeros(2), pattern, cond(4), 0.5, cache), 0);
    EXPECT_EQ(minimal_order(WeightProfile::zeros(2), pattern, cond(4, 1.0, true), 0.5, cache), 1);
}

TEST(MinimalOrder, MatchesClosedFormForDistinctPair) {
    TensorCache cache;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> logh(std::log(1e-3), std::log(0.5));
    for (int trial = 0; trial < 20; ++trial) {
        const int exponent = 3 + static_cast<int>(rng() % 2);
        const double h = std::exp(logh(rng));
        const int expected = closed_form_order_00(h, exponent);
        if (expected > 4000) continue;
        EXPECT_EQ(minimal_order(WeightProfile::zeros(2), IndexPattern::distinct(2), cond(exponent), h, cache), expected)
            << "h = " << h << " exponent = " << exponent;
    }
}

TEST(MinimalOrder, IsMinimal) {
    TensorCache cache;
    for (const char* text : {"000", "001", "0000"}) {
        const WeightProfile profile = WeightProfile::parse(text);
        for (const auto& pattern : catalog_patterns(profile.k())) {
            const Condition c = cond(profile.k() == 3 ? 4 : 5);
            const double h = 0.011;
            const int q = minimal_order(profile, pattern, c, h, cache);
            const double threshold = std::pow(h, c.exponent - profile.norm_exponent());
            EXPECT_LE(exact_error(profile, pattern, q, h, cache).normalized, threshold * (1 + 1e-9));
            if (q > 0) EXPECT_GT(exact_error(profile, pattern, q - 1, h, cache).normalized, threshold * (1 - 1e-9));
        }
    }
}

TEST(MinimalOrder, CeilingAndConditionChecks) {
    TensorCache cache;
    PlannerOptions tight;
    tight.ceiling = 10;
    EXPECT_THROW(minimal_order(WeightProfile::zeros(2), IndexPattern::distinct(2), cond(4), 1.0 / 256, cache, tight),
                 CapExceeded);
    EXPECT_THROW(minimal_order(WeightProfile::zeros(2), IndexPattern::distinct(2), cond(7), 0.1, cache), DomainError);
    EXPECT_THROW(minimal_order(WeightProfile::zeros(2), IndexPattern::distinct(2), cond(4, 0.0), 0.1, cache),
                 DomainError);
    EXPECT_EQ(default_ceiling(2), 10'000);
    EXPECT_EQ(default_ceiling(3), 100);
}

TEST(MeetsCondition, ExactTieBreak) {
    const auto exactly = [] { return Rational(1, 4); };
    EXPECT_TRUE(meets_condition(0.25, cond(4), 0.5, 2, exactly));
    EXPECT_FALSE(meets_condition(0.25, cond(4, 1.0, true), 0.5, 2, exactly));
    const auto above = [] { return Rational(Rational(1, 4) + Rational("1/1000000000000")); };
    EXPECT_FALSE(meets_condition(0.25, cond(4), 0.5, 2, above));
}

TEST(KfactOrder, NeverBelowExactOrder) {
    TensorCache cache;
    for (double h : {1.0 / 8, 1.0 / 32, 1.0 / 64}) {
        const int p = minimal_order(WeightProfile::zeros(3), IndexPattern::distinct(3), cond(4), h, cache);
        const int pk = minimal_order_kfact(WeightProfile::zeros(3), cond(4), h, cache);
        EXPECT_GE(pk, p) << h;
    }
    EXPECT_EQ(minimal_order(WeightProfile::zeros(3), IndexPattern::distinct(3), cond(4), 1.0 / 64, cache), 8);
    EXPECT_EQ(minimal_order_kfact(WeightProfile::zeros(3), cond(4), 1.0 / 64, cache), 48);
}

TEST(CheckHypothesis, RecordsTheSingleViolation) {
    TensorCache cache;
    const auto report = check_hypothesis(WeightProfile::zeros(3), cond(4), 0.0025, cache);
    EXPECT_EQ(report.distinct_q, 50);
    EXPECT_FALSE(report.all_dominated());
    ASSERT_EQ(report.violations().size(), 1u);
    EXPECT_EQ(report.violations()[0], "3.3.3.a");
    for (const auto& e : report.entries)
        if (e.label == "3.3.3.a") {
            EXPECT_EQ(e.q, 51);
            EXPECT_TRUE(e.exceeds);
        }
}

TEST(CheckHypothesis, DominatedCases) {
    TensorCache cache;
    const auto k2 = check_hypothesis(WeightProfile::parse("01"), cond(5), 0.005, cache);
    EXPECT_EQ(k2.distinct_q, 8);
    EXPECT_TRUE(k2.all_dominated());
    const auto k5 = check_hypothesis(WeightProfile::zeros(5), cond(6), 0.011, cache);
    EXPECT_EQ(k5.distinct_q, 0);
    EXPECT_TRUE(k5.all_dominated());
    EXPECT_EQ(k5.entries.size(), 51u);
}

TEST(SchemePlan, ReferenceColumns) {
    TensorCache cache;
    const auto p15 = scheme_plan(SchemeOrder::Order15, 1.0 / 32, 1.0, cache);
    EXPECT_EQ(p15.order_for(WeightProfile::zeros(2)), 128);
    EXPECT_EQ(p15.order_for(WeightProfile::zeros(3)), 4);
    EXPECT_THROW(p15.order_for(WeightProfile::parse("01")), DomainError);

    const auto p20 = scheme_plan(SchemeOrder::Order20, 0.25, 1.0, cache);
    EXPECT_EQ(p20.order_for(WeightProfile::zeros(2)), 8);
    EXPECT_EQ(p20.order_for(WeightProfile::zeros(3)), 2);
    EXPECT_EQ(p20.order_for(WeightProfile::parse("01")), 0);
    EXPECT_EQ(p20.order_for(WeightProfile::parse("10")), 0);
    EXPECT_EQ(p20.order_for(WeightProfile::zeros(4)), 0);

    const auto p25 = scheme_plan(SchemeOrder::Order25, std::pow(2.0, -2.5), 1.0, cache);
    EXPECT_EQ(p25.order_for(WeightProfile::zeros(2)), 128);
    EXPECT_EQ(p25.order_for(WeightProfile::zeros(3)), 23);
    EXPECT_EQ(p25.order_for(WeightProfile::parse("01")), 2);
    EXPECT_EQ(p25.order_for(WeightProfile::parse("10")), 2);
    EXPECT_EQ(p25.order_for(WeightProfile::zeros(4)), 2);
    for (const char* text : {"00000", "001", "010", "100"}) EXPECT_EQ(p25.order_for(WeightProfile::parse(text)), 0);
    EXPECT_EQ(p25.items.size(), 9u);
}

TEST(SchemePlan, OrdersParse) {
    EXPECT_EQ(parse_scheme_order("1.0"), SchemeOrder::Order10);
    EXPECT_EQ(parse_scheme_order("2.5"), SchemeOrder::Order25);
    EXPECT_EQ(to_string(SchemeOrder::Order15), "1.5");
    EXPECT_THROW(parse_scheme_order("3.0"), DomainError);
    EXPECT_THROW(scheme_plan(SchemeOrder::Order10, 0.1, -1.0), DomainError);
}
