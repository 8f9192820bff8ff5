#include "stochtaylor/errors.hpp"
#include "stochtaylor/sde_problems.hpp"
#include "stochtaylor/taylor_schemes.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace stochtaylor;

namespace {

const Scheme kSchemes[] = {Scheme::Euler, Scheme::Milstein, Scheme::T15, Scheme::T20, Scheme::T25};

StepIntegrals filled_integrals(Scheme scheme, int m, double h, Rng& rng) {
    std::normal_distribution<double> normal;
    StepIntegrals out(m, h);
    for (const auto& profile : required_profiles(scheme)) {
        const int k = WeightProfile::parse(profile).k();
        out.resize(profile, k);
        std::vector<int> idx(static_cast<std::size_t>(k), 1);
        while (true) {
            out.at(profile, idx) = normal(rng);
            int pos = 0;
            while (pos < k && idx[static_cast<std::size_t>(pos)] == m) idx[static_cast<std::size_t>(pos++)] = 1;
            if (pos == k) break;
            ++idx[static_cast<std::size_t>(pos)];
        }
    }
    return out;
}

StepIntegrals zero_integrals(Scheme scheme, int m, double h) {
    StepIntegrals out(m, h);
    for (const auto& profile : required_profiles(scheme)) out.resize(profile, WeightProfile::parse(profile).k());
    return out;
}

Eigen::MatrixXd matrix(std::initializer_list<std::initializer_list<double>> rows) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index r = 0;
    for (const auto& row : rows) {
        Eigen::Index c = 0;
        for (double v : row) out(r, c++) = v;
        ++r;
    }
    return out;
}

Eigen::VectorXd scalar(double v) { return Eigen::VectorXd::Constant(1, v); }

}  // namespace

TEST(Words, ArityAndValidity) {
    EXPECT_EQ(word_arity("a"), 0);
    EXPECT_EQ(word_arity("B"), 1);
    EXPECT_EQ(word_arity("G0LB"), 2);
    EXPECT_EQ(word_arity("G0G0G0G0B"), 5);
    EXPECT_EQ(word_arity("LLa"), 0);
    EXPECT_TRUE(is_valid_word("LG0G0B"));
    EXPECT_FALSE(is_valid_word("G0"));
    EXPECT_FALSE(is_valid_word("aB"));
    EXPECT_FALSE(is_valid_word("G1B"));
    EXPECT_THROW(word_arity("Lx"), DomainError);
}

TEST(Schemes, ParseAndOrders) {
    EXPECT_EQ(parse_scheme("milstein"), Scheme::Milstein);
    EXPECT_EQ(parse_scheme("1.0"), Scheme::Milstein);
    EXPECT_EQ(parse_scheme("1.5"), Scheme::T15);
    EXPECT_EQ(parse_scheme("t25"), Scheme::T25);
    EXPECT_THROW(parse_scheme("rk4"), DomainError);
    EXPECT_FALSE(scheme_order(Scheme::Euler).has_value());
    EXPECT_EQ(scheme_order(Scheme::T20), SchemeOrder::Order20);
}

TEST(Schemes, TermListsAreNested) {
    for (std::size_t s = 1; s < std::size(kSchemes); ++s) {
        const auto lower = scheme_terms(kSchemes[s - 1]);
        const auto higher = scheme_terms(kSchemes[s]);
        ASSERT_GT(higher.size(), lower.size());
        for (std::size_t i = 0; i < lower.size(); ++i) EXPECT_EQ(higher[i], lower[i]) << to_string(kSchemes[s]);
    }
    EXPECT_EQ(scheme_terms(Scheme::Euler).size(), 2u);
    EXPECT_EQ(scheme_terms(Scheme::Milstein).size(), 3u);
    EXPECT_EQ(scheme_terms(Scheme::T15).size(), 7u);
    EXPECT_EQ(scheme_terms(Scheme::T20).size(), 11u);
    EXPECT_EQ(scheme_terms(Scheme::T25).size(), 20u);
    const auto profiles = required_profiles(Scheme::T20);
    EXPECT_EQ(std::set<std::string>(profiles.begin(), profiles.end()),
              (std::set<std::string>{"0", "00", "1", "000", "01", "10", "0000"}));
    EXPECT_EQ(profiles.size(), 7u);
}

TEST(Schemes, HigherSchemeAddsOnlyItsNewTerms) {
    const SdeProblem problem = bilinear_2d();
    Rng rng(9);
    const Eigen::VectorXd x = problem.x0;
    for (std::size_t s = 1; s < std::size(kSchemes); ++s) {
        const StepIntegrals integrals = filled_integrals(kSchemes[s], 2, 0.1, rng);
        const Eigen::VectorXd lower = step(problem, kSchemes[s - 1], x, 0.0, integrals);
        const Eigen::VectorXd higher = step(problem, kSchemes[s], x, 0.0, integrals);
        Eigen::VectorXd added = Eigen::VectorXd::Zero(2);
        const auto all = scheme_terms(kSchemes[s]);
        for (std::size_t i = scheme_terms(kSchemes[s - 1]).size(); i < all.size(); ++i) {
            const auto& term = all[i];
            const int arity = word_arity(term.word);
            std::vector<int> idx(static_cast<std::size_t>(arity), 1);
            for (int code = 0; code < (1 << arity); ++code) {
                for (int a = 0; a < arity; ++a) idx[static_cast<std::size_t>(a)] = 1 + ((code >> a) & 1);
                double weight = 0.0;
                for (const auto& part : term.parts)
                    weight += part.factor * std::pow(0.1, part.h_power) * (part.profile.empty() ? 1.0 : integrals.get(part.profile, idx));
                added += weight * problem.eval(term.word, x, 0.0, idx);
            }
        }
        EXPECT_LT((higher - lower - added).norm(), 1e-13) << to_string(kSchemes[s]);
    }
}

TEST(Step, ZeroIntegralsGiveTheDriftStep) {
    const SdeProblem problem = bilinear_2d();
    const double h = 0.05;
    const Eigen::MatrixXd A = matrix({{-1.0, 0.5}, {0.2, -0.8}});
    const Eigen::VectorXd x = problem.x0;
    const StepIntegrals zero = zero_integrals(Scheme::T25, 2, h);
    EXPECT_LT((step(problem, Scheme::Milstein, x, 0.0, zero) - (x + h * A * x)).norm(), 1e-15);
    const Eigen::MatrixXd A2 = A * A;
    const Eigen::VectorXd expected = x + h * A * x + h * h / 2.0 * A2 * x + h * h * h / 6.0 * A2 * A * x;
    EXPECT_LT((step(problem, Scheme::T25, x, 0.0, zero) - expected).norm(), 1e-15);
}

TEST(Step, GbmMilsteinUpdate) {
    const double lambda = 0.7, mu = 0.4, h = 0.01, x = 1.3, w = 0.08;
    const SdeProblem gbm = geometric_brownian_motion(lambda, mu, 1.0, 1.0);
    StepIntegrals ints = zero_integrals(Scheme::Milstein, 1, h);
    const int one[1] = {1};
    const int one_one[2] = {1, 1};
    ints.at("0", one) = w;
    ints.at("00", one_one) = (w * w - h) / 2.0;
    const double expected = x * (1.0 + lambda * h + mu * w + mu * mu * (w * w - h) / 2.0);
    EXPECT_NEAR(step(gbm, Scheme::Milstein, scalar(x), 0.0, ints)(0), expected, 1e-15);
}

TEST(Step, GbmOrderOnePointFiveUpdate) {
    const double lambda = 0.7, mu = 0.4, h = 0.02, x = 0.9;
    const SdeProblem gbm = geometric_brownian_motion(lambda, mu, 1.0, 1.0);
    Rng rng(3);
    const StepIntegrals ints = filled_integrals(Scheme::T15, 1, h, rng);
    const int one[1] = {1};
    const int two[2] = {1, 1};
    const int three[3] = {1, 1, 1};
    const double i0 = ints.get("0", one), i1 = ints.get("1", one);
    const double i00 = ints.get("00", two), i000 = ints.get("000", three);
    // Kloeden-Platen form with dZ = h I_(0) + I_(1).
    const double dz = h * i0 + i1;
    const double expected = x * (1.0 + lambda * h + mu * i0 + mu * mu * i00 + mu * lambda * dz +
                                 lambda * mu * (h * i0 - dz) + mu * mu * mu * i000 + lambda * lambda * h * h / 2.0);
    EXPECT_NEAR(step(gbm, Scheme::T15, scalar(x), 0.0, ints)(0), expected, 1e-14);
}

TEST(Step, DeterministicLinearProblemFollowsTheTaylorPolynomial) {
    const Eigen::MatrixXd A = matrix({{0.3, -1.1}, {0.9, -0.2}});
    const SdeProblem problem = linear_problem("still", A, {Eigen::MatrixXd::Zero(2, 2)});
    Rng rng(4);
    const double h = 0.03;
    const StepContext ctx(Scheme::T25, 1, h);
    const Eigen::VectorXd x = Eigen::Vector2d(0.4, -1.5);
    const Eigen::VectorXd expected = x + h * A * x + h * h / 2.0 * A * A * x + h * h * h / 6.0 * A * A * A * x;
    EXPECT_LT((step(problem, Scheme::T25, x, 0.0, ctx.draw(rng)) - expected).norm(), 1e-15);
}

TEST(LinearProblem, WordsMatchFiniteDifferences) {
    const SdeProblem problem = bilinear_2d();
    const Eigen::MatrixXd A = matrix({{-1.0, 0.5}, {0.2, -0.8}});
    const std::vector<Eigen::MatrixXd> B{matrix({{0.2, 0.1}, {0.0, 0.3}}), matrix({{0.1, 0.0}, {0.3, 0.2}})};
    const Eigen::VectorXd x = Eigen::Vector2d(0.7, -0.3);
    const double eps = 1e-6;
    for (const auto& word : required_words(Scheme::T25)) {
        if (word == "a" || word == "B") continue;
        const bool outer_g0 = word.rfind("G0", 0) == 0;
        const std::string inner = word.substr(outer_g0 ? 2 : 1);
        const int arity = word_arity(word);
        std::vector<int> idx(static_cast<std::size_t>(arity), 1);
        for (int code = 0; code < (1 << arity); ++code) {
            for (int a = 0; a < arity; ++a) idx[static_cast<std::size_t>(a)] = 1 + ((code >> a) & 1);
            const std::span<const int> inner_idx = outer_g0 ? std::span<const int>(idx).subspan(1) : std::span<const int>(idx);
            const Eigen::VectorXd direction = outer_g0 ? Eigen::VectorXd(B[static_cast<std::size_t>(idx[0] - 1)] * x)
                                                       : Eigen::VectorXd(A * x);
            const Eigen::VectorXd fd = (problem.eval(inner, x + eps * direction, 0.0, inner_idx) -
                                        problem.eval(inner, x - eps * direction, 0.0, inner_idx)) /
                                       (2.0 * eps);
            const Eigen::VectorXd direct = problem.eval(word, x, 0.0, idx);
            EXPECT_LT((direct - fd).norm(), 1e-8) << word;
            EXPECT_LT((direct - linear_word_matrix(word, idx, A, B) * x).norm(), 1e-15) << word;
        }
    }
}

TEST(StepContext, PlansMeetTheirConditions) {
    TensorCache cache;
    const double h = 0.125;
    for (PlanPolicy policy : {PlanPolicy::Distinct, PlanPolicy::PerPattern}) {
        SchemeOptions options;
        options.policy = policy;
        options.cache = &cache;
        const StepContext ctx(Scheme::T20, 2, h, options);
        for (const auto& profile_name : required_profiles(Scheme::T20)) {
            const WeightProfile profile = WeightProfile::parse(profile_name);
            if (profile.k() == 1) continue;
            std::vector<int> idx(static_cast<std::size_t>(profile.k()), 1);
            for (int code = 0; code < (1 << profile.k()); ++code) {
                for (int a = 0; a < profile.k(); ++a) idx[static_cast<std::size_t>(a)] = 1 + ((code >> a) & 1);
                const int p = ctx.order(profile_name, idx);
                const auto pattern = IndexPattern::from_indices(idx);
                const double e = exact_error(profile, pattern, p, h, cache).value;
                EXPECT_LE(e, std::pow(h, 5) * (1 + 1e-9)) << profile_name;
                if (policy == PlanPolicy::PerPattern && p > 0)
                    EXPECT_GT(exact_error(profile, pattern, p - 1, h, cache).value, std::pow(h, 5)) << profile_name;
            }
        }
    }
}

TEST(StepContext, DistinctPolicyUsesTheSchemePlan) {
    TensorCache cache;
    SchemeOptions options;
    options.policy = PlanPolicy::Distinct;
    options.cache = &cache;
    const StepContext ctx(Scheme::T15, 2, 1.0 / 32, options);
    const int i12[2] = {1, 2}, i11[2] = {1, 1}, i121[3] = {1, 2, 1}, i1[1] = {1};
    EXPECT_EQ(ctx.order("00", i12), 128);
    EXPECT_EQ(ctx.order("00", i11), 128);
    EXPECT_EQ(ctx.order("000", i121), 4);
    EXPECT_EQ(ctx.order("1", i1), 1);
    EXPECT_EQ(ctx.panel_order(), 128);
    EXPECT_THROW(ctx.order("01", i12), DomainError);

    options.policy = PlanPolicy::PerPattern;
    const StepContext per(Scheme::T15, 2, 1.0 / 32, options);
    EXPECT_EQ(per.order("00", i12), 128);
    EXPECT_EQ(per.order("00", i11), 0);
}

TEST(Integrate, SingleStepEqualsStep) {
    const SdeProblem problem = bilinear_2d();
    const StepContext ctx(Scheme::T20, 2, 0.25);
    Rng a(17), b(17);
    const PathResult path = integrate(problem, ctx, problem.x0, 1, a, true);
    const StepIntegrals ints = ctx.draw(b);
    EXPECT_LT((path.final_state - step(problem, Scheme::T20, problem.x0, 0.0, ints)).norm(), 1e-15);
    ASSERT_EQ(path.states.size(), 2u);
    const int one[1] = {1}, two[1] = {2};
    EXPECT_DOUBLE_EQ(path.w_T(0), ints.get("0", one));
    EXPECT_DOUBLE_EQ(path.w_T(1), ints.get("0", two));
}

TEST(Integrate, DeterministicForAFixedSeed) {
    const SdeProblem problem = geometric_brownian_motion();
    const StepContext ctx(Scheme::T25, 1, 0.125);
    Rng a(5), b(5);
    EXPECT_EQ(integrate(problem, ctx, problem.x0, 8, a).final_state, integrate(problem, ctx, problem.x0, 8, b).final_state);
}

TEST(Registry, MissingWordIsReported) {
    SdeProblem sparse("sparse", 1, 1);
    const auto zero = [](const Eigen::VectorXd& x, double, std::span<const int>) { return Eigen::VectorXd::Zero(x.size()).eval(); };
    sparse.define("a", zero);
    sparse.define("B", zero);
    EXPECT_NO_THROW(check_registry(sparse, Scheme::Euler));
    try {
        check_registry(sparse, Scheme::Milstein);
        FAIL() << "missing word accepted";
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("G0B"), std::string::npos) << e.what();
    }
    EXPECT_THROW(sparse.define("Q", zero), DomainError);
    EXPECT_THROW(sparse.eval("LLa", Eigen::VectorXd::Zero(1), 0.0, {}), DomainError);
}

TEST(StrongOrder, RejectsTooFewSteps) {
    const SdeProblem gbm = geometric_brownian_motion();
    EXPECT_THROW(estimate_strong_order(gbm, Scheme::Milstein, {0.5, 0.25}), DomainError);
    EXPECT_EQ(steps_for(1.0, 0.25), 4);
    EXPECT_THROW(steps_for(1.0, 0.3), DomainError);
}

TEST(StrongOrder, GbmMilsteinSmallRun) {
    const SdeProblem gbm = geometric_brownian_motion();
    StrongOrderOptions options;
    options.paths = 2000;
    const auto r = estimate_strong_order(gbm, Scheme::Milstein, {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64}, options);
    EXPECT_TRUE(r.exact_reference);
    ASSERT_EQ(r.points.size(), 4u);
    EXPECT_NEAR(r.slope, 1.0, 0.3);
    for (const auto& pt : r.points) EXPECT_GT(pt.mean_error, 0.0);
}

TEST(StrongOrder, SelfReferenceWithoutExactSolution) {
    const SdeProblem problem = bilinear_2d();
    StrongOrderOptions options;
    options.paths = 300;
    options.reference_refinement = 8;
    const auto r = estimate_strong_order(problem, Scheme::Euler, {0.25, 0.125, 0.0625}, options);
    EXPECT_FALSE(r.exact_reference);
    EXPECT_GT(r.slope, 0.2);
    EXPECT_LT(r.ci_low(), r.ci_high());
}
