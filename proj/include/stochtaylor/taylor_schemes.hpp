#pragma once

#include "stochtaylor/integral_sampler.hpp"
#include "stochtaylor/truncation_planner.hpp"

#include <Eigen/Dense>

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace stochtaylor {

/**
 * Operator words are written outermost first, e.g. "G0LB" is G_0^{(i1)} L B_{i2}. A word is
 * a string of "G0" and "L" tokens closed by "a" or "B". Its indices are the G0 tokens in
 * order, followed by the index of B when the word ends in B.
 */
int word_arity(const std::string& word);
bool is_valid_word(const std::string& word);

class SdeProblem {
public:
    using WordFn = std::function<Eigen::VectorXd(const Eigen::VectorXd& x, double t, std::span<const int> indices)>;
    using ExactFn = std::function<Eigen::VectorXd(const Eigen::VectorXd& x0, double T, const Eigen::VectorXd& w_T)>;

    SdeProblem(std::string name, int n, int m);

    const std::string& name() const { return name_; }
    int state_dim() const { return n_; }
    int noise_dim() const { return m_; }

    /** Registers the operator-applied coefficient for a word; indices are 1-based. */
    void define(const std::string& word, WordFn fn);
    bool has(const std::string& word) const { return words_.count(word) > 0; }
    std::vector<std::string> words() const;
    Eigen::VectorXd eval(const std::string& word, const Eigen::VectorXd& x, double t, std::span<const int> indices) const;

    /** Closed-form solution at T given the Wiener endpoint, when the problem has one. */
    std::optional<ExactFn> exact;
    Eigen::VectorXd x0;
    double horizon = 1.0;

private:
    std::string name_;
    int n_;
    int m_;
    std::map<std::string, WordFn> words_;
};

enum class Scheme { Euler, Milstein, T15, T20, T25 };

Scheme parse_scheme(const std::string& text);
std::string to_string(Scheme scheme);
/** Order whose mean-square condition the scheme's truncated integrals obey; Euler has none. */
std::optional<SchemeOrder> scheme_order(Scheme scheme);

/**
 * One summand of a scheme: the word's coefficient times sum_parts factor h^{h_power} I_profile,
 * summed over all index tuples. An empty profile stands for the constant 1.
 */
struct SchemeTerm {
    struct Part {
        double factor = 1.0;
        int h_power = 0;
        std::string profile;
    };
    std::string word;
    std::vector<Part> parts;

    bool operator==(const SchemeTerm& other) const;
};

bool operator==(const SchemeTerm::Part& a, const SchemeTerm::Part& b);

std::vector<SchemeTerm> scheme_terms(Scheme scheme);
std::vector<std::string> required_words(Scheme scheme);
/** Profiles of every iterated integral the scheme samples, as strings like "0", "10". */
std::vector<std::string> required_profiles(Scheme scheme);

/** Realized integrals of one step. Values are stored per profile with index 1 varying fastest. */
class StepIntegrals {
public:
    StepIntegrals(int m, double h) : m_(m), h_(h) {}

    int noise_dim() const { return m_; }
    double h() const { return h_; }
    void resize(const std::string& profile, int k);
    double get(const std::string& profile, std::span<const int> indices) const;
    double& at(const std::string& profile, std::span<const int> indices);
    bool contains(const std::string& profile) const { return values_.count(profile) > 0; }

private:
    std::size_t offset(std::span<const int> indices) const;

    int m_;
    double h_;
    std::map<std::string, std::vector<double>> values_;
};

/** Distinct: the distinct-index order for every tuple. PerPattern: the minimal order of each tuple's own pattern. */
enum class PlanPolicy { Distinct, PerPattern };

struct SchemeOptions {
    PlanPolicy policy = PlanPolicy::PerPattern;
    double constant = 1.0;
    TensorCache* cache = nullptr;
};

/**
 * Draws every integral a scheme needs from one Gaussian panel per step, with the truncation
 * orders fixed at construction.
 */
class StepContext {
public:
    StepContext(Scheme scheme, int m, double h, const SchemeOptions& options = {});

    Scheme scheme() const { return scheme_; }
    double h() const { return h_; }
    int noise_dim() const { return m_; }
    int panel_order() const { return pmax_; }
    const TruncationPlan& plan() const { return plan_; }
    /** Truncation order used for one integral; k = 1 integrals are exact at order l. */
    int order(const std::string& profile, std::span<const int> indices) const;

    StepIntegrals evaluate(const GaussianPanel& panel) const;
    StepIntegrals draw(Rng& rng) const;

private:
    struct Slot {
        std::string profile;
        int k = 0;
        std::vector<int> orders;
        std::vector<ItoSampler> samplers;
    };

    Scheme scheme_;
    int m_;
    double h_;
    int pmax_ = 2;
    TruncationPlan plan_;
    std::vector<Slot> slots_;
};

/** One step of the scheme from (x, t) with the given realized integrals. */
Eigen::VectorXd step(const SdeProblem& problem, Scheme scheme, const Eigen::VectorXd& x, double t,
                     const StepIntegrals& integrals);

/** Throws DomainError naming the first word the problem lacks. */
void check_registry(const SdeProblem& problem, Scheme scheme);

struct PathResult {
    Eigen::VectorXd final_state;
    /** Wiener endpoint, the sum of the per-step I_(0). */
    Eigen::VectorXd w_T;
    /** States at every grid point when requested, starting with x0. */
    std::vector<Eigen::VectorXd> states;
};

/** Integrates on the uniform grid t_p = p h, p = 0..steps, with a fresh panel per step. */
PathResult integrate(const SdeProblem& problem, const StepContext& ctx, const Eigen::VectorXd& x0, int steps, Rng& rng,
                     bool keep_states = false);

/** Number of uniform steps of size h covering [0, T]; throws unless T / h is an integer. */
int steps_for(double T, double h);

struct StrongOrderPoint {
    double h = 0.0;
    double mean_error = 0.0;
    double std_error = 0.0;
};

struct StrongOrderResult {
    Scheme scheme = Scheme::Milstein;
    std::vector<StrongOrderPoint> points;
    double slope = 0.0;
    double slope_std_error = 0.0;
    double intercept = 0.0;
    /** True when the reference was the problem's exact solution. */
    bool exact_reference = true;

    double ci_low() const { return slope - 1.96 * slope_std_error; }
    double ci_high() const { return slope + 1.96 * slope_std_error; }
};

struct StrongOrderOptions {
    std::uint64_t paths = 20'000;
    std::uint64_t seed = 1;
    SchemeOptions scheme;
    /** Fine-step factor for the self reference used when no exact solution is known. */
    int reference_refinement = 64;
};

/**
 * Least-squares slope of log E|x_T - y_T| against log h. The reference is the exact solution
 * when the problem has one; otherwise the same scheme at h_min / refinement driven by the same
 * Wiener increments, with its higher-order panel entries drawn independently.
 */
StrongOrderResult estimate_strong_order(const SdeProblem& problem, Scheme scheme, const std::vector<double>& steps,
                                        const StrongOrderOptions& options = {});

}  // namespace stochtaylor
