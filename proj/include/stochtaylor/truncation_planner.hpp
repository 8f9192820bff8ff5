#pragma once

#include "stochtaylor/error_calculus.hpp"

#include <functional>
#include <string>
#include <vector>

namespace stochtaylor {

/** Mean-square condition E <= C h^{exponent} (or < when strict). */
struct Condition {
    int exponent = 4;
    double constant = 1.0;
    bool strict = false;

    void validate() const;
};

struct PlannerOptions {
    /** Largest admissible order; -1 selects 10^4 for k <= 2 and 100 otherwise. */
    int ceiling = -1;
};

int default_ceiling(int k);

/**
 * True when a normalized error (E / h^n, n = k + 2 sum l) meets the condition. Values
 * within 1e-9 relative of the threshold are settled by the exact rational
 * comparison supplied by exact_normalized.
 */
bool meets_condition(double normalized, const Condition& cond, double h, int norm_exponent,
                     const std::function<Rational()>& exact_normalized);

/** Smallest p with exact_error(p) meeting the condition. Throws CapExceeded past the ceiling. */
int minimal_order(const WeightProfile& profile, const IndexPattern& pattern, const Condition& cond, double h,
                  TensorCache& cache = default_tensor_cache(), const PlannerOptions& options = {});

/** Smallest p with the k!-factor bound meeting the condition. */
int minimal_order_kfact(const WeightProfile& profile, const Condition& cond, double h,
                        TensorCache& cache = default_tensor_cache(), const PlannerOptions& options = {});

struct HypothesisEntry {
    IndexPattern pattern;
    std::string label;
    int q = 0;
    /** q <= q(distinct). */
    bool dominated = true;
    /** Normalized error of this pattern at the distinct-case order. */
    double error_at_distinct_q = 0.0;
    /** That error breaks the condition. */
    bool exceeds = false;
};

struct HypothesisReport {
    WeightProfile profile;
    Condition condition;
    double h = 0.0;
    int distinct_q = 0;
    std::vector<HypothesisEntry> entries;

    bool all_dominated() const;
    std::vector<std::string> violations() const;
};

/** Compares the distinct-case order against every other pattern of the profile's multiplicity. */
HypothesisReport check_hypothesis(const WeightProfile& profile, const Condition& cond, double h,
                                  TensorCache& cache = default_tensor_cache());

enum class SchemeOrder { Order10, Order15, Order20, Order25 };

SchemeOrder parse_scheme_order(const std::string& text);
std::string to_string(SchemeOrder order);

struct PlanItem {
    std::string name;
    WeightProfile profile;
    Condition condition;
    int order = 0;
};

struct TruncationPlan {
    SchemeOrder scheme = SchemeOrder::Order10;
    double h = 0.0;
    double constant = 1.0;
    std::vector<PlanItem> items;

    /** Order planned for a profile; throws DomainError if the scheme does not use it. */
    int order_for(const WeightProfile& profile) const;
    const PlanItem* find(const WeightProfile& profile) const;
};

/**
 * Orders for every truncated integral a scheme uses, each chosen from the distinct-index
 * error under exponent r + 1 (3 for order 1.0 up to 6 for order 2.5).
 */
TruncationPlan scheme_plan(SchemeOrder order, double h, double constant = 1.0,
                           TensorCache& cache = default_tensor_cache());

}  // namespace stochtaylor
