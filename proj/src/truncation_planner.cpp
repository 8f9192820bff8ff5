#include "stochtaylor/truncation_planner.hpp"

#include "stochtaylor/errors.hpp"

#include <algorithm>
#include <cmath>

namespace stochtaylor {

void Condition::validate() const {
    if (exponent < 3 || exponent > 6) throw DomainError("condition exponent must lie in 3..6");
    if (!(constant > 0.0)) throw DomainError("condition constant must be positive");
}

int default_ceiling(int k) { return k <= 2 ? 10'000 : 100; }

namespace {

Rational exact_power(const Rational& base, int e) {
    Rational out(1);
    const Rational b = e >= 0 ? base : Rational(1) / base;
    for (int i = 0; i < std::abs(e); ++i) out *= b;
    return out;
}

int next_cap(int k, int cap) {
    if (k <= 3) return cap * 2;
    return cap + std::max(2, cap / 2);
}

int initial_cap(int k) { return k <= 2 ? 16 : 8; }

using CurveFn = std::function<std::vector<double>(const CoeffTensor&, int)>;
using ExactFn = std::function<Rational(const CoeffTensor&, int)>;

int search_order(const WeightProfile& profile, const Condition& cond, double h, TensorCache& cache,
                 const PlannerOptions& options, const CurveFn& curve_fn, const ExactFn& exact_fn) {
    cond.validate();
    if (!(h > 0.0)) throw DomainError("step must be positive");
    const int ceiling = options.ceiling >= 0 ? options.ceiling : default_ceiling(profile.k());
    int cap = std::min(initial_cap(profile.k()), ceiling);
    while (true) {
        const auto tensor = cache.get(profile, cap);
        const int scan = std::min(tensor->cap(), ceiling);
        const auto curve = curve_fn(*tensor, scan);
        for (int p = 0; p <= scan; ++p) {
            if (meets_condition(curve[static_cast<std::size_t>(p)], cond, h, profile.norm_exponent(),
                                [&] { return exact_fn(*tensor, p); }))
                return p;
        }
        if (scan >= ceiling)
            throw CapExceeded("no order up to the ceiling " + std::to_string(ceiling) + " meets the condition for profile " +
                              profile.str());
        cap = std::min(next_cap(profile.k(), scan), ceiling);
    }
}

}  // namespace

bool meets_condition(double normalized, const Condition& cond, double h, int norm_exponent,
                     const std::function<Rational()>& exact_normalized) {
    const double threshold = cond.constant * std::pow(h, cond.exponent - norm_exponent);
    if (std::abs(normalized - threshold) > 1e-9 * threshold) return cond.strict ? normalized < threshold : normalized <= threshold;
    const Rational exact_threshold = Rational(cond.constant) * exact_power(Rational(h), cond.exponent - norm_exponent);
    const Rational value = exact_normalized();
    return cond.strict ? value < exact_threshold : value <= exact_threshold;
}

int minimal_order(const WeightProfile& profile, const IndexPattern& pattern, const Condition& cond, double h,
                  TensorCache& cache, const PlannerOptions& options) {
    if (pattern.k() != profile.k()) throw DomainError("pattern multiplicity does not match the weight profile");
    return search_order(
        profile, cond, h, cache, options,
        [&](const CoeffTensor& t, int pmax) { return normalized_error_curve(t, pattern, pmax); },
        [&](const CoeffTensor& t, int p) { return normalized_error_exact(t, pattern, p); });
}

int minimal_order_kfact(const WeightProfile& profile, const Condition& cond, double h, TensorCache& cache,
                        const PlannerOptions& options) {
    mpz_class factorial = 1;
    for (int f = 2; f <= profile.k(); ++f) factorial *= f;
    const auto distinct = IndexPattern::distinct(profile.k());
    return search_order(
        profile, cond, h, cache, options, [&](const CoeffTensor& t, int pmax) { return normalized_kfact_curve(t, pmax); },
        [&](const CoeffTensor& t, int p) { return Rational(factorial) * normalized_error_exact(t, distinct, p); });
}

// ---------------------------------------------------------------------------------------

bool HypothesisReport::all_dominated() const {
    return std::all_of(entries.begin(), entries.end(), [](const HypothesisEntry& e) { return e.dominated; });
}

std::vector<std::string> HypothesisReport::violations() const {
    std::vector<std::string> out;
    for (const auto& e : entries)
        if (!e.dominated) out.push_back(e.label);
    return out;
}

HypothesisReport check_hypothesis(const WeightProfile& profile, const Condition& cond, double h, TensorCache& cache) {
    if (profile.k() < 2 || profile.k() > 5) throw DomainError("check_hypothesis: multiplicity must lie in 2..5");
    HypothesisReport report;
    report.profile = profile;
    report.condition = cond;
    report.h = h;
    report.distinct_q = minimal_order(profile, IndexPattern::distinct(profile.k()), cond, h, cache);
    const auto tensor = cache.get(profile, report.distinct_q);
    const double threshold = cond.constant * std::pow(h, cond.exponent - profile.norm_exponent());
    for (const auto& pattern : catalog_patterns(profile.k())) {
        if (pattern.is_distinct()) continue;
        HypothesisEntry e;
        e.pattern = pattern;
        e.label = full_case_label(pattern, profile);
        e.q = minimal_order(profile, pattern, cond, h, cache);
        e.dominated = e.q <= report.distinct_q;
        e.error_at_distinct_q = std::max(normalized_error_curve(*tensor, pattern, report.distinct_q).back(), 0.0);
        e.exceeds = cond.strict ? e.error_at_distinct_q >= threshold : e.error_at_distinct_q > threshold;
        report.entries.push_back(std::move(e));
    }
    return report;
}

// ---------------------------------------------------------------------------------------

SchemeOrder parse_scheme_order(const std::string& text) {
    if (text == "1.0" || text == "1" || text == "milstein") return SchemeOrder::Order10;
    if (text == "1.5" || text == "t15") return SchemeOrder::Order15;
    if (text == "2.0" || text == "2" || text == "t20") return SchemeOrder::Order20;
    if (text == "2.5" || text == "t25") return SchemeOrder::Order25;
    throw DomainError("unknown scheme order '" + text + "' (expected 1.0, 1.5, 2.0 or 2.5)");
}

std::string to_string(SchemeOrder order) {
    switch (order) {
        case SchemeOrder::Order10: return "1.0";
        case SchemeOrder::Order15: return "1.5";
        case SchemeOrder::Order20: return "2.0";
        case SchemeOrder::Order25: return "2.5";
    }
    return "?";
}

const PlanItem* TruncationPlan::find(const WeightProfile& profile) const {
    for (const auto& item : items)
        if (item.profile == profile) return &item;
    return nullptr;
}

int TruncationPlan::order_for(const WeightProfile& profile) const {
    if (const auto* item = find(profile)) return item->order;
    throw DomainError("the order " + to_string(scheme) + " plan has no entry for I_(" + profile.str() + ")");
}

TruncationPlan scheme_plan(SchemeOrder order, double h, double constant, TensorCache& cache) {
    if (!(constant > 0.0)) throw DomainError("scheme_plan: constant must be positive");
    if (!(h > 0.0)) throw DomainError("scheme_plan: step must be positive");
    struct Wanted {
        const char* name;
        const char* profile;
        SchemeOrder from;
    };
    static const Wanted wanted[] = {
        {"q", "00", SchemeOrder::Order10},       {"q1", "000", SchemeOrder::Order15},
        {"q2(01)", "01", SchemeOrder::Order20},  {"q2(10)", "10", SchemeOrder::Order20},
        {"q3", "0000", SchemeOrder::Order20},    {"q4", "00000", SchemeOrder::Order25},
        {"q5", "001", SchemeOrder::Order25},     {"q6", "010", SchemeOrder::Order25},
        {"q7", "100", SchemeOrder::Order25},
    };
    const int exponent = 3 + static_cast<int>(order);
    TruncationPlan plan;
    plan.scheme = order;
    plan.h = h;
    plan.constant = constant;
    for (const auto& w : wanted) {
        if (static_cast<int>(w.from) > static_cast<int>(order)) continue;
        PlanItem item;
        item.name = w.name;
        item.profile = WeightProfile::parse(w.profile);
        item.condition = Condition{exponent, constant, false};
        item.order = minimal_order(item.profile, IndexPattern::distinct(item.profile.k()), item.condition, h, cache);
        plan.items.push_back(std::move(item));
    }
    return plan;
}

}  // namespace stochtaylor
