#include "stochtaylor/error_calculus.hpp"

#include "stochtaylor/errors.hpp"
#include "stochtaylor/summation.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <unordered_map>

namespace stochtaylor {

namespace {

constexpr std::uint64_t kDenseLookupLimit = 4'000'000;

int max_index(const MultiIndex& j, int k) { return *std::max_element(j.begin(), j.begin() + k); }

// Coefficients at h = 1 for all nonzero entries inside {0..pmax}^k, addressable by multi-index.
class HatCoefficients {
public:
    HatCoefficients(const CoeffTensor& tensor, int pmax) : k_(tensor.k()), side_(static_cast<std::uint64_t>(pmax) + 1) {
        dense_ = box_size(k_, pmax) <= kDenseLookupLimit;
        if (dense_) values_.assign(box_size(k_, pmax), 0.0);
        for (const auto& e : tensor.nonzeros()) {
            if (max_index(e.j, k_) > pmax) continue;
            const double v = coefficient_scale(tensor.profile(), std::span<const int>(e.j.data(), k_)) * e.value.get_d();
            entries_.push_back({&e, v});
            if (dense_)
                values_[flat(e.j)] = v;
            else
                sparse_.emplace(flat(e.j), v);
        }
    }

    double operator()(const MultiIndex& j) const {
        if (dense_) return values_[flat(j)];
        auto it = sparse_.find(flat(j));
        return it == sparse_.end() ? 0.0 : it->second;
    }

    struct Item {
        const CoeffTensor::Entry* entry;
        double value;
    };
    const std::vector<Item>& entries() const { return entries_; }

private:
    std::uint64_t flat(const MultiIndex& j) const {
        std::uint64_t f = 0;
        for (int m = 0; m < k_; ++m) f = f * side_ + static_cast<std::uint64_t>(j[static_cast<std::size_t>(m)]);
        return f;
    }

    int k_;
    std::uint64_t side_;
    bool dense_ = true;
    std::vector<double> values_;
    std::unordered_map<std::uint64_t, double> sparse_;
    std::vector<Item> entries_;
};

MultiIndex permuted(const MultiIndex& j, const MultiIndex& perm, int k) {
    MultiIndex out{};
    for (int m = 0; m < k; ++m) out[static_cast<std::size_t>(m)] = j[static_cast<std::size_t>(perm[static_cast<std::size_t>(m)])];
    return out;
}

void check_args(const CoeffTensor& tensor, const IndexPattern& pattern, int p) {
    if (pattern.k() != tensor.k()) throw DomainError("pattern multiplicity does not match the weight profile");
    if (p < 0) throw DomainError("truncation order must be non-negative");
    if (p > tensor.cap())
        throw CapExceeded("truncation order " + std::to_string(p) + " exceeds the tensor cap " +
                          std::to_string(tensor.cap()));
}

// Turns per-shell contributions into the running Parseval-type defect r - sum_{q <= p} shell[q].
std::vector<double> defect_curve(double r, const std::vector<CompensatedSum>& shells) {
    std::vector<double> out(shells.size());
    CompensatedSum acc;
    acc.add(r);
    for (std::size_t q = 0; q < shells.size(); ++q) {
        acc.add(-shells[q].value());
        out[q] = acc.value();
    }
    return out;
}

}  // namespace

std::vector<double> normalized_error_curve(const CoeffTensor& tensor, const IndexPattern& pattern, int pmax) {
    check_args(tensor, pattern, pmax);
    const int k = tensor.k();
    const HatCoefficients hat(tensor, pmax);
    const auto perms = pattern.permutations();
    std::vector<CompensatedSum> shells(static_cast<std::size_t>(pmax) + 1);
    for (const auto& item : hat.entries()) {
        const MultiIndex& j = item.entry->j;
        double s = 0.0;
        if (perms.size() == 1) {
            s = item.value;
        } else {
            CompensatedSum inner;
            for (const auto& perm : perms) inner.add(hat(permuted(j, perm, k)));
            s = inner.value();
        }
        shells[static_cast<std::size_t>(max_index(j, k))].add(item.value * s);
    }
    auto curve = defect_curve(exact_norm(tensor.profile()).value.get_d(), shells);
    // Exactly vanishing errors can round to tiny negatives.
    for (double& e : curve) e = std::max(e, 0.0);
    return curve;
}

Rational normalized_error_exact(const CoeffTensor& tensor, const IndexPattern& pattern, int p) {
    check_args(tensor, pattern, p);
    const int k = tensor.k();
    const auto& profile = tensor.profile();
    const auto perms = pattern.permutations();
    Rational acc(0);
    for (const auto& e : tensor.nonzeros()) {
        if (max_index(e.j, k) > p) continue;
        Rational s(0);
        for (const auto& perm : perms) {
            const MultiIndex pj = permuted(e.j, perm, k);
            if (const Rational* v = tensor.find(std::span<const int>(pj.data(), k))) s += *v;
        }
        mpz_class weight = 1;
        for (int m = 0; m < k; ++m) weight *= 2 * e.j[static_cast<std::size_t>(m)] + 1;
        acc += Rational(weight) * e.value * s;
    }
    mpz_class denom;
    mpz_ui_pow_ui(denom.get_mpz_t(), 2, static_cast<unsigned long>(2 * (k + profile.weight_sum())));
    return exact_norm(profile).value - acc / Rational(denom);
}

ErrorResult exact_error(const CoeffTensor& tensor, const IndexPattern& pattern, int p, double h) {
    if (!(h > 0.0)) throw DomainError("exact_error: step must be positive");
    const auto curve = normalized_error_curve(tensor, pattern, p);
    ErrorResult r;
    r.normalized = curve.back();
    r.value = r.normalized * std::pow(h, tensor.profile().norm_exponent());
    r.profile = tensor.profile();
    r.pattern = pattern;
    r.p = p;
    r.h = h;
    return r;
}

ErrorResult exact_error(const WeightProfile& profile, const IndexPattern& pattern, int p, double h, TensorCache& cache) {
    if (p < 0) throw DomainError("truncation order must be non-negative");
    return exact_error(*cache.get(profile, p), pattern, p, h);
}

std::vector<double> normalized_kfact_curve(const CoeffTensor& tensor, int pmax) {
    if (pmax < 0 || pmax > tensor.cap()) throw CapExceeded("k! bound: order outside the tensor cap");
    const int k = tensor.k();
    const HatCoefficients hat(tensor, pmax);
    std::vector<CompensatedSum> shells(static_cast<std::size_t>(pmax) + 1);
    for (const auto& item : hat.entries())
        shells[static_cast<std::size_t>(max_index(item.entry->j, k))].add(item.value * item.value);
    auto curve = defect_curve(exact_norm(tensor.profile()).value.get_d(), shells);
    double factorial = 1.0;
    for (int f = 2; f <= k; ++f) factorial *= f;
    for (auto& v : curve) v = factorial * std::max(v, 0.0);
    return curve;
}

double error_bound_kfact(const WeightProfile& profile, int p, double h, TensorCache& cache) {
    if (!(h > 0.0)) throw DomainError("error_bound_kfact: step must be positive");
    if (p < 0) throw DomainError("truncation order must be non-negative");
    const auto curve = normalized_kfact_curve(*cache.get(profile, p), p);
    return curve.back() * std::pow(h, profile.norm_exponent());
}

}  // namespace stochtaylor
