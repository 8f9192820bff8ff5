#include "stochtaylor/integral_sampler.hpp"

#include "stochtaylor/errors.hpp"

#include <algorithm>
#include <cmath>

namespace stochtaylor {

IntegralSpec::IntegralSpec(WeightProfile p, std::vector<int> i, double step)
    : profile(std::move(p)), wiener(std::move(i)), h(step) {
    if (static_cast<int>(wiener.size()) != profile.k())
        throw DomainError("integral spec: number of Wiener indices differs from the multiplicity");
    for (int v : wiener)
        if (v < 1) throw DomainError("integral spec: Wiener indices must be >= 1");
    if (!(h > 0.0)) throw DomainError("integral spec: step must be positive");
}

int IntegralSpec::components() const { return wiener.empty() ? 0 : *std::max_element(wiener.begin(), wiener.end()); }

GaussianPanel::GaussianPanel(int m, int pmax) : z_(Eigen::MatrixXd::Zero(m, pmax + 1)) {
    if (m < 1 || pmax < 0) throw DomainError("Gaussian panel needs m >= 1 and pmax >= 0");
}

GaussianPanel GaussianPanel::sample(int m, int pmax, Rng& rng) {
    GaussianPanel panel(m, pmax);
    std::normal_distribution<double> normal;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= pmax; ++j) panel.z_(i, j) = normal(rng);
    return panel;
}

namespace {

void pair_up(std::vector<int>& free, int r, std::vector<std::pair<int, int>>& pairs, std::vector<PairPartition>& out,
             int k) {
    if (r == 0) {
        PairPartition part;
        part.pairs = pairs;
        std::vector<bool> used(static_cast<std::size_t>(k), false);
        for (const auto& [a, b] : pairs) used[static_cast<std::size_t>(a)] = used[static_cast<std::size_t>(b)] = true;
        for (int m = 0; m < k; ++m)
            if (!used[static_cast<std::size_t>(m)]) part.singles.push_back(m);
        out.push_back(std::move(part));
        return;
    }
    // Pairs are emitted in increasing order of their first element.
    const int last_first = pairs.empty() ? -1 : pairs.back().first;
    for (std::size_t a = 0; a < free.size(); ++a) {
        const int first = free[a];
        if (first <= last_first) continue;
        for (std::size_t b = a + 1; b < free.size(); ++b) {
            const int second = free[b];
            std::vector<int> rest;
            for (int v : free)
                if (v != first && v != second) rest.push_back(v);
            pairs.emplace_back(first, second);
            pair_up(rest, r - 1, pairs, out, k);
            pairs.pop_back();
        }
    }
}

}  // namespace

std::vector<PairPartition> enumerate_pair_partitions(int k, int r) {
    if (k < 0 || r < 0 || 2 * r > k) throw DomainError("enumerate_pair_partitions: need 0 <= 2r <= k");
    std::vector<int> free(static_cast<std::size_t>(k));
    for (int m = 0; m < k; ++m) free[static_cast<std::size_t>(m)] = m;
    std::vector<std::pair<int, int>> pairs;
    std::vector<PairPartition> out;
    pair_up(free, r, pairs, out, k);
    return out;
}

PreparedCoefficients::PreparedCoefficients(const CoeffTensor& tensor, int cap, double step)
    : profile(tensor.profile()), p(cap), h(step) {
    if (cap < 0 || cap > tensor.cap()) throw CapExceeded("prepared coefficients: order outside the tensor cap");
    if (!(step > 0.0)) throw DomainError("prepared coefficients: step must be positive");
    const int k = tensor.k();
    const double power = std::pow(step, 0.5 * k + profile.weight_sum());
    for (const auto& e : tensor.nonzeros()) {
        if (*std::max_element(e.j.begin(), e.j.begin() + k) > cap) continue;
        const double c = coefficient_scale(profile, std::span<const int>(e.j.data(), k)) * power * e.value.get_d();
        terms.push_back({e.j, c});
    }
}

ItoSampler::ItoSampler(std::shared_ptr<const PreparedCoefficients> coeffs, std::vector<int> wiener)
    : coeffs_(std::move(coeffs)), wiener_(std::move(wiener)) {
    const int k = coeffs_->profile.k();
    if (static_cast<int>(wiener_.size()) != k) throw DomainError("sampler: Wiener index count differs from k");
    for (int v : wiener_)
        if (v < 1) throw DomainError("sampler: Wiener indices must be >= 1");
    for (int r = 1; 2 * r <= k; ++r) {
        for (auto& part : enumerate_pair_partitions(k, r)) {
            const bool active = std::all_of(part.pairs.begin(), part.pairs.end(), [&](const auto& pr) {
                return wiener_[static_cast<std::size_t>(pr.first)] == wiener_[static_cast<std::size_t>(pr.second)];
            });
            if (active) corrections_.push_back({r % 2 == 0 ? 1.0 : -1.0, std::move(part)});
        }
    }
}

void ItoSampler::check_panel(const GaussianPanel& panel) const {
    if (panel.pmax() < coeffs_->p) throw DomainError("panel does not cover the truncation order");
    for (int v : wiener_)
        if (v > panel.components()) throw DomainError("panel lacks Wiener component " + std::to_string(v));
}

double ItoSampler::ito(const GaussianPanel& panel) const {
    check_panel(panel);
    const auto& z = panel.matrix();
    const std::size_t k = wiener_.size();
    double total = 0.0;
    for (const auto& term : coeffs_->terms) {
        double prod = 1.0;
        for (std::size_t m = 0; m < k; ++m) prod *= z(wiener_[m] - 1, term.j[m]);
        double value = prod;
        for (const auto& corr : corrections_) {
            bool hit = true;
            for (const auto& [a, b] : corr.partition.pairs) hit = hit && term.j[static_cast<std::size_t>(a)] == term.j[static_cast<std::size_t>(b)];
            if (!hit) continue;
            double singles = corr.sign;
            for (int s : corr.partition.singles)
                singles *= z(wiener_[static_cast<std::size_t>(s)] - 1, term.j[static_cast<std::size_t>(s)]);
            value += singles;
        }
        total += term.c * value;
    }
    return total;
}

double ItoSampler::stratonovich(const GaussianPanel& panel) const {
    check_panel(panel);
    const auto& z = panel.matrix();
    const std::size_t k = wiener_.size();
    double total = 0.0;
    for (const auto& term : coeffs_->terms) {
        double prod = term.c;
        for (std::size_t m = 0; m < k; ++m) prod *= z(wiener_[m] - 1, term.j[m]);
        total += prod;
    }
    return total;
}

namespace {

ItoSampler make_sampler(const IntegralSpec& spec, int p, TensorCache& cache) {
    if (p < 0) throw DomainError("truncation order must be non-negative");
    const auto tensor = cache.get(spec.profile, p);
    return ItoSampler(std::make_shared<const PreparedCoefficients>(*tensor, p, spec.h), spec.wiener);
}

}  // namespace

double sample_ito(const IntegralSpec& spec, int p, const GaussianPanel& panel, TensorCache& cache) {
    return make_sampler(spec, p, cache).ito(panel);
}

double sample_stratonovich(const IntegralSpec& spec, int p, const GaussianPanel& panel, TensorCache& cache) {
    if (spec.k() > 6) throw DomainError("Stratonovich sampler supports k <= 6");
    return make_sampler(spec, p, cache).stratonovich(panel);
}

}  // namespace stochtaylor
