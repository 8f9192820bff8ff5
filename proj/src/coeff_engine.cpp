#include "stochtaylor/coeff_engine.hpp"

#include "stochtaylor/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace stochtaylor {

WeightProfile::WeightProfile(std::vector<int> exponents) : l(std::move(exponents)) {
    if (l.empty() || static_cast<int>(l.size()) > kMaxMultiplicity)
        throw DomainError("weight profile must have 1.." + std::to_string(kMaxMultiplicity) + " entries");
    for (int v : l)
        if (v < 0) throw DomainError("weight exponents must be non-negative");
}

int WeightProfile::weight_sum() const { return std::accumulate(l.begin(), l.end(), 0); }

std::string WeightProfile::str() const {
    const bool single_digits = std::all_of(l.begin(), l.end(), [](int v) { return v < 10; });
    std::string out;
    for (std::size_t i = 0; i < l.size(); ++i) {
        if (!single_digits && i > 0) out += ',';
        out += std::to_string(l[i]);
    }
    return out;
}

WeightProfile WeightProfile::parse(const std::string& text) {
    std::vector<int> values;
    if (text.find(',') != std::string::npos) {
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                std::size_t used = 0;
                values.push_back(std::stoi(item, &used));
                if (used != item.size()) throw std::invalid_argument(item);
            } catch (const std::exception&) {
                throw DomainError("cannot parse weight profile '" + text + "'");
            }
        }
    } else {
        for (char c : text) {
            if (c < '0' || c > '9') throw DomainError("cannot parse weight profile '" + text + "'");
            values.push_back(c - '0');
        }
    }
    return WeightProfile(std::move(values));
}

namespace {

void check_index(const WeightProfile& profile, std::span<const int> j) {
    if (static_cast<int>(j.size()) != profile.k())
        throw DomainError("multi-index length does not match the weight profile");
    for (int v : j)
        if (v < 0) throw DomainError("multi-index entries must be non-negative");
}

int sign_of_weights(const WeightProfile& profile) { return profile.weight_sum() % 2 == 0 ? 1 : -1; }

}  // namespace

Rational bar_coefficient(const WeightProfile& profile, std::span<const int> j) {
    check_index(profile, j);
    RationalPoly inner = RationalPoly::constant(1);
    for (int m = 0; m < profile.k(); ++m) {
        const RationalPoly integrand = legendre_poly(j[m]) * one_plus_x_pow(profile.l[m]) * inner;
        const RationalPoly F = poly_antiderivative(integrand);
        inner = F - RationalPoly::constant(F(Rational(-1)));
    }
    Rational value = inner(Rational(1));
    if (sign_of_weights(profile) < 0) value = -value;
    return value;
}

double coefficient_scale(const WeightProfile& profile, std::span<const int> j) {
    check_index(profile, j);
    double s = std::ldexp(1.0, -(profile.k() + profile.weight_sum()));
    for (int v : j) s *= std::sqrt(2.0 * v + 1.0);
    return s;
}

double scaled_coefficient(const WeightProfile& profile, std::span<const int> j, double h) {
    if (!(h > 0.0)) throw DomainError("scaled_coefficient: step must be positive");
    const double power = 0.5 * profile.k() + profile.weight_sum();
    return coefficient_scale(profile, j) * std::pow(h, power) * bar_coefficient(profile, j).get_d();
}

double ExactNorm::at(double h) const { return value.get_d() * std::pow(h, exponent()); }

ExactNorm exact_norm(const WeightProfile& profile) {
    RationalPoly inner = RationalPoly::constant(1);
    for (int m = 0; m < profile.k(); ++m) {
        const RationalPoly F = poly_antiderivative(one_plus_x_pow(2 * profile.l[m]) * inner);
        inner = F - RationalPoly::constant(F(Rational(-1)));
    }
    mpz_class denom;
    mpz_ui_pow_ui(denom.get_mpz_t(), 2, static_cast<unsigned long>(profile.norm_exponent()));
    Rational value = inner(Rational(1)) / Rational(denom);
    return ExactNorm{profile, value};
}

// ---------------------------------------------------------------------------------------

bool lex_less(const MultiIndex& a, const MultiIndex& b, int k) {
    for (int m = 0; m < k; ++m) {
        if (a[m] != b[m]) return a[m] < b[m];
    }
    return false;
}

CoeffTensor::CoeffTensor(WeightProfile profile, int cap, std::vector<Entry> nonzeros)
    : profile_(std::move(profile)), cap_(cap), entries_(std::move(nonzeros)) {
    const int k = profile_.k();
    entries_.erase(std::remove_if(entries_.begin(), entries_.end(), [](const Entry& e) { return sgn(e.value) == 0; }),
                   entries_.end());
    if (!std::is_sorted(entries_.begin(), entries_.end(),
                        [k](const Entry& a, const Entry& b) { return lex_less(a.j, b.j, k); }))
        std::sort(entries_.begin(), entries_.end(),
                  [k](const Entry& a, const Entry& b) { return lex_less(a.j, b.j, k); });
}

std::uint64_t box_size(int k, int p) {
    std::uint64_t n = 1;
    for (int m = 0; m < k; ++m) {
        const auto side = static_cast<std::uint64_t>(p) + 1;
        if (n > std::numeric_limits<std::uint64_t>::max() / side) return std::numeric_limits<std::uint64_t>::max();
        n *= side;
    }
    return n;
}

std::uint64_t CoeffTensor::box_size() const { return stochtaylor::box_size(k(), cap_); }

const Rational* CoeffTensor::find(std::span<const int> j) const {
    const int k = this->k();
    if (static_cast<int>(j.size()) != k) throw DomainError("multi-index length does not match the tensor");
    MultiIndex key{};
    for (int m = 0; m < k; ++m) {
        if (j[m] < 0 || j[m] > cap_) throw DomainError("multi-index outside the tensor box");
        key[m] = j[m];
    }
    auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                               [k](const Entry& e, const MultiIndex& x) { return lex_less(e.j, x, k); });
    if (it != entries_.end() && !lex_less(key, it->j, k)) return &it->value;
    return nullptr;
}

Rational CoeffTensor::at(std::span<const int> j) const {
    const Rational* v = find(j);
    return v ? *v : Rational(0);
}

CoeffTensor CoeffTensor::restrict_to(int p) const {
    if (p < 0) throw DomainError("restrict_to: negative cap");
    if (p > cap_) throw CapExceeded("restrict_to: requested cap exceeds the tensor cap");
    std::vector<Entry> sub;
    for (const auto& e : entries_) {
        bool inside = true;
        for (int m = 0; m < k(); ++m) inside = inside && e.j[m] <= p;
        if (inside) sub.push_back(e);
    }
    return CoeffTensor(profile_, p, std::move(sub));
}

bool operator==(const CoeffTensor& a, const CoeffTensor& b) {
    if (a.profile_ != b.profile_ || a.cap_ != b.cap_ || a.entries_.size() != b.entries_.size()) return false;
    for (std::size_t i = 0; i < a.entries_.size(); ++i) {
        if (a.entries_[i].j != b.entries_[i].j || a.entries_[i].value != b.entries_[i].value) return false;
    }
    return true;
}

namespace {

struct TensorBuilder {
    const WeightProfile& profile;
    int p;
    bool negate;
    std::vector<CoeffTensor::Entry> out;
    MultiIndex j{};

    void descend(int m, const LegendreSeries& inner) {
        const int k = profile.k();
        if (m == k - 1) {
            const LegendreSeries H = inner.times_one_plus_x_pow(profile.l[static_cast<std::size_t>(m)]);
            if (H.is_zero()) return;
            const int hi = std::min(H.hi(), p);
            for (int jk = H.lo(); jk <= hi; ++jk) {
                const Rational* c = H.coeff_ptr(jk);
                if (c == nullptr || sgn(*c) == 0) continue;
                j[static_cast<std::size_t>(m)] = jk;
                Rational v = *c * Rational(2, 2 * jk + 1);
                if (negate) v = -v;
                out.push_back({j, std::move(v)});
            }
            return;
        }
        const auto products = inner.legendre_products(p);
        for (int jm = 0; jm <= p; ++jm) {
            LegendreSeries next = products[static_cast<std::size_t>(jm)]
                                      .times_one_plus_x_pow(profile.l[static_cast<std::size_t>(m)])
                                      .integrate_from_minus_one();
            if (next.is_zero()) continue;
            j[static_cast<std::size_t>(m)] = jm;
            descend(m + 1, next);
        }
    }
};

}  // namespace

CoeffTensor build_tensor(const WeightProfile& profile, int p, const BuildOptions& options) {
    if (p < 0) throw DomainError("build_tensor: cap must be non-negative");
    if (profile.k() < 1) throw DomainError("build_tensor: empty weight profile");
    const auto n = box_size(profile.k(), p);
    if (n > options.max_entries)
        throw CapExceeded("build_tensor: box of " + std::to_string(n) + " entries exceeds the ceiling of " +
                          std::to_string(options.max_entries));
    TensorBuilder builder{profile, p, sign_of_weights(profile) < 0, {}, {}};
    builder.descend(0, LegendreSeries::basis(0));
    return CoeffTensor(profile, p, std::move(builder.out));
}

}  // namespace stochtaylor
