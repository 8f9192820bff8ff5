#include "stochtaylor/legendre.hpp"

#include "stochtaylor/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <sstream>

namespace stochtaylor {

RationalPoly::RationalPoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { canonicalize(); }

RationalPoly RationalPoly::constant(const Rational& c) { return RationalPoly({c}); }

RationalPoly RationalPoly::x() { return RationalPoly({Rational(0), Rational(1)}); }

void RationalPoly::canonicalize() {
    for (auto& c : coeffs_) c.canonicalize();
    while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) coeffs_.pop_back();
}

Rational RationalPoly::coeff(std::size_t power) const {
    return power < coeffs_.size() ? coeffs_[power] : Rational(0);
}

Rational RationalPoly::operator()(const Rational& x) const {
    Rational acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

double RationalPoly::eval(double x) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + it->get_d();
    return acc;
}

RationalPoly& RationalPoly::operator+=(const RationalPoly& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    canonicalize();
    return *this;
}

RationalPoly& RationalPoly::operator-=(const RationalPoly& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    canonicalize();
    return *this;
}

RationalPoly& RationalPoly::operator*=(const Rational& c) {
    for (auto& v : coeffs_) v *= c;
    canonicalize();
    return *this;
}

RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> out(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
        if (sgn(a.coeffs_[i]) == 0) continue;
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return RationalPoly(std::move(out));
}

RationalPoly RationalPoly::reflect() const {
    auto out = coeffs_;
    for (std::size_t i = 1; i < out.size(); i += 2) out[i] = -out[i];
    return RationalPoly(std::move(out));
}

std::string RationalPoly::str() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (sgn(coeffs_[i]) == 0) continue;
        if (!first) os << " + ";
        os << coeffs_[i].get_str();
        if (i >= 1) os << "*x";
        if (i >= 2) os << "^" << i;
        first = false;
    }
    return os.str();
}

const RationalPoly& legendre_poly(int j) {
    if (j < 0) throw DomainError("legendre_poly: degree must be non-negative");
    static std::deque<RationalPoly> table{RationalPoly::constant(1), RationalPoly::x()};
    static std::shared_mutex mutex;
    {
        std::shared_lock lock(mutex);
        if (static_cast<std::size_t>(j) < table.size()) return table[static_cast<std::size_t>(j)];
    }
    std::unique_lock lock(mutex);
    const auto xp = RationalPoly::x();
    while (table.size() <= static_cast<std::size_t>(j)) {
        const int n = static_cast<int>(table.size()) - 1;
        RationalPoly next = xp * table[n] * Rational(2 * n + 1, n + 1);
        next -= table[n - 1] * Rational(n, n + 1);
        table.push_back(std::move(next));
    }
    return table[static_cast<std::size_t>(j)];
}

RationalPoly poly_antiderivative(const RationalPoly& p) {
    if (p.is_zero()) return {};
    std::vector<Rational> out(p.coeffs().size() + 1);
    for (std::size_t i = 0; i < p.coeffs().size(); ++i) out[i + 1] = p.coeffs()[i] / Rational(static_cast<long>(i + 1));
    return RationalPoly(std::move(out));
}

Rational definite_integral(const RationalPoly& p, const Rational& a, const Rational& b) {
    const auto F = poly_antiderivative(p);
    return F(b) - F(a);
}

RationalPoly one_plus_x_pow(int n) {
    if (n < 0) throw DomainError("one_plus_x_pow: negative exponent");
    std::vector<Rational> c(static_cast<std::size_t>(n) + 1);
    mpz_class binom = 1;
    for (int i = 0; i <= n; ++i) {
        c[static_cast<std::size_t>(i)] = binom;
        binom = binom * (n - i) / (i + 1);
    }
    return RationalPoly(std::move(c));
}

double legendre_p(int j, double x) {
    if (j < 0) throw DomainError("legendre_p: degree must be non-negative");
    if (j == 0) return 1.0;
    double prev = 1.0;
    double cur = x;
    for (int n = 1; n < j; ++n) {
        const double next = ((2.0 * n + 1.0) * x * cur - n * prev) / (n + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

namespace {

double to_reference(double s, double t, double T) {
    if (!(T > t)) throw DomainError("eval_phi: requires T > t");
    if (s < t || s > T) throw DomainError("eval_phi: s lies outside [t, T]");
    const double x = (s - 0.5 * (T + t)) * 2.0 / (T - t);
    return std::clamp(x, -1.0, 1.0);
}

// Antiderivative of P_j vanishing at -1.
double legendre_integral_from_minus_one(int j, double x) {
    if (j == 0) return x + 1.0;
    return (legendre_p(j + 1, x) - legendre_p(j - 1, x)) / (2.0 * j + 1.0);
}

}  // namespace

double eval_phi(int j, double s, double t, double T) {
    const double x = to_reference(s, t, T);
    return std::sqrt((2.0 * j + 1.0) / (T - t)) * legendre_p(j, x);
}

double eval_phi_power_basis(int j, double s, double t, double T) {
    const double x = to_reference(s, t, T);
    return std::sqrt((2.0 * j + 1.0) / (T - t)) * legendre_poly(j).eval(x);
}

double phi_cell_average(int j, double a, double b, double t, double T) {
    const double xa = to_reference(a, t, T);
    const double xb = to_reference(b, t, T);
    if (!(b > a)) throw DomainError("phi_cell_average: empty cell");
    const double h = T - t;
    const double integral = std::sqrt((2.0 * j + 1.0) / h) * 0.5 * h *
                            (legendre_integral_from_minus_one(j, xb) - legendre_integral_from_minus_one(j, xa));
    return integral / (b - a);
}

BasisFn::BasisFn(int j, double t0, double t1) : degree(j), t(t0), T(t1) {
    if (j < 0) throw DomainError("BasisFn: degree must be non-negative");
    if (!(t1 > t0)) throw DomainError("BasisFn: requires T > t");
}

// ---------------------------------------------------------------------------------------

LegendreSeries LegendreSeries::basis(int n) {
    LegendreSeries s;
    s.lo_ = n;
    s.c_.emplace_back(1);
    return s;
}

Rational LegendreSeries::coeff(int n) const {
    const auto* p = coeff_ptr(n);
    return p ? *p : Rational(0);
}

const Rational* LegendreSeries::coeff_ptr(int n) const {
    if (n < lo_ || n > hi()) return nullptr;
    return &c_[static_cast<std::size_t>(n - lo_)];
}

void LegendreSeries::add_term(int n, const Rational& v) {
    if (c_.empty()) {
        lo_ = n;
        c_.push_back(v);
        return;
    }
    if (n < lo_) {
        c_.insert(c_.begin(), static_cast<std::size_t>(lo_ - n), Rational(0));
        lo_ = n;
    } else if (n > hi()) {
        c_.resize(static_cast<std::size_t>(n - lo_ + 1));
    }
    c_[static_cast<std::size_t>(n - lo_)] += v;
}

void LegendreSeries::trim() {
    while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
    std::size_t lead = 0;
    while (lead < c_.size() && sgn(c_[lead]) == 0) ++lead;
    if (lead > 0) {
        c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(lead));
        lo_ += static_cast<int>(lead);
    }
    if (c_.empty()) lo_ = 0;
}

LegendreSeries LegendreSeries::times_x() const {
    LegendreSeries out;
    if (c_.empty()) return out;
    out.lo_ = std::max(lo_ - 1, 0);
    out.c_.assign(static_cast<std::size_t>(hi() + 1 - out.lo_ + 1), Rational(0));
    for (int n = lo_; n <= hi(); ++n) {
        const Rational& v = c_[static_cast<std::size_t>(n - lo_)];
        if (sgn(v) == 0) continue;
        const Rational scaled = v / (2 * n + 1);
        out.c_[static_cast<std::size_t>(n + 1 - out.lo_)] += scaled * (n + 1);
        if (n > 0) out.c_[static_cast<std::size_t>(n - 1 - out.lo_)] += scaled * n;
    }
    out.trim();
    return out;
}

LegendreSeries LegendreSeries::times_one_plus_x_pow(int n) const {
    LegendreSeries out = *this;
    for (int i = 0; i < n; ++i) {
        LegendreSeries xf = out.times_x();
        out += xf;
    }
    return out;
}

LegendreSeries LegendreSeries::integrate_from_minus_one() const {
    LegendreSeries out;
    if (c_.empty()) return out;
    out.lo_ = std::max(lo_ - 1, 0);
    out.c_.assign(static_cast<std::size_t>(hi() + 1 - out.lo_ + 1), Rational(0));
    for (int n = lo_; n <= hi(); ++n) {
        const Rational& v = c_[static_cast<std::size_t>(n - lo_)];
        if (sgn(v) == 0) continue;
        if (n == 0) {
            out.c_[static_cast<std::size_t>(0 - out.lo_)] += v;
            out.c_[static_cast<std::size_t>(1 - out.lo_)] += v;
            continue;
        }
        const Rational scaled = v / (2 * n + 1);
        out.c_[static_cast<std::size_t>(n + 1 - out.lo_)] += scaled;
        out.c_[static_cast<std::size_t>(n - 1 - out.lo_)] -= scaled;
    }
    out.trim();
    return out;
}

std::vector<LegendreSeries> LegendreSeries::legendre_products(int p) const {
    std::vector<LegendreSeries> g;
    g.reserve(static_cast<std::size_t>(p) + 1);
    g.push_back(*this);
    if (p >= 1) g.push_back(times_x());
    for (int j = 1; j < p; ++j) {
        LegendreSeries next = g[static_cast<std::size_t>(j)].times_x();
        next *= Rational(2 * j + 1, j + 1);
        LegendreSeries back = g[static_cast<std::size_t>(j - 1)];
        back *= Rational(j, j + 1);
        g.push_back(next - back);
    }
    return g;
}

LegendreSeries& LegendreSeries::operator+=(const LegendreSeries& o) {
    for (int n = o.lo_; n <= o.hi(); ++n) {
        const Rational& v = o.c_[static_cast<std::size_t>(n - o.lo_)];
        if (sgn(v) != 0) add_term(n, v);
    }
    trim();
    return *this;
}

LegendreSeries& LegendreSeries::operator*=(const Rational& c) {
    for (auto& v : c_) v *= c;
    trim();
    return *this;
}

LegendreSeries operator-(const LegendreSeries& a, const LegendreSeries& b) {
    LegendreSeries out = a;
    LegendreSeries nb = b;
    nb *= Rational(-1);
    out += nb;
    return out;
}

RationalPoly LegendreSeries::to_power_basis() const {
    RationalPoly out;
    for (int n = lo_; n <= hi(); ++n) out += legendre_poly(n) * c_[static_cast<std::size_t>(n - lo_)];
    return out;
}

}  // namespace stochtaylor
