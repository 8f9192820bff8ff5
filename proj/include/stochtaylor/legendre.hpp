#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <vector>

namespace stochtaylor {

using Rational = mpq_class;

/**
 * @brief Univariate polynomial with exact rational coefficients, stored in the power basis.
 *
 * Kept in canonical form: no trailing zero coefficients, so the zero polynomial has no
 * coefficients at all. gmpxx keeps every rational in lowest terms with positive denominator.
 */
class RationalPoly {
public:
    RationalPoly() = default;
    explicit RationalPoly(std::vector<Rational> coeffs);
    static RationalPoly constant(const Rational& c);
    static RationalPoly x();

    /** Degree of the polynomial, -1 for the zero polynomial. */
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<Rational>& coeffs() const { return coeffs_; }
    Rational coeff(std::size_t power) const;

    Rational operator()(const Rational& x) const;
    double eval(double x) const;

    RationalPoly& operator+=(const RationalPoly& o);
    RationalPoly& operator-=(const RationalPoly& o);
    RationalPoly& operator*=(const Rational& c);
    friend RationalPoly operator+(RationalPoly a, const RationalPoly& b) { return a += b; }
    friend RationalPoly operator-(RationalPoly a, const RationalPoly& b) { return a -= b; }
    friend RationalPoly operator*(RationalPoly a, const Rational& c) { return a *= c; }
    friend RationalPoly operator*(const RationalPoly& a, const RationalPoly& b);
    friend bool operator==(const RationalPoly& a, const RationalPoly& b) { return a.coeffs_ == b.coeffs_; }

    /** p(-x). */
    RationalPoly reflect() const;
    std::string str() const;

private:
    void canonicalize();
    std::vector<Rational> coeffs_;
};

/** Exact Legendre polynomial P_j in the power basis. Memoized; practical ceiling j <= 200. */
const RationalPoly& legendre_poly(int j);

/** Antiderivative with zero constant term. */
RationalPoly poly_antiderivative(const RationalPoly& p);

/** Exact integral of p over [a, b]. */
Rational definite_integral(const RationalPoly& p, const Rational& a, const Rational& b);

/** (1 + x)^n in the power basis. */
RationalPoly one_plus_x_pow(int n);

/** P_j(x) in double precision by the three-term recurrence. */
double legendre_p(int j, double x);

/**
 * @brief sqrt((2j+1)/(T-t)) * P_j((s - (T+t)/2) * 2/(T-t)), the j-th orthonormal Legendre
 * function on [t, T]. Throws DomainError when T <= t or s lies outside [t, T].
 */
double eval_phi(int j, double s, double t, double T);

/** Same as eval_phi but evaluates P_j from the exact power-basis polynomial. */
double eval_phi_power_basis(int j, double s, double t, double T);

/** Mean of phi_j over [a, b] within [t, T], computed from the exact antiderivative of P_j. */
double phi_cell_average(int j, double a, double b, double t, double T);

struct BasisFn {
    int degree = 0;
    double t = 0.0;
    double T = 1.0;

    BasisFn(int j, double t0, double t1);
    double operator()(double s) const { return eval_phi(degree, s, t, T); }
};

/**
 * @brief Finite Legendre series sum_n c_n P_n(x) with exact rational coefficients.
 *
 * Only the window [lo, lo + size) is stored; everything outside is zero. Used to carry the
 * partially integrated kernel through the simplex integration without leaving the
 * Legendre basis.
 */
class LegendreSeries {
public:
    LegendreSeries() = default;
    /** The single term P_n. */
    static LegendreSeries basis(int n);

    bool is_zero() const { return c_.empty(); }
    int lo() const { return lo_; }
    int hi() const { return lo_ + static_cast<int>(c_.size()) - 1; }
    /** Coefficient of P_n (zero outside the stored window). */
    Rational coeff(int n) const;
    const Rational* coeff_ptr(int n) const;

    /** x * f. */
    LegendreSeries times_x() const;
    /** (1 + x)^n * f. */
    LegendreSeries times_one_plus_x_pow(int n) const;
    /** F(x) = integral of f from -1 to x. */
    LegendreSeries integrate_from_minus_one() const;
    /** Integral of f over [-1, 1]. */
    Rational integral() const { return coeff(0) * 2; }

    /**
     * Products P_j * f for j = 0..p, generated by the Bonnet recurrence applied to f.
     */
    std::vector<LegendreSeries> legendre_products(int p) const;

    LegendreSeries& operator+=(const LegendreSeries& o);
    LegendreSeries& operator*=(const Rational& c);
    friend LegendreSeries operator-(const LegendreSeries& a, const LegendreSeries& b);

    RationalPoly to_power_basis() const;

private:
    void add_term(int n, const Rational& v);
    void trim();

    int lo_ = 0;
    std::vector<Rational> c_;
};

}  // namespace stochtaylor
