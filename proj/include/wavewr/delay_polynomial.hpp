#ifndef WAVEWR_DELAY_POLYNOMIAL_HPP
#define WAVEWR_DELAY_POLYNOMIAL_HPP

#include <complex>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace wavewr::theory
{
    using Rational = boost::multiprecision::cpp_rational;

    /// Exact value of a double (every finite double is a dyadic rational).
    Rational to_rational(double x);

    /// Subdomain lengths a, b and wave speed c.
    struct Geometry
    {
        double a = 1.0;
        double b = 1.0;
        double c = 1.0;

        void validate() const;
        /// tau(m, n) = 2 (a m + b n) / c.
        double delay(int m, int n) const { return 2.0 * (a * m + b * n) / c; }
        /// Same wave speed, a and b exchanged.
        Geometry transposed() const { return Geometry{b, a, c}; }
        bool operator==(const Geometry&) const = default;
    };

    /// Monomial index (m, n) standing for the delay operator exp(-tau(m, n) s).
    struct Monomial
    {
        int m = 0;
        int n = 0;
        auto operator<=>(const Monomial&) const = default;
    };

    /// Finite sum of exactly stored coefficients times delay operators
    /// exp(-2(a m + b n) s / c), truncated to delays <= horizon. Delays only add
    /// under multiplication, so truncating after each product loses nothing
    /// below the horizon.
    class DelayPolynomial
    {
    public:
        DelayPolynomial(Geometry g, double horizon);

        static DelayPolynomial constant(Geometry g, double horizon, const Rational& value);

        const Geometry& geometry() const { return geometry_; }
        double horizon() const { return horizon_; }
        const std::map<Monomial, Rational>& terms() const { return terms_; }

        /// True when tau(m, n) <= horizon, with 1e-12 relative slack.
        bool within_horizon(int m, int n) const;

        /// Adds `value` to the coefficient of (m, n); ignored beyond the horizon.
        void add(Monomial mono, const Rational& value);
        Rational coefficient(Monomial mono) const;

        DelayPolynomial operator+(const DelayPolynomial& other) const;
        DelayPolynomial operator*(const DelayPolynomial& other) const;
        DelayPolynomial scaled(const Rational& factor) const;
        DelayPolynomial pow(int k) const;

        /// (m, n) -> (n, m) together with a <-> b: the same operator written in
        /// the transposed geometry.
        DelayPolynomial transposed() const;

        /// Sum of coeff * exp(-tau s).
        std::complex<double> evaluate(std::complex<double> s) const;

        /// Coefficients merged over monomials with equal delay (1e-12 relative),
        /// sorted by delay, zero sums dropped.
        std::vector<std::pair<double, Rational>> by_delay() const;

        /// Smallest delay whose merged coefficient is nonzero.
        std::optional<double> min_delay() const;

    private:
        Geometry geometry_;
        double horizon_;
        std::map<Monomial, Rational> terms_;
    };
} // namespace wavewr::theory

#endif
