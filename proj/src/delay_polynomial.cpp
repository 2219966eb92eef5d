#include "wavewr/delay_polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "wavewr/core.hpp"

namespace wavewr::theory
{
    namespace
    {
        bool same_delay(double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(y)); }
    } // namespace

    Rational to_rational(double x)
    {
        if (!std::isfinite(x))
            throw UsageError("to_rational: non-finite value");
        int exponent = 0;
        const double mantissa = std::frexp(x, &exponent);
        // mantissa * 2^53 is an integer for every double.
        const auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
        Rational r(scaled);
        exponent -= 53;
        const Rational two_pow = Rational(boost::multiprecision::cpp_int(1) << std::abs(exponent));
        if (exponent >= 0)
            return Rational(r * two_pow);
        return Rational(r / two_pow);
    }

    void Geometry::validate() const
    {
        if (!(a > 0.0 && b > 0.0 && c > 0.0))
            throw UsageError("Geometry: a, b and c must be positive");
    }

    DelayPolynomial::DelayPolynomial(Geometry g, double horizon) : geometry_(g), horizon_(horizon)
    {
        g.validate();
        if (!(horizon >= 0.0))
            throw UsageError("DelayPolynomial: horizon must be nonnegative");
    }

    DelayPolynomial DelayPolynomial::constant(Geometry g, double horizon, const Rational& value)
    {
        DelayPolynomial p(g, horizon);
        p.add({0, 0}, value);
        return p;
    }

    bool DelayPolynomial::within_horizon(int m, int n) const
    {
        return geometry_.delay(m, n) <= horizon_ * (1.0 + 1e-12) + 1e-12;
    }

    void DelayPolynomial::add(Monomial mono, const Rational& value)
    {
        if (mono.m < 0 || mono.n < 0)
            throw UsageError("DelayPolynomial: negative monomial index");
        if (value == 0 || !within_horizon(mono.m, mono.n))
            return;
        auto [it, inserted] = terms_.try_emplace(mono, value);
        if (!inserted)
        {
            it->second += value;
            if (it->second == 0)
                terms_.erase(it);
        }
    }

    Rational DelayPolynomial::coefficient(Monomial mono) const
    {
        const auto it = terms_.find(mono);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    DelayPolynomial DelayPolynomial::operator+(const DelayPolynomial& other) const
    {
        if (!(geometry_ == other.geometry_))
            throw UsageError("DelayPolynomial: geometry mismatch");
        DelayPolynomial out(geometry_, std::min(horizon_, other.horizon_));
        for (const auto& [mono, v] : terms_)
            out.add(mono, v);
        for (const auto& [mono, v] : other.terms_)
            out.add(mono, v);
        return out;
    }

    DelayPolynomial DelayPolynomial::operator*(const DelayPolynomial& other) const
    {
        if (!(geometry_ == other.geometry_))
            throw UsageError("DelayPolynomial: geometry mismatch");
        DelayPolynomial out(geometry_, std::min(horizon_, other.horizon_));
        for (const auto& [p, x] : terms_)
            for (const auto& [q, y] : other.terms_)
                out.add({p.m + q.m, p.n + q.n}, x * y);
        return out;
    }

    DelayPolynomial DelayPolynomial::scaled(const Rational& factor) const
    {
        DelayPolynomial out(geometry_, horizon_);
        for (const auto& [mono, v] : terms_)
            out.add(mono, v * factor);
        return out;
    }

    DelayPolynomial DelayPolynomial::pow(int k) const
    {
        if (k < 0)
            throw UsageError("DelayPolynomial::pow: negative exponent");
        DelayPolynomial out = constant(geometry_, horizon_, 1);
        for (int i = 0; i < k; ++i)
            out = out * *this;
        return out;
    }

    DelayPolynomial DelayPolynomial::transposed() const
    {
        DelayPolynomial out(geometry_.transposed(), horizon_);
        for (const auto& [mono, v] : terms_)
            out.add({mono.n, mono.m}, v);
        return out;
    }

    std::complex<double> DelayPolynomial::evaluate(std::complex<double> s) const
    {
        std::complex<double> sum = 0.0;
        for (const auto& [mono, v] : terms_)
            sum += static_cast<double>(v) * std::exp(-geometry_.delay(mono.m, mono.n) * s);
        return sum;
    }

    std::vector<std::pair<double, Rational>> DelayPolynomial::by_delay() const
    {
        std::vector<std::pair<double, Rational>> all;
        all.reserve(terms_.size());
        for (const auto& [mono, v] : terms_)
            all.emplace_back(geometry_.delay(mono.m, mono.n), v);
        std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.first < y.first; });

        std::vector<std::pair<double, Rational>> merged;
        for (auto& [tau, v] : all)
        {
            if (!merged.empty() && same_delay(tau, merged.back().first))
                merged.back().second += v;
            else
                merged.emplace_back(tau, std::move(v));
        }
        std::erase_if(merged, [](const auto& e) { return e.second == 0; });
        return merged;
    }

    std::optional<double> DelayPolynomial::min_delay() const
    {
        const auto merged = by_delay();
        if (merged.empty())
            return std::nullopt;
        return merged.front().first;
    }
} // namespace wavewr::theory
