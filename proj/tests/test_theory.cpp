#include <cmath>
#include <complex>

#include "doctest.h"

#include "wavewr/theory.hpp"

using namespace wavewr;
using namespace wavewr::theory;
using cd = std::complex<double>;

TEST_CASE("exact conversion of doubles")
{
    CHECK(to_rational(0.5) == Rational(1, 2));
    CHECK(to_rational(0.25) == Rational(1, 4));
    CHECK(to_rational(-3.0) == Rational(-3));
    CHECK(to_rational(0.0) == Rational(0));
    CHECK(static_cast<double>(to_rational(0.1)) == 0.1);
    CHECK(to_rational(0.1) != Rational(1, 10));
    CHECK_THROWS_AS(to_rational(std::nan("")), UsageError);
}

TEST_CASE("kernel closed form")
{
    // 40-digit reference for coth(3) tanh(2) - 1.
    CHECK(std::abs(kernel_closed_form(3, 2, 1, 1.0) - (-0.03118137318168296705504157552803631364942))
          <= 1e-15);
    for (cd s : {cd(0.3), cd(1.0, 2.0), cd(4.0, -1.0)})
        CHECK(std::abs(kernel_closed_form(1.5, 1.5, 1.0, s)) <= 1e-15);
    const cd far = kernel_closed_form(3, 2, 1, 50.0);
    CHECK(std::isfinite(far.real()));
    CHECK(std::abs(far) <= 1e-15);
    CHECK(std::isfinite(kernel_closed_form(3, 2, 1, 1e4).real()));
    CHECK_THROWS_AS(kernel_closed_form(3, 2, 1, 0.0), std::domain_error);
    CHECK_THROWS_AS(kernel_closed_form(3, 2, 1, cd(-1.0, 1.0)), std::domain_error);

    const cd s(0.7, 0.3);
    const cd coth_a = 1.0 / std::tanh(3.0 * s);
    const cd coth_b = 1.0 / std::tanh(2.0 * s);
    CHECK(std::abs(coth_sum(3, 2, 1, s) - (coth_a + coth_b)) <= 1e-14);
}

TEST_CASE("kernel series enumeration")
{
    const auto small = kernel_series({3, 2, 1}, 5.0);
    REQUIRE(small.terms().size() == 1);
    CHECK(small.coefficient({0, 1}) == -2);

    const auto p = kernel_series({3, 2, 1}, 12.0);
    CHECK(p.coefficient({1, 0}) == 2);
    CHECK(p.coefficient({2, 0}) == 2);
    CHECK(p.coefficient({0, 1}) == -2);
    CHECK(p.coefficient({0, 2}) == 2);
    CHECK(p.coefficient({0, 3}) == -2);
    CHECK(p.coefficient({1, 1}) == -4); // tau = 10
    CHECK(p.coefficient({0, 0}) == 0);
    CHECK(p.coefficient({1, 2}) == 0); // tau = 14 is beyond the horizon
}

TEST_CASE("series evaluation matches the closed form within the tail bound")
{
    for (auto [a, b] : {std::pair{3.0, 2.0}, {1.0, 1.0}, {0.5, 2.5}})
    {
        const Geometry g{a, b, 1.0};
        const auto series = kernel_series(g, 60.0);
        for (cd s : {cd(0.5), cd(1.0), cd(2.0), cd(5.0), cd(1.0, 1.0), cd(1.0, -1.0), cd(0.5, 1.0)})
        {
            CAPTURE(a);
            CAPTURE(b);
            CAPTURE(s);
            const double diff = std::abs(kernel_closed_form(a, b, 1.0, s) - series.evaluate(s));
            CHECK(diff <= std::max(1e-12, kernel_tail_bound(g, 60.0, s.real())));
        }
    }
    // Symmetric cancellation.
    const auto sym = kernel_series({1, 1, 1}, 10.0);
    for (double s : {0.5, 1.0, 3.0})
        CHECK(std::abs(sym.evaluate(s)) <= kernel_tail_bound({1, 1, 1}, 10.0, s) + 1e-14);
}

TEST_CASE("tail bound shrinks with the horizon")
{
    const Geometry g{3, 2, 1};
    double previous = kernel_tail_bound(g, 10.0, 0.5);
    for (double T : {20.0, 40.0, 80.0})
    {
        const double bound = kernel_tail_bound(g, T, 0.5);
        CHECK(bound < previous);
        CHECK(bound <= 100.0 * std::exp(-T * 0.5));
        previous = bound;
    }
    CHECK_THROWS_AS(kernel_tail_bound(g, 10.0, 0.0), std::domain_error);
}

TEST_CASE("base symbols")
{
    SUBCASE("DNWR lowest delay for a = 3, b = 2")
    {
        const auto p = symbol_power({Method::DNWR, 0.5, {3, 2, 1}}, 1, 16.0);
        const auto merged = p.by_delay();
        REQUIRE_FALSE(merged.empty());
        CHECK(merged.front().first == doctest::Approx(4.0));
        CHECK(merged.front().second == 1);
        CHECK(p.coefficient({0, 0}) == 0);
    }

    SUBCASE("NNWR cancellation at delay 2a")
    {
        const auto p = symbol_power({Method::NNWR, 0.25, {3, 2, 1}}, 1, 16.0);
        CHECK(p.coefficient({1, 0}) == 0);
        CHECK(p.coefficient({0, 1}) == 0);
        CHECK(p.min_delay() == doctest::Approx(8.0));
    }

    SUBCASE("DNWR theta = 1/2 on a symmetric domain vanishes")
    {
        const SymbolSpec spec{Method::DNWR, 0.5, {1.5, 1.5, 1.0}};
        const auto p = base_symbol(spec, 40.0);
        for (cd s : {cd(1.0), cd(2.0, 1.0), cd(1.0, -3.0)})
            CHECK(std::abs(p.evaluate(s)) <= 0.5 * kernel_tail_bound(spec.geometry, 40.0, s.real()) + 1e-14);
    }

    SUBCASE("closed forms")
    {
        const SymbolSpec dn{Method::DNWR, 0.3, {3, 2, 1}};
        const cd s(1.0, 0.5);
        const cd ca = 1.0 / std::tanh(3.0 * s);
        const cd tb = std::tanh(2.0 * s);
        CHECK(std::abs(symbol_closed_form(dn, s) - (1.0 - 0.3 - 0.3 * ca * tb)) <= 1e-14);
        const SymbolSpec nn{Method::NNWR, 0.2, {3, 2, 1}};
        const cd cb = 1.0 / tb;
        CHECK(std::abs(symbol_closed_form(nn, s) - (1.0 - 0.2 * (2.0 + ca / cb + cb / ca))) <= 1e-14);
    }

    CHECK_THROWS_AS(symbol_power({Method::DNWR, 0.5, {3, 2, 1}}, 0, 16.0), UsageError);
    CHECK_THROWS_AS(base_symbol({Method::SwrClassical, 0.5, {3, 2, 1}}, 16.0), UsageError);
    CHECK_THROWS_AS(base_symbol({Method::DNWR, 0.0, {3, 2, 1}}, 16.0), UsageError);
}

TEST_CASE("minimum-delay law in exact arithmetic")
{
    for (auto [a, b] : {std::pair{3.0, 2.0}, {1.0, 3.0}, {2.0, 5.0}, {1.5, 1.0}})
    {
        const Geometry g{a, b, 1.0};
        for (int k = 1; k <= 6; ++k)
        {
            CAPTURE(a);
            CAPTURE(b);
            CAPTURE(k);
            const double horizon = 4.0 * k * std::min(a, b) + 1.0;

            const auto dn = symbol_power({Method::DNWR, 0.5, g}, k, horizon).by_delay();
            const double dn_min = 2.0 * k * std::min(a, b);
            REQUIRE_FALSE(dn.empty());
            CHECK(dn.front().first == doctest::Approx(dn_min));
            // +1 on e^{-2bks/c} when b < a, (-1)^k on e^{-2aks/c} when a < b.
            const int sign = b < a ? 1 : (k % 2 == 0 ? 1 : -1);
            CHECK(dn.front().second == sign);

            const auto nn = symbol_power({Method::NNWR, 0.25, g}, k, horizon).by_delay();
            REQUIRE_FALSE(nn.empty());
            CHECK(nn.front().first == doctest::Approx(4.0 * k * std::min(a, b)));
            CHECK(nn.front().second != 0);
        }
    }
}

TEST_CASE("powers agree with repeated evaluation")
{
    for (auto spec : {SymbolSpec{Method::DNWR, 0.5, {3, 2, 1}}, SymbolSpec{Method::NNWR, 0.25, {3, 2, 1}},
                      SymbolSpec{Method::DNWR, 0.3, {1, 3, 1}}})
    {
        const double T = 30.0;
        const auto one = symbol_power(spec, 1, T);
        for (int k = 2; k <= 4; ++k)
        {
            const auto pk = symbol_power(spec, k, T);
            for (cd s : {cd(2.0), cd(1.5, 1.0)})
            {
                // Terms beyond T are dropped on both sides differently; at
                // Re(s) = 1.5 and T = 30 both truncations are below 1e-12.
                CHECK(std::abs(pk.evaluate(s) - std::pow(one.evaluate(s), k)) <= 1e-9);
            }
        }
    }
}

TEST_CASE("predicted traces")
{
    const SymbolSpec spec{Method::DNWR, 0.5, {3, 2, 1}};
    const auto d = Discretization::with_window(0.02, 0.02, 16.0);
    const auto h0 = [](double t) { return t * t; };

    const auto h1 = predict_trace(spec, 1, h0, d);
    CHECK(h1[250] == doctest::Approx(1.0).epsilon(1e-14)); // t = 5
    CHECK(h1[200] == 0.0);                                 // t = 4: H(0) = 1 but h0(0) = 0
    CHECK(h1[100] == 0.0);

    // Beyond the finite-step horizon the trace is identically zero.
    CHECK(l2_time(predict_trace(spec, 4, h0, d)) == 0.0);
    CHECK(l2_time(predict_trace({Method::NNWR, 0.25, {3, 2, 1}}, 2, h0, d)) == 0.0);

    // The sampled overload interpolates between levels.
    const auto sampled = TimeTrace::sample(h0, d);
    const auto h2 = predict_trace(spec, 2, sampled);
    const auto h2_exact = predict_trace(spec, 2, h0, d);
    CHECK(l2_time(h2 - h2_exact) <= 1e-12);
}

TEST_CASE("finite-step bound and symmetric rate")
{
    CHECK(finite_step_bound(Method::DNWR, 3, 2, 1, 16) == 5);
    CHECK(finite_step_bound(Method::NNWR, 3, 2, 1, 16) == 3);
    CHECK(finite_step_bound(Method::DNWR, 3, 2, 1, 4) == 2);
    CHECK(finite_step_bound(Method::DNWR, 3, 2, 1, 3) == 2);
    CHECK(finite_step_bound(Method::DNWR, 3, 2, 1, 10) == 4);
    CHECK(finite_step_bound(Method::NNWR, 3, 2, 1, 10) == 3);
    for (double T : {4.0, 8.0, 12.0})
        CHECK(finite_step_bound(Method::NNWR, 3, 2, 1, T) == static_cast<int>(std::ceil(T / 8.0)) + 1);

    CHECK(symmetric_rate(Method::DNWR, 0.5) == 0.0);
    CHECK(symmetric_rate(Method::NNWR, 0.25) == 0.0);
    CHECK(symmetric_rate(Method::DNWR, 0.3) == doctest::Approx(0.4));
    CHECK_THROWS_AS(symmetric_rate(Method::DNWR, 0.0), UsageError);
    CHECK_THROWS_AS(finite_step_bound(Method::SwrOptimized, 3, 2, 1, 4), UsageError);
}
