#include <doctest.h>

#include <cmath>
#include <random>

#include "safechain/error.hpp"
#include "safechain/gains.hpp"

using namespace safechain;

namespace {

std::vector<GainFunction> families()
{
    return {GainFunction::linear(), GainFunction::polynomial(2.0), GainFunction::polynomial(1.5),
            GainFunction::exponential(1.0, 0.5), GainFunction::exponential(0.3, 2.0)};
}

// composite Simpson, the quadrature reference
double simpson(const GainFunction& g, double t0, double t1, double power, int n = 20000)
{
    const double h = (t1 - t0) / n;
    double s = std::pow(g.eval(t0), power) + std::pow(g.eval(t1), power);
    for (int k = 1; k < n; ++k)
        s += (k % 2 ? 4.0 : 2.0) * std::pow(g.eval(t0 + k * h), power);
    return s * h / 3.0;
}

}  // namespace

TEST_CASE("gain evaluation examples")
{
    CHECK(upsilon_eval(GainFunction::linear(), 0.0) == 1.0);
    CHECK(upsilon_eval(GainFunction::polynomial(2.0), 1.0) == doctest::Approx(4.0));
    CHECK(upsilon_eval(GainFunction::exponential(1.0, 0.5), 2.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
    for (const auto& g : families())
        CHECK(g.eval(0.0) > 0.0);
}

TEST_CASE("gain power derivative examples")
{
    CHECK(upsilon_power_derivative(GainFunction::linear(), 0.0, 3.0) == doctest::Approx(3.0));
    CHECK(upsilon_power_derivative(GainFunction::linear(), 1.0, 2.0) == doctest::Approx(4.0));
    CHECK(upsilon_power_derivative(GainFunction::exponential(1.0, 1.0), 0.0, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("gain power integral examples")
{
    const auto lin = GainFunction::linear();
    CHECK(upsilon_power_integral(lin, 0.0, 1.0, 1.0) == doctest::Approx(1.5));
    CHECK(upsilon_power_integral(lin, 0.0, 0.0, 5.0) == 0.0);
    CHECK(upsilon_power_integral(lin, 0.0, 1.0, 2.0) == doctest::Approx(7.0 / 3.0).epsilon(1e-13));
    CHECK(simpson(lin, 0.0, 1.0, 2.0) == doctest::Approx(7.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("closed-form integrals agree with quadrature")
{
    for (const auto& g : families())
        for (double power : {1.0, 2.0, 3.0, 6.0}) {
            CAPTURE(g.describe());
            CAPTURE(power);
            CHECK(g.power_integral(0.5, 2.5, power) == doctest::Approx(simpson(g, 0.5, 2.5, power)).epsilon(1e-10));
        }
}

TEST_CASE("gains are strictly increasing")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 20.0);
    for (const auto& g : families()) {
        int bad = 0;
        for (int k = 0; k < 10000; ++k) {
            double a = u(rng), b = u(rng);
            if (a == b)
                continue;
            if (a > b)
                std::swap(a, b);
            bad += g.eval(b) > g.eval(a) ? 0 : 1;
        }
        CHECK(bad == 0);
    }
}

TEST_CASE("power derivative matches central differences")
{
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> ut(0.1, 5.0), up(1.0, 6.0);
    for (const auto& g : families()) {
        double worst = 0.0;
        for (int k = 0; k < 1000; ++k) {
            const double t = ut(rng), p = up(rng), h = 1e-5 * (1.0 + t);
            const double fd = (std::pow(g.eval(t + h), p) - std::pow(g.eval(t - h), p)) / (2.0 * h);
            const double an = g.power_derivative(t, p);
            worst = std::max(worst, std::abs(fd - an) / std::abs(an));
        }
        CAPTURE(g.describe());
        CHECK(worst <= 1e-6);
    }
}

TEST_CASE("power integral is additive and unbounded")
{
    for (const auto& g : families()) {
        const double a = g.power_integral(0.2, 1.7, 2.0) + g.power_integral(1.7, 4.1, 2.0);
        CHECK(std::abs(a - g.power_integral(0.2, 4.1, 2.0)) <= 1e-9 * std::max(1.0, a));
        double T = 1.0;
        while (g.power_integral(0.0, T, 1.0) < 1e6 && T < 1e9)
            T *= 2.0;
        CHECK(g.power_integral(0.0, T, 1.0) >= 1e6);
    }
}

TEST_CASE("power series leads with value and derivative")
{
    for (const auto& g : families()) {
        const auto c = g.power_series(1.3, 3.0, 3);
        REQUIRE(c.size() == 4);
        CHECK(c[0] == doctest::Approx(std::pow(g.eval(1.3), 3.0)).epsilon(1e-12));
        CHECK(c[1] == doctest::Approx(g.power_derivative(1.3, 3.0)).epsilon(1e-12));
        // second coefficient against a difference quotient of the derivative
        const double h = 1e-5;
        const double d2 = (g.power_derivative(1.3 + h, 3.0) - g.power_derivative(1.3 - h, 3.0)) / (2.0 * h);
        CHECK(c[2] == doctest::Approx(0.5 * d2).epsilon(1e-6));
    }
}

TEST_CASE("gain errors")
{
    CHECK_THROWS_AS(GainFunction::linear().eval(-0.1), Error);
    CHECK_THROWS_AS(GainFunction::polynomial(0.5), Error);
    CHECK_THROWS_AS(GainFunction::exponential(0.0, 1.0), Error);
    CHECK_THROWS_AS(GainFunction::exponential(1.0, -1.0), Error);
    CHECK_THROWS_AS(GainFunction::linear().power_integral(2.0, 1.0, 1.0), Error);
}
