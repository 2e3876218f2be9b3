#include <doctest.h>

#include <cmath>
#include <random>

#include "safechain/barrier.hpp"
#include "safechain/error.hpp"
#include "safechain/safety_filter.hpp"

using namespace safechain;

namespace {

Vec v2(double a, double b)
{
    Vec x(2);
    x << a, b;
    return x;
}

double slack(const Vec& v, double drift, const Vec& lg, double lambda_n, double alpha_h)
{
    return drift + lg.dot(v) - lambda_n + alpha_h;
}

}  // namespace

TEST_CASE("filter examples")
{
    auto r = qp_filter(v2(0.3, -0.4), 1.0, v2(1, 1), 0.0, 0.0);
    CHECK(r.zeta == doctest::Approx(0.9));
    CHECK_FALSE(r.active);
    CHECK(r.v == v2(0.3, -0.4));
    CHECK(r.correction_norm == 0.0);

    r = qp_filter(v2(0, 0), 0.0, v2(1, 0), 0.0, -2.0);
    CHECK(r.zeta == doctest::Approx(-2.0));
    CHECK(r.active);
    CHECK((r.v - v2(2, 0)).norm() < 1e-15);
    CHECK(std::abs(slack(r.v, 0.0, v2(1, 0), 0.0, -2.0)) < 1e-12);

    r = qp_filter(v2(1, 1), -3.0, v2(0, 2), 1.0, 0.0);
    CHECK(r.zeta == doctest::Approx(-2.0));
    CHECK((r.v - v2(1, 2)).norm() < 1e-15);
    CHECK(r.correction_norm == doctest::Approx(1.0));
}

TEST_CASE("zero slack is inactive")
{
    const auto r = qp_filter(v2(1, 0), -1.0, v2(1, 0), 0.0, 0.0);
    CHECK(r.zeta == 0.0);
    CHECK_FALSE(r.active);
    CHECK(r.v == v2(1, 0));
}

TEST_CASE("infeasible and malformed inputs")
{
    CHECK_THROWS_AS(qp_filter(v2(0, 0), -1.0, v2(0, 0), 0.0, 0.0), Error);
    try {
        qp_filter(v2(0, 0), -1.0, v2(0, 0), 0.0, 0.0);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InfeasibleConstraint);
    }
    // a vanishing Lg is fine while the nominal input is admissible
    CHECK_NOTHROW(qp_filter(v2(0, 0), 1.0, v2(0, 0), 0.0, 0.0));
    CHECK_THROWS_AS(qp_filter(v2(NAN, 0), 1.0, v2(1, 0), 0.0, 0.0), Error);
    CHECK_THROWS_AS(qp_filter(v2(0, 0), 1.0, Vec::Ones(3), 0.0, 0.0), Error);
}

TEST_CASE("filtered input has minimal deviation")
{
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    int active = 0;
    for (int k = 0; k < 2000; ++k) {
        const int m = 1 + k % 3;
        Vec v_no(m), lg(m);
        for (int j = 0; j < m; ++j) {
            v_no(j) = u(rng);
            lg(j) = u(rng);
        }
        const double drift = u(rng), lam = std::abs(u(rng)), ah = u(rng);
        const auto r = qp_filter(v_no, drift, lg, lam, ah);
        if (!r.active)
            continue;
        ++active;
        CHECK(std::abs(slack(r.v, drift, lg, lam, ah)) <= 1e-9 * (1.0 + std::abs(r.zeta)));
        for (int s = 0; s < 20; ++s) {
            Vec cand(m);
            for (int j = 0; j < m; ++j)
                cand(j) = r.v(j) + u(rng);
            if (slack(cand, drift, lg, lam, ah) < 0.0)
                continue;
            CHECK((cand - v_no).norm() >= r.correction_norm - 1e-9);
        }
    }
    CHECK(active > 200);
}

TEST_CASE("correction vanishes at the boundary")
{
    const Vec lg = v2(0.6, -0.8);
    double prev = 1e300;
    for (double z : {-1.0, -1e-2, -1e-4, -1e-8, -1e-12}) {
        // v_no chosen so the slack equals z
        const Vec v_no = lg * z;
        const auto r = qp_filter(v_no, 0.0, lg, 0.0, 0.0);
        CHECK(r.zeta == doctest::Approx(z));
        CHECK(r.correction_norm == doctest::Approx(std::abs(z)));
        CHECK(r.correction_norm < prev);
        prev = r.correction_norm;
    }
    CHECK(prev < 1e-11);
}

TEST_CASE("margin helpers")
{
    CHECK(worst_case_margin(v2(3, 4), 2.0) == doctest::Approx(10.0));
    CHECK(worst_case_margin(v2(3, 4), 0.0) == 0.0);
    CHECK(worst_case_margin(v2(0, 0), 2.0) == 0.0);
    const Vec grad = 2.0 * v2(-3, 3);
    CHECK(dorcbf_margin(grad, 1.0) == doctest::Approx(6.0 * std::sqrt(2.0)));
    CHECK(dorcbf_margin(grad, 0.0) == 0.0);

    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> u(-3.0, 3.0), um(0.05, 5.0);
    for (int k = 0; k < 1000; ++k) {
        const Vec g = v2(u(rng), u(rng));
        const Vec w = v2(u(rng), u(rng));
        CHECK(smooth_bound(g, w, um(rng)) >= dorcbf_margin(g, w.norm()) - 1e-12);
    }
}
