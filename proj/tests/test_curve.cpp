#include "conformap/curve.hpp"

#include "conformap/types.hpp"
#include "doctest.h"

#include <cmath>

using namespace conformap;

TEST_CASE("low_dim_weight closed form") {
    const CurveParams paper{1.93, 0.79};
    CHECK(low_dim_weight(0.0, paper) == 1.0);
    CHECK(low_dim_weight(0.0, CurveParams{5.0, 2.0}) == 1.0);
    // dist = 0.001 -> dist_sq = 1e-6, weight stays essentially 1
    CHECK(low_dim_weight(1e-6, paper) >= 0.99);
    CHECK(low_dim_weight(1e-6, paper) == doctest::Approx(0.99997).epsilon(1e-4));
    // dist = 1 -> 1/(1 + a)
    CHECK(low_dim_weight(1.0, paper) == doctest::Approx(1.0 / 2.93));
}

TEST_CASE("low_dim_weight strictly decreasing and continuous up to 1e6") {
    const CurveParams curve{1.93, 0.79};
    double prev = low_dim_weight(0.0, curve);
    double s = 1e-9;
    while (s <= 1e6) {
        const double w = low_dim_weight(s, curve);
        CHECK(w < prev);
        CHECK(w > 0.0);
        // no jumps: nearby arguments give nearby values
        CHECK(std::abs(w - low_dim_weight(s * (1.0 + 1e-9), curve)) < 1e-6);
        prev = w;
        s *= 2.0;
    }
}

TEST_CASE("fit_curve reproduces the reference constants for min_dist 0.001") {
    const CurveParams fitted = fit_curve(0.001);
    // separately computed nonlinear least-squares solution
    CHECK(fitted.a == doctest::Approx(1.929072).epsilon(0.01));
    CHECK(fitted.b == doctest::Approx(0.791504).epsilon(0.01));
    // bracket around the published constants
    CHECK(fitted.a >= 1.88);
    CHECK(fitted.a <= 1.98);
    CHECK(fitted.b >= 0.74);
    CHECK(fitted.b <= 0.84);

    // tail of the fitted curve has decayed at d = 3
    CHECK(low_dim_weight(9.0, fitted) <= 0.1);
}

TEST_CASE("fit_curve is deterministic and spans min_dist range") {
    const CurveParams first = fit_curve(0.001);
    const CurveParams second = fit_curve(0.001);
    CHECK(first.a == second.a);
    CHECK(first.b == second.b);

    for (double md : {0.01, 0.1, 0.5, 1.0}) {
        const CurveParams c = fit_curve(md);
        CHECK(c.a > 0.0);
        CHECK(c.b > 0.0);
    }
    // wider min_dist gives a flatter head: smaller a
    CHECK(fit_curve(0.5).a < fit_curve(0.001).a);
}

TEST_CASE("fit_curve rejects out-of-range min_dist") {
    CHECK_THROWS_AS(fit_curve(0.0), UsageError);
    CHECK_THROWS_AS(fit_curve(-0.5), UsageError);
    CHECK_THROWS_AS(fit_curve(1.5), UsageError);
}
