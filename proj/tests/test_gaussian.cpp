#include <cmath>
#include <initializer_list>
#include <stdexcept>

#include "doctest.h"
#include "qf/gaussian.hpp"

using namespace qf;

namespace {

// independent oracle: invert the erf-based c.d.f. by bisection
double quantile_bisect(double p) {
    double lo = -12.0, hi = 12.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (normal_cdf(mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("normal quantile matches the bisection-on-erf oracle to 1e-9") {
    for (double p : {1e-8, 1e-4, 0.01, 0.025, 0.05, 0.1, 0.3, 0.5, 0.7, 0.9, 0.95, 0.975, 0.999,
                     1.0 - 1e-6}) {
        CHECK(std::abs(normal_quantile(p) - quantile_bisect(p)) <= 1e-9);
    }
}

TEST_CASE("reference quantiles") {
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(normal_quantile(0.95) == doctest::Approx(1.6448536269514722).epsilon(1e-12));
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("cdf/quantile round trip") {
    for (double x : {-6.0, -2.0, -0.5, 0.0, 0.3, 1.0, 4.0})
        CHECK(normal_quantile(normal_cdf(x)) == doctest::Approx(x).epsilon(1e-10));
}

TEST_CASE("quantile rejects p outside (0,1)") {
    CHECK_THROWS_AS(normal_quantile(0.0), std::domain_error);
    CHECK_THROWS_AS(normal_quantile(1.0), std::domain_error);
    CHECK_THROWS_AS(normal_quantile(-0.2), std::domain_error);
}
