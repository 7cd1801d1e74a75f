#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "qf/estimator.hpp"
#include "qf/rng.hpp"

using namespace qf;

namespace {

const BasisSpec kTensor1{BasisKind::FourierTensor, 1};
const BasisSpec kTensor2{BasisKind::FourierTensor, 2};

Sample uniform_sample(std::size_t n, int d, std::uint64_t seed) {
    Rng rng(seed);
    Sample s;
    s.dimension = d;
    s.t.resize(n * d);
    s.x.assign(n, 0.0);
    for (auto& v : s.t) v = rng.uniform();
    return s;
}

}  // namespace

TEST_CASE("empirical coefficient") {
    SUBCASE("zero responses give zero") {
        auto s = uniform_sample(100, 1, 5);
        CHECK(empirical_coeff(s, {{1}, 0}, kTensor1) == 0.0);
    }
    SUBCASE("recovers a pure basis signal within 3/sqrt(n)") {
        const std::size_t n = 100000;
        auto s = uniform_sample(n, 1, 6);
        for (std::size_t i = 0; i < n; ++i)
            s.x[i] = eval_basis(kTensor1, {2}, s.point(i));
        double th = empirical_coeff(s, {{2}, 0}, kTensor1);
        CHECK(std::abs(th - 1.0) <= 3.0 / std::sqrt(static_cast<double>(n)));
        // orthogonal index sees only CLT noise
        double off = empirical_coeff(s, {{3}, 0}, kTensor1);
        CHECK(std::abs(off) <= 3.0 * std::sqrt(2.0) / std::sqrt(static_cast<double>(n)));
    }
    SUBCASE("replicated design points stay well-defined") {
        Sample s;
        s.dimension = 1;
        s.t = {0.3, 0.3, 0.3, 0.3};
        s.x = {1.0, 1.0, 1.0, 1.0};
        CHECK(std::isfinite(empirical_coeff(s, {{1}, 0}, kTensor1)));
    }
}

TEST_CASE("pilot support and cap") {
    CoefficientSpec detection{SobolevDerivative{{2.0}, {0.0}}};  // S_F is everything
    auto s = uniform_sample(400, 1, 7);
    auto pe = pilot_fit(s, detection, kTensor1, 1e8);
    CHECK(pe.indices.empty());
    double t0 = 0.0;
    CHECK(pilot_eval(pe, kTensor1, {&t0, 1}) == 0.0);

    CoefficientSpec spec{SobolevDerivative{{2.0, 2.0}, {1.0, 0.0}}};  // S_F^c = {l1 = 0}
    auto s2 = uniform_sample(400, 2, 8);
    CHECK_THROWS_AS(pilot_fit(s2, spec, kTensor2, 1e12), std::runtime_error);

    double Tdef = default_pilot_threshold(spec, 400);
    auto n1 = low_c_complement(spec, Tdef);
    auto cap = static_cast<std::size_t>(
        std::floor(std::min(std::pow(400.0, 0.4), std::sqrt(400.0) / 4.0)));
    CHECK(n1.size() <= cap);
    CHECK(low_c_complement(spec, Tdef * 1.0001).size() > n1.size());
    auto pe2 = pilot_fit(s2, spec, kTensor2, Tdef);
    for (const auto& ix : pe2.indices)  // support never intersects S_F
        CHECK(coeff(spec, ix).q == 0.0);
}

TEST_CASE("pilot evaluation basics") {
    PilotEstimate pe;
    pe.T_pilot = 10.0;
    pe.indices = {{{1}, 0}};
    pe.coefficients = {1.0};
    double t0 = 0.0;
    CHECK(pilot_eval(pe, kTensor1, {&t0, 1}) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("pilot is linear in the responses") {
    CoefficientSpec spec{SobolevDerivative{{2.0, 2.0}, {1.0, 0.0}}};
    auto s = uniform_sample(300, 2, 9);
    Rng rng(10);
    for (auto& v : s.x) v = rng.normal();
    double Tp = default_pilot_threshold(spec, s.size());
    auto p1 = pilot_fit(s, spec, kTensor2, Tp);
    Sample s3 = s;
    for (auto& v : s3.x) v *= -2.5;
    auto p2 = pilot_fit(s3, spec, kTensor2, Tp);
    double t[2] = {0.21, 0.77};
    CHECK(pilot_eval(p2, kTensor2, t) == doctest::Approx(-2.5 * pilot_eval(p1, kTensor2, t)));
}

TEST_CASE("pilot error shrinks with the sample size") {
    // f lives on S_F^c; Monte Carlo mean of ||pilot - Pi f||_2^2 and of the
    // fourth-power grid norm both decrease across n
    CoefficientSpec spec{SobolevDerivative{{2.0, 2.0}, {1.0, 0.0}}};
    const Index sig{{0, 1}, 0};
    const double theta = 0.7;

    auto run = [&](std::size_t n, int reps, std::uint64_t seed) {
        double l2 = 0.0, l4 = 0.0;
        for (int r = 0; r < reps; ++r) {
            auto s = uniform_sample(n, 2, derive_seed(seed, r));
            Rng rng(derive_seed(seed + 1, r));
            for (std::size_t i = 0; i < n; ++i)
                s.x[i] = theta * eval_index(kTensor2, sig, s.point(i)) + rng.normal();
            auto pe = pilot_fit(s, spec, kTensor2, default_pilot_threshold(spec, n));
            // exact l2 error via the coefficient representation
            double e2 = 0.0;
            bool hit = false;
            for (std::size_t j = 0; j < pe.indices.size(); ++j) {
                double target = pe.indices[j] == sig ? theta : 0.0;
                hit |= pe.indices[j] == sig;
                e2 += (pe.coefficients[j] - target) * (pe.coefficients[j] - target);
            }
            if (!hit) e2 += theta * theta;
            l2 += e2;
            // fourth-power norm on a grid at twice the largest active frequency
            int maxf = 1;
            for (const auto& ix : pe.indices)
                for (int v : ix.lattice) maxf = std::max(maxf, std::abs(v));
            int grid = 4 * maxf + 2;
            double acc = 0.0;
            for (int a = 0; a < grid; ++a)
                for (int b = 0; b < grid; ++b) {
                    double t[2] = {static_cast<double>(a) / grid, static_cast<double>(b) / grid};
                    double err = -theta * eval_index(kTensor2, sig, t);
                    for (std::size_t j = 0; j < pe.indices.size(); ++j)
                        err += pe.coefficients[j] * eval_index(kTensor2, pe.indices[j], t);
                    acc += err * err * err * err;
                }
            l4 += acc / (grid * grid);
        }
        return std::pair{l2 / reps, l4 / reps};
    };

    auto [a2, a4] = run(1000, 24, 100);
    auto [b2, b4] = run(10000, 24, 200);
    auto [c2, c4] = run(100000, 8, 300);
    CHECK(a2 > b2);
    CHECK(b2 > c2);
    CHECK(a4 > b4);
    CHECK(b4 > c4);
}

TEST_CASE("sample validation") {
    Sample s;
    s.dimension = 1;
    s.t = {0.5, 1.7, 0.2, 0.3};
    s.x = {0.0, 0.0, 0.0, 0.0};
    CHECK_THROWS_AS(s.validate(), std::domain_error);  // out-of-cube point
    Sample tiny;
    tiny.dimension = 1;
    tiny.t = {0.5, 0.6};
    tiny.x = {0.0, 0.0};
    CHECK_THROWS_AS(tiny.validate(), std::domain_error);  // fewer than 4 points
}
