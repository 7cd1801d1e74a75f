#include "qf/lowerbound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qf/rng.hpp"

namespace qf {

PriorSpec prior_from_solution(const ExtremalSolution& sol, double delta) {
    if (!(delta >= 0.0 && delta <= 1.0))
        throw std::domain_error("prior_from_solution: delta must lie in [0,1]");
    PriorSpec p;
    p.delta = delta;
    p.indices = sol.set.indices;
    p.variances.resize(sol.least_favorable.size());
    for (std::size_t i = 0; i < p.variances.size(); ++i)
        p.variances[i] = (1.0 - delta) * sol.least_favorable[i];
    return p;
}

ThetaMap prior_sample(const PriorSpec& prior, std::uint64_t seed) {
    Rng rng(seed);
    ThetaMap th;
    th.indices = prior.indices;
    th.values.resize(prior.variances.size());
    for (std::size_t i = 0; i < th.values.size(); ++i)
        th.values[i] = std::sqrt(prior.variances[i]) * rng.normal();
    return th;
}

namespace {

// argmin of c over each sign class; lexicographic index order breaks ties
void cheapest_pair(const CoefficientSpec& spec, Index& plus, Index& minus, Coefficients& cq_plus,
                   Coefficients& cq_minus) {
    double best_p = std::numeric_limits<double>::infinity();
    double best_m = std::numeric_limits<double>::infinity();
    bool have_p = false, have_m = false;

    auto consider = [&](const Index& ix, double c, double q) {
        if (q > 0 && (c < best_p || (c == best_p && (!have_p || ix < plus)))) {
            best_p = c;
            plus = ix;
            cq_plus = {c, q};
            have_p = true;
        } else if (q < 0 && (c < best_m || (c == best_m && (!have_m || ix < minus)))) {
            best_m = c;
            minus = ix;
            cq_minus = {c, q};
            have_m = true;
        }
    };

    if (auto* fl = std::get_if<FiniteList>(&spec.family)) {
        for (const auto& e : fl->entries) consider(e.index, e.c, e.q);
    } else if (spec.two_sample()) {
        // c is coordinate-monotone, so the per-class minimum lies in a small
        // box; the tag carries the sign
        const int d = spec.dimension();
        std::vector<int> odo(d, -2);
        for (;;) {
            MultiIndex l(odo.begin(), odo.end());
            if (!is_zero(l)) {
                Index i1{l, 1}, i2{l, 2};
                auto c1 = coeff(spec, i1);
                if (c1.q != 0.0) {
                    consider(i1, c1.c, c1.q);
                    auto c2 = coeff(spec, i2);
                    consider(i2, c2.c, c2.q);
                }
            }
            int axis = 0;
            while (axis < d) {
                if (++odo[axis] <= 2) break;
                odo[axis] = -2;
                ++axis;
            }
            if (axis == d) break;
        }
    } else {
        throw std::domain_error("two_point_pair: both sign classes must be nonempty");
    }
    if (!have_p || !have_m)
        throw std::domain_error("two_point_pair: both sign classes must be nonempty");
}

}  // namespace

TwoPointPair two_point_pair(const CoefficientSpec& spec, long n, double z) {
    if (!(z > 0)) throw std::domain_error("two_point_pair: z must be positive");
    if (n < 1) throw std::domain_error("two_point_pair: n must be positive");

    TwoPointPair p;
    Coefficients cqp{0, 0}, cqm{0, 0};
    cheapest_pair(spec, p.l_plus, p.l_minus, cqp, cqm);
    p.c_plus = cqp.c;
    p.q_plus = cqp.q;
    p.c_minus = cqm.c;
    p.q_minus = cqm.q;

    const double D = p.c_minus * std::abs(p.q_plus) + p.c_plus * std::abs(p.q_minus);
    p.theta0_minus = std::sqrt(std::abs(p.q_plus) / D);
    p.theta0_plus = std::sqrt(std::abs(p.q_minus) / D);
    p.z = z;
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    const double t1p2 = p.theta0_plus * p.theta0_plus - z / sqrt_n;
    if (t1p2 < 0)
        throw std::domain_error("two_point_pair: infeasible z, theta1_+^2 would be negative");
    p.theta1_plus = std::sqrt(t1p2);
    p.theta1_minus = p.theta0_minus;
    p.rate2 = z * p.q_plus / sqrt_n;
    double diff = p.theta0_plus - p.theta1_plus;
    p.kl_bound = static_cast<double>(n) * diff * diff;
    return p;
}

ThetaMap two_point_theta(const TwoPointPair& pair, bool alternative) {
    ThetaMap th;
    th.indices = {pair.l_minus, pair.l_plus};
    th.values = alternative ? std::vector<double>{pair.theta1_minus, pair.theta1_plus}
                            : std::vector<double>{pair.theta0_minus, pair.theta0_plus};
    return th;
}

}  // namespace qf
