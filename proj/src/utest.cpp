#include "qf/utest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qf/gaussian.hpp"

namespace qf {

std::pair<Sample, Sample> split_sample(const Sample& sample) {
    const std::size_t n = sample.size();
    if (n < 4) throw std::domain_error("split_sample: need n >= 4");
    const auto m = n - static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
    const auto d = static_cast<std::size_t>(sample.dimension);

    Sample head, tail;
    head.dimension = tail.dimension = sample.dimension;
    head.t.assign(sample.t.begin(), sample.t.begin() + m * d);
    head.x.assign(sample.x.begin(), sample.x.begin() + m);
    tail.t.assign(sample.t.begin() + m * d, sample.t.end());
    tail.x.assign(sample.x.begin() + m, sample.x.end());
    return {std::move(head), std::move(tail)};
}

namespace {

// shared factorized core: sum_l w_l (S_l^2 - Q_l) / sqrt(2 m (m-1))
double quadratic_ustat(const Sample& sample, const std::vector<Index>& indices,
                       const std::vector<double>& w, const BasisSpec& basis) {
    const std::size_t m = sample.size();
    if (m < 2) throw std::domain_error("u_statistic: need at least two observations");
    double acc = 0.0;
    for (std::size_t l = 0; l < indices.size(); ++l) {
        double S = 0.0, Q = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double v = sample.x[i] * eval_index(basis, indices[l], sample.point(i));
            S += v;
            Q += v * v;
        }
        acc += w[l] * (S * S - Q);
    }
    return acc / std::sqrt(2.0 * static_cast<double>(m) * (m - 1));
}

double weight_norm(const std::vector<double>& w) {
    double s = 0.0;
    for (double v : w) s += v * v;
    return std::sqrt(s);
}

}  // namespace

double u_statistic(const Sample& adjusted, const WeightMap& weights, const BasisSpec& basis) {
    if (weights.indices.size() != weights.w.size())
        throw std::invalid_argument("u_statistic: weight map arrays differ in length");
    if (std::abs(weight_norm(weights.w) - 1.0) > 1e-8)
        throw std::invalid_argument("u_statistic: weights must have unit l2 norm");
    return quadratic_ustat(adjusted, weights.indices, weights.w, basis);
}

double indefinite_statistic(const Sample& sample, const CoefficientSpec& spec,
                            const BasisSpec& basis, double T) {
    ActiveSet set = active_set(spec, T);
    if (set.size() == 0) throw std::domain_error("indefinite_statistic: N(T) is empty");
    double M = 0.0;
    for (double q : set.q) M += q * q;
    std::vector<double> w(set.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = set.q[i] / std::sqrt(M);
    return quadratic_ustat(sample, set.indices, w, basis);
}

PreparedSharp prepare_sharp(const TestConfig& config) {
    if (config.mode != TestMode::SharpNonnegative)
        throw std::domain_error("prepare_sharp: config is not in sharp mode");
    if (!config.spec.nonnegative())
        throw std::domain_error("prepare_sharp: sharp mode requires a nonnegative functional");
    if (config.n < 16)
        throw std::domain_error(
            "prepare_sharp: n too small for the split-and-pilot design; need n >= 16");

    PreparedSharp prep;
    prep.threshold = normal_quantile(1.0 - config.gamma / 2.0);
    if (config.explicit_weights) {
        prep.weights = *config.explicit_weights;
        if (std::abs(weight_norm(prep.weights.w) - 1.0) > 1e-8)
            throw std::invalid_argument("prepare_sharp: explicit weights must have unit l2 norm");
        return prep;
    }
    ExtremalSolution sol = separation_rate(config.spec, config.n, config.gamma, config.basis,
                                           config.slack, config.T_override);
    prep.weights.indices = sol.set.indices;
    prep.weights.w = sol.weights;
    prep.T = sol.T;
    prep.rate = sol.rate;
    prep.conditions = sol.conditions;
    prep.tuned = true;
    return prep;
}

TestReport run_sharp(const PreparedSharp& prep, const TestConfig& config, const Sample& sample) {
    sample.validate();
    auto [head, tail] = split_sample(sample);
    if (config.tau != 1.0) {
        for (double& v : head.x) v /= config.tau;
        for (double& v : tail.x) v /= config.tau;
    }

    double T_pilot = config.T_pilot ? *config.T_pilot
                                    : default_pilot_threshold(config.spec, tail.size());
    PilotEstimate pilot;
    if (T_pilot > 0.0 && std::isfinite(T_pilot))
        pilot = pilot_fit(tail, config.spec, config.basis, T_pilot, config.pilot_cap);
    else
        pilot.T_pilot = T_pilot;

    Sample adjusted = head;
    if (!pilot.indices.empty())
        for (std::size_t i = 0; i < adjusted.size(); ++i)
            adjusted.x[i] -= pilot_eval(pilot, config.basis, adjusted.point(i));

    TestReport rep;
    rep.statistic = u_statistic(adjusted, prep.weights, config.basis);
    rep.threshold = prep.threshold;
    rep.reject = rep.statistic > rep.threshold;

    if (config.true_theta) {
        const auto m = static_cast<double>(adjusted.size());
        double s = 0.0;
        for (std::size_t l = 0; l < prep.weights.indices.size(); ++l) {
            for (std::size_t j = 0; j < config.true_theta->indices.size(); ++j)
                if (config.true_theta->indices[j] == prep.weights.indices[l]) {
                    double th = config.true_theta->values[j];
                    s += prep.weights.w[l] * th * th;
                    break;
                }
        }
        rep.h_n_predicted = std::sqrt(m * (m - 1) / 2.0) * s;
    }

    rep.diagnostics["m"] = static_cast<double>(adjusted.size());
    rep.diagnostics["n_active"] = static_cast<double>(prep.weights.indices.size());
    rep.diagnostics["pilot_size"] = static_cast<double>(pilot.indices.size());
    rep.diagnostics["T_pilot"] = pilot.T_pilot;
    // which sufficient condition backs the pilot's consistency:
    // 1 = summable c^{-1} (needs 2 min sigma_j > d), 2 = Sobolev embedding
    // (sigma_bar > d/4), 0 = neither is verifiable here
    {
        double branch = 0.0;
        const int d = config.spec.dimension();
        if (auto* s = std::get_if<SobolevDerivative>(&config.spec.family)) {
            double smin = *std::min_element(s->sigma.begin(), s->sigma.end());
            branch = 2.0 * smin > d ? 1.0 : (config.spec.sigma_bar() > d / 4.0 ? 2.0 : 0.0);
        } else if (!std::holds_alternative<FiniteList>(config.spec.family)) {
            branch = config.spec.sigma_bar() > d / 4.0 ? 2.0 : 0.0;
        }
        rep.diagnostics["c6_branch"] = branch;
        rep.diagnostics["c7_ok"] =
            !std::holds_alternative<FiniteList>(config.spec.family) &&
                    config.spec.sigma_bar() > d / 4.0
                ? 1.0
                : 0.0;
    }
    if (prep.tuned) {
        rep.diagnostics["T"] = prep.T;
        rep.diagnostics["rate"] = prep.rate;
        rep.diagnostics["c1_constant"] = prep.conditions.c1_constant;
        rep.diagnostics["c2_ratio"] = prep.conditions.c2_ratio;
        rep.diagnostics["c3_constant"] = prep.conditions.c3_constant;
        rep.diagnostics["c4_ratio"] = prep.conditions.c4_ratio;
        rep.diagnostics["c5_value"] = prep.conditions.c5_value;
        rep.diagnostics["c1_ok"] = prep.conditions.c1_ok;
        rep.diagnostics["c2_ok"] = prep.conditions.c2_ok;
        rep.diagnostics["c3_ok"] = prep.conditions.c3_ok;
        rep.diagnostics["c4_ok"] = prep.conditions.c4_ok;
        rep.diagnostics["c5_ok"] = prep.conditions.c5_ok;
    }
    return rep;
}

TestReport sharp_test(const Sample& sample, const TestConfig& config) {
    TestConfig cfg = config;
    cfg.n = static_cast<long>(sample.size());
    return run_sharp(prepare_sharp(cfg), cfg, sample);
}

double indefinite_threshold(double n, double T, double M, double gamma, double B1, double B2) {
    return n / (T * std::sqrt(2.0 * M)) + std::sqrt((B1 + B2 * n / M) / gamma);
}

double guaranteed_rho2(double n, double T, double M, double gamma, double B1, double B2) {
    return 2.0 * std::sqrt(2.0) / (std::sqrt(gamma) * n) * std::sqrt(B1 * M + B2 * n) + 2.0 / T;
}

PreparedIndefinite prepare_indefinite(const TestConfig& config) {
    if (config.mode != TestMode::Indefinite)
        throw std::domain_error("prepare_indefinite: config is not in indefinite mode");
    if (!config.class_bounds)
        throw std::domain_error("prepare_indefinite: class bounds D3, D4 must be supplied");

    PreparedIndefinite prep;
    prep.T = config.T_override ? *config.T_override : two_regime_rate(config.spec, config.n).T;
    prep.set = active_set(config.spec, prep.T);
    if (prep.set.size() == 0) throw std::domain_error("prepare_indefinite: N(T) is empty");

    double max_q2 = 0.0;
    for (double q : prep.set.q) {
        prep.M += q * q;
        max_q2 = std::max(max_q2, q * q);
    }
    prep.weights.indices = prep.set.indices;
    prep.weights.w.resize(prep.set.size());
    for (std::size_t i = 0; i < prep.set.size(); ++i)
        prep.weights.w[i] = prep.set.q[i] / std::sqrt(prep.M);

    prep.bounds.D1 = static_cast<double>(prep.set.size()) * max_q2 / prep.M;
    prep.bounds.D2 = grid_sup_sum_sq(config.basis, prep.set.indices,
                                     config.spec.ambient_dimension()) /
                     static_cast<double>(prep.set.size());
    prep.bounds.D3 = config.class_bounds->D3;
    prep.bounds.D4 = config.class_bounds->D4;

    const auto n = static_cast<double>(config.n);
    prep.threshold =
        indefinite_threshold(n, prep.T, prep.M, config.gamma, prep.bounds.B1(), prep.bounds.B2());
    prep.rho2_guaranteed =
        guaranteed_rho2(n, prep.T, prep.M, config.gamma, prep.bounds.B1(), prep.bounds.B2());
    return prep;
}

TestReport run_indefinite(const PreparedIndefinite& prep, const TestConfig& config,
                          const Sample& sample) {
    sample.validate();
    TestReport rep;
    Sample scaled = sample;
    if (config.tau != 1.0)
        for (double& v : scaled.x) v /= config.tau;
    rep.statistic = quadratic_ustat(scaled, prep.weights.indices, prep.weights.w, config.basis);
    rep.threshold = prep.threshold;
    rep.reject = std::abs(rep.statistic) > rep.threshold;

    if (config.true_theta) {
        const auto n = static_cast<double>(sample.size());
        double s = 0.0;
        for (std::size_t l = 0; l < prep.weights.indices.size(); ++l)
            for (std::size_t j = 0; j < config.true_theta->indices.size(); ++j)
                if (config.true_theta->indices[j] == prep.weights.indices[l]) {
                    double th = config.true_theta->values[j];
                    s += prep.weights.w[l] * th * th;
                    break;
                }
        rep.h_n_predicted = std::sqrt(n * (n - 1) / 2.0) * s;
    }

    rep.diagnostics["T"] = prep.T;
    rep.diagnostics["M"] = prep.M;
    rep.diagnostics["n_active"] = static_cast<double>(prep.set.size());
    rep.diagnostics["D1"] = prep.bounds.D1;
    rep.diagnostics["D2"] = prep.bounds.D2;
    rep.diagnostics["D3"] = prep.bounds.D3;
    rep.diagnostics["D4"] = prep.bounds.D4;
    rep.diagnostics["B1"] = prep.bounds.B1();
    rep.diagnostics["B2"] = prep.bounds.B2();
    rep.diagnostics["rho2_guaranteed"] = prep.rho2_guaranteed;
    if (config.rho2_claimed) {
        rep.diagnostics["rho2_claimed"] = *config.rho2_claimed;
        rep.diagnostics["outside_guarantee"] =
            (*config.rho2_claimed < prep.rho2_guaranteed) ? 1.0 : 0.0;
    }
    return rep;
}

TestReport indefinite_test(const Sample& sample, const TestConfig& config) {
    TestConfig cfg = config;
    cfg.n = static_cast<long>(sample.size());
    return run_indefinite(prepare_indefinite(cfg), cfg, sample);
}

ClassBounds default_class_bounds(const CoefficientSpec& spec, const BasisSpec& basis, double T) {
    // upper bound on the sum over the full index set of c_l^{-1}: a box sum
    // plus an analytic tail (Euler-Maclaurin in d = 1, a crude shell bound
    // otherwise); summability needs 2 min_j sigma_j > d
    const int d = spec.dimension();
    const int tags = spec.two_sample() ? 2 : 1;
    double sigma_min;
    if (auto* s = std::get_if<SobolevDerivative>(&spec.family))
        sigma_min = *std::min_element(s->sigma.begin(), s->sigma.end());
    else if (auto* t = std::get_if<TwoSampleNorm>(&spec.family))
        sigma_min = *std::min_element(t->sigma.begin(), t->sigma.end());
    else if (auto* si = std::get_if<SingleIndex>(&spec.family))
        sigma_min = si->sigma;
    else
        throw std::domain_error("default_class_bounds: no closed-form family supplied");
    if (!(2.0 * sigma_min > d))
        throw std::runtime_error(
            "default_class_bounds: sum of c_l^{-1} diverges (needs 2 min sigma_j > d); "
            "supply D3, D4 explicitly");

    double total = 0.0;
    const long L = d == 1 ? 4096 : 48;
    std::vector<long> odo(d, -L);
    for (;;) {
        bool zero = true;
        for (int j = 0; j < d; ++j) zero &= odo[j] == 0;
        if (!zero) {
            Index ix;
            ix.lattice.assign(odo.begin(), odo.end());
            ix.tag = spec.two_sample() ? 1 : 0;
            double c = coeff(spec, ix).c;
            if (c > 0) total += tags / c;
        }
        int axis = 0;
        while (axis < d) {
            if (++odo[axis] <= L) break;
            odo[axis] = -L;
            ++axis;
        }
        if (axis == d) break;
    }
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    if (d == 1) {
        // sum_{k>L} (2 pi k)^{-2 sigma}, Euler-Maclaurin through the 1/12 term
        double s = 2.0 * sigma_min;
        double tail = std::pow(static_cast<double>(L), 1.0 - s) / (s - 1.0) +
                      0.5 * std::pow(static_cast<double>(L), -s) +
                      s / 12.0 * std::pow(static_cast<double>(L), -s - 1.0);
        total += tags * 2.0 * std::pow(kTwoPi, -s) * tail;
    } else {
        // points with max_j |l_j| = k > L: at most 2d(2k+1)^{d-1} of them,
        // each with c >= (2 pi k)^{2 sigma_min}
        double s = 2.0 * sigma_min;
        double tail = 0.0;
        for (long k = L + 1; k < 100 * L; ++k)
            tail += 2.0 * d * std::pow(2.0 * k + 1.0, d - 1) / std::pow(kTwoPi * k, s);
        double kmax = 100.0 * L;
        tail += 2.0 * d * std::pow(3.0, d - 1) / std::pow(kTwoPi, s) *
                std::pow(kmax, d - s) / (s - d);
        total += tags * tail;
    }

    double B_inf = std::sqrt(sup_sq_bound(basis));
    double D5 = B_inf * std::sqrt(total);

    double max_q2_over_c = 0.0;
    for_each_active(spec, T, [&](const Index&, double c, double q) {
        if (c > 0) max_q2_over_c = std::max(max_q2_over_c, q * q / c);
    });
    return ClassBounds{D5, D5 * std::sqrt(max_q2_over_c)};
}

}  // namespace qf
