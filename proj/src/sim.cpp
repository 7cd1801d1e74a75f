#include "qf/sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

#include "qf/gaussian.hpp"
#include "qf/rng.hpp"

namespace qf {

double NoiseSpec::fourth_moment() const {
    switch (kind) {
        case Kind::Gaussian: return 3.0;
        case Kind::Rademacher: return 1.0;
        case Kind::ScaledStudent: return 3.0 * (df - 2.0) / (df - 4.0);
    }
    return 3.0;
}

void NoiseSpec::validate() const {
    if (kind == Kind::ScaledStudent && !(df > 4.0))
        throw std::domain_error("noise: Student df must exceed 4 (finite fourth moment)");
}

Sample generate_data(const ThetaMap& theta, const BasisSpec& basis, std::size_t n,
                     int ambient_dim, const NoiseSpec& noise, std::uint64_t seed) {
    noise.validate();
    Rng rng(seed);
    Sample s;
    s.dimension = ambient_dim;
    s.t.resize(n * static_cast<std::size_t>(ambient_dim));
    s.x.resize(n);
    std::vector<double> pt(ambient_dim);
    for (std::size_t i = 0; i < n; ++i) {
        for (int j = 0; j < ambient_dim; ++j) {
            pt[j] = rng.uniform();
            s.t[i * ambient_dim + j] = pt[j];
        }
        double f = 0.0;
        for (std::size_t l = 0; l < theta.indices.size(); ++l)
            f += theta.values[l] * eval_index(basis, theta.indices[l], pt);
        double xi;
        switch (noise.kind) {
            case NoiseSpec::Kind::Gaussian: xi = rng.normal(); break;
            case NoiseSpec::Kind::Rademacher: xi = rng.rademacher(); break;
            default: xi = rng.student_unit(noise.df); break;
        }
        s.x[i] = f + xi;
    }
    return s;
}

namespace {

struct PreparedAny {
    std::optional<PreparedSharp> sharp;
    std::optional<PreparedIndefinite> indefinite;
};

PreparedAny prepare(const TestConfig& config) {
    PreparedAny p;
    if (config.mode == TestMode::SharpNonnegative)
        p.sharp = prepare_sharp(config);
    else
        p.indefinite = prepare_indefinite(config);
    return p;
}

TestReport run_prepared(const PreparedAny& prep, const TestConfig& config, const Sample& sample) {
    if (prep.sharp) return run_sharp(*prep.sharp, config, sample);
    return run_indefinite(*prep.indefinite, config, sample);
}

// Parallel over replications; each worker owns a contiguous block and every
// replication derives its own stream, so output is schedule-independent.
template <class Fn>
void parallel_reps(int reps, int threads, Fn&& body) {
    threads = std::max(1, std::min(threads, reps));
    if (threads == 1) {
        for (int r = 0; r < reps; ++r) body(r);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    int chunk = (reps + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                int lo = w * chunk, hi = std::min(reps, lo + chunk);
                for (int r = lo; r < hi; ++r) body(r);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

MonteCarloResult monte_carlo(const TestConfig& config, const NoiseSpec& noise,
                             const ThetaMap& f_null, const std::optional<ThetaMap>& f_alt,
                             int reps, std::uint64_t seed, int threads) {
    if (reps < 100) throw std::domain_error("monte_carlo: need at least 100 replications");
    const PreparedAny prep = prepare(config);
    const int total = f_alt ? 2 * reps : reps;

    MonteCarloResult out;
    out.records.resize(total);
    const auto n = static_cast<std::size_t>(config.n);
    const int dim = config.spec.ambient_dimension();

    auto body = [&](int r) {
        bool alt = r >= reps;
        const ThetaMap& th = alt ? *f_alt : f_null;
        try {
            Sample data = generate_data(th, config.basis, n, dim, noise,
                                        derive_seed(seed, static_cast<std::uint64_t>(r)));
            TestReport rep = run_prepared(prep, config, data);
            out.records[r] = {r, rep.statistic, rep.threshold, rep.reject, alt ? 1 : 0};
        } catch (const std::exception& e) {
            throw std::runtime_error("monte_carlo: replication " + std::to_string(r) +
                                     " failed: " + e.what());
        }
    };

    parallel_reps(total, threads, body);

    int rej_null = 0, acc_alt = 0;
    for (int r = 0; r < reps; ++r) rej_null += out.records[r].reject ? 1 : 0;
    if (f_alt)
        for (int r = reps; r < total; ++r) acc_alt += out.records[r].reject ? 0 : 1;

    auto& est = out.estimates;
    est.replications = reps;
    est.seed = seed;
    est.type1 = static_cast<double>(rej_null) / reps;
    est.type1_se = std::sqrt(est.type1 * (1.0 - est.type1) / reps);
    if (f_alt) {
        est.type2 = static_cast<double>(acc_alt) / reps;
        est.type2_se = std::sqrt(*est.type2 * (1.0 - *est.type2) / reps);
    }
    est.cumulative = est.type1 + est.type2.value_or(0.0);
    return out;
}

WilksResult wilks_diagnostic(const TestConfig& config, const NoiseSpec& noise, int reps,
                             std::uint64_t seed, int threads) {
    const PreparedAny prep = prepare(config);
    WilksResult out;
    out.statistics.resize(reps);
    std::vector<char> rejected(reps, 0);
    const auto n = static_cast<std::size_t>(config.n);
    const int dim = config.spec.ambient_dimension();
    ThetaMap zero;

    parallel_reps(reps, threads, [&](int r) {
        Sample data = generate_data(zero, config.basis, n, dim, noise,
                                    derive_seed(seed, static_cast<std::uint64_t>(r)));
        TestReport rep = run_prepared(prep, config, data);
        out.statistics[r] = rep.statistic;
        rejected[r] = rep.reject ? 1 : 0;
    });

    int rej = 0;
    for (char c : rejected) rej += c;
    out.type1 = static_cast<double>(rej) / reps;
    out.ks = ks_distance_to_normal(out.statistics);
    return out;
}

double ks_distance_to_normal(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const auto n = static_cast<double>(values.size());
    double d = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        double F = normal_cdf(values[i]);
        d = std::max(d, (i + 1) / n - F);
        d = std::max(d, F - i / n);
    }
    return d;
}

}  // namespace qf
