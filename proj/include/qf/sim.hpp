#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qf/utest.hpp"

namespace qf {

struct NoiseSpec {
    enum class Kind { Gaussian, Rademacher, ScaledStudent };
    Kind kind = Kind::Gaussian;
    double df = 9.0;  // ScaledStudent degrees of freedom, must exceed 4

    double fourth_moment() const;
    void validate() const;
};

// x_i = sum_l theta_l phi_l(t_i) + xi_i with t_i iid uniform on the cube.
// Per point the generator draws the coordinates, then the noise, so the
// sample is bit-reproducible for a fixed seed.
Sample generate_data(const ThetaMap& theta, const BasisSpec& basis, std::size_t n,
                     int ambient_dim, const NoiseSpec& noise, std::uint64_t seed);

struct RepRecord {
    int rep = 0;
    double statistic = 0.0;
    double threshold = 0.0;
    bool reject = false;
    int hypothesis = 0;  // 0: null, 1: alternative
};

struct ErrorEstimates {
    double type1 = 0.0;
    double type1_se = 0.0;
    std::optional<double> type2;
    std::optional<double> type2_se;
    double cumulative = 0.0;
    int replications = 0;
    std::uint64_t seed = 0;
};

struct MonteCarloResult {
    ErrorEstimates estimates;
    std::vector<RepRecord> records;
};

// Runs the configured test on fresh data per replication.  Replication k
// draws from the stream derive_seed(seed, k) (alternative replications are
// offset by reps), so results do not depend on the thread schedule.
MonteCarloResult monte_carlo(const TestConfig& config, const NoiseSpec& noise,
                             const ThetaMap& f_null, const std::optional<ThetaMap>& f_alt,
                             int reps, std::uint64_t seed, int threads = 1);

struct WilksResult {
    double ks = 0.0;     // Kolmogorov-Smirnov distance to the standard normal
    double type1 = 0.0;  // rejection frequency at the configured threshold
    std::vector<double> statistics;
};

// Distribution of the statistic under f = 0.
WilksResult wilks_diagnostic(const TestConfig& config, const NoiseSpec& noise, int reps,
                             std::uint64_t seed, int threads = 1);

double ks_distance_to_normal(std::vector<double> values);

}  // namespace qf
