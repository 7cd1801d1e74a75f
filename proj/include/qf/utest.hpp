#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qf/estimator.hpp"
#include "qf/extremal.hpp"

namespace qf {

struct WeightMap {
    std::vector<Index> indices;
    std::vector<double> w;  // ||w||_2 = 1
};

enum class TestMode { SharpNonnegative, Indefinite };

// Class-dependent moment bounds for the indefinite test (declared inputs;
// defaults for the Sobolev families come from default_class_bounds).
struct ClassBounds {
    double D3 = 0.0;  // sup ||f||_4
    double D4 = 0.0;  // sup ||f . T_Q f||_2
};

struct IndefiniteThresholdConfig {
    double D1 = 0.0;  // computed: |N| max q^2 / M
    double D2 = 0.0;  // computed: grid sup of sum phi^2 / |N|
    double D3 = 0.0;  // supplied
    double D4 = 0.0;  // supplied
    double B1() const { return 6.0 + 12.0 * D1 * D2 * D3 * D3 + 6.0 * D1 * D2 * D3 * D3 * D3 * D3; }
    double B2() const { return 4.0 * D4; }
};

struct TestConfig {
    long n = 0;
    double gamma = 0.05;
    CoefficientSpec spec;
    BasisSpec basis;
    TestMode mode = TestMode::SharpNonnegative;

    std::optional<WeightMap> explicit_weights;  // else optimal weights from the extremal solver
    std::optional<double> T_override;
    TuningSlack slack = TuningSlack::None;

    std::optional<double> T_pilot;  // default: default_pilot_threshold on the pilot part
    double pilot_cap = -1.0;        // forwarded to pilot_fit (-1: default)
    double tau = 1.0;               // known noise standard deviation; responses are divided by it

    std::optional<ClassBounds> class_bounds;   // indefinite mode
    std::optional<ThetaMap> true_theta;        // simulation mode: h_n prediction
    std::optional<double> rho2_claimed;        // indefinite: flags "outside guarantee"
};

struct TestReport {
    double statistic = 0.0;
    double threshold = 0.0;
    bool reject = false;
    std::optional<double> h_n_predicted;
    std::map<std::string, double> diagnostics;
};

// Deterministic split: first m = n - floor(sqrt n) points for the
// U-statistic, the tail for the pilot.
std::pair<Sample, Sample> split_sample(const Sample& sample);

// Linear U-statistic in factorized form,
//   sum_l w_l [ (sum_i x_i phi_l(t_i))^2 - sum_i x_i^2 phi_l(t_i)^2 ] / sqrt(2 m (m-1)).
// Requires ||w||_2 = 1 within 1e-8 and m >= 2.
double u_statistic(const Sample& adjusted, const WeightMap& weights, const BasisSpec& basis);

// Signed-kernel statistic binom(n,2)^{-1/2} sum_{i<j} x_i x_j G_T(t_i,t_j)
// with G_T = M(T)^{-1/2} sum_{N(T)} q_l phi_l phi_l; raw responses, no split.
double indefinite_statistic(const Sample& sample, const CoefficientSpec& spec,
                            const BasisSpec& basis, double T);

// Data-independent preparation (weights, thresholds); reused across
// replications by the simulation harness.
struct PreparedSharp {
    WeightMap weights;
    double threshold = 0.0;  // z_{1-gamma/2}
    double T = 0.0;          // 0 when the weights were supplied explicitly
    double rate = 0.0;
    ConditionReport conditions;
    bool tuned = false;
};
PreparedSharp prepare_sharp(const TestConfig& config);
TestReport run_sharp(const PreparedSharp& prep, const TestConfig& config, const Sample& sample);
TestReport sharp_test(const Sample& sample, const TestConfig& config);

struct PreparedIndefinite {
    double T = 0.0;
    ActiveSet set;
    WeightMap weights;  // q_l / sqrt(M)
    double M = 0.0;
    IndefiniteThresholdConfig bounds;
    double threshold = 0.0;
    double rho2_guaranteed = 0.0;
};
PreparedIndefinite prepare_indefinite(const TestConfig& config);
TestReport run_indefinite(const PreparedIndefinite& prep, const TestConfig& config,
                          const Sample& sample);
TestReport indefinite_test(const Sample& sample, const TestConfig& config);

double indefinite_threshold(double n, double T, double M, double gamma, double B1, double B2);
double guaranteed_rho2(double n, double T, double M, double gamma, double B1, double B2);

// [D4-1]-style defaults for the Sobolev families: D5 = sup ||f||_inf from
// the ellipsoid via sum c_l^{-1}, D3 = D5, D4 = D5 max_{N(T)} (q^2/c)^{1/2}.
ClassBounds default_class_bounds(const CoefficientSpec& spec, const BasisSpec& basis, double T);

}  // namespace qf
