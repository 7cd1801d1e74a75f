#pragma once

#include <cstdint>

#include "qf/estimator.hpp"
#include "qf/extremal.hpp"

namespace qf {

// Gaussian prior on the coefficients: independent theta_l ~ N(0, a_l) with
// a_l = (1 - delta) v*_l on N(T).
struct PriorSpec {
    std::vector<Index> indices;
    std::vector<double> variances;
    double delta = 0.0;
};

PriorSpec prior_from_solution(const ExtremalSolution& sol, double delta);

// One draw from the prior; deterministic per seed.
ThetaMap prior_sample(const PriorSpec& prior, std::uint64_t seed);

// Two-point construction for indefinite functionals: f_0 (in the null) and
// f_1 at separation r_n^2 = z q_{l+} / sqrt(n), supported on the cheapest
// index of each sign class.
struct TwoPointPair {
    Index l_plus, l_minus;
    double q_plus = 0.0, q_minus = 0.0;  // signed
    double c_plus = 0.0, c_minus = 0.0;
    double theta0_plus = 0.0, theta0_minus = 0.0;
    double theta1_plus = 0.0, theta1_minus = 0.0;
    double z = 0.0;
    double rate2 = 0.0;     // z q_{l+} / sqrt(n)
    double kl_bound = 0.0;  // n (theta0_+ - theta1_+)^2, Gaussian noise
};

TwoPointPair two_point_pair(const CoefficientSpec& spec, long n, double z);

// Coefficient map of f_0 (alternative = false) or f_1 (true).
ThetaMap two_point_theta(const TwoPointPair& pair, bool alternative);

}  // namespace qf
