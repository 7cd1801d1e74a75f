#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qf/basis.hpp"
#include "qf/spectra.hpp"

namespace qf {

// Finitely supported coefficient array theta (true signal in simulations,
// alternatives, prior draws).
struct ThetaMap {
    std::vector<Index> indices;
    std::vector<double> values;
};

// Observations (t_i, x_i) with t_i in the unit cube, stored row-major.
struct Sample {
    int dimension = 1;
    std::vector<double> t;  // size() * dimension
    std::vector<double> x;

    std::size_t size() const { return x.size(); }
    std::span<const double> point(std::size_t i) const {
        return {t.data() + i * static_cast<std::size_t>(dimension),
                static_cast<std::size_t>(dimension)};
    }
    void validate() const;  // unit-cube membership, consistent lengths
};

// hat theta_l = (1/n) sum_i x_i phi_l(t_i)
double empirical_coeff(const Sample& sample, const Index& ix, const BasisSpec& basis);

struct PilotEstimate {
    double T_pilot = 0.0;
    std::vector<Index> indices;        // subset of S_F^c with c_l < T_pilot
    std::vector<double> coefficients;  // empirical coefficients on those indices
};

// Largest T with |N1(T)| <= min(n^{0.4}, sqrt(n)/4); +infinity when S_F^c
// is empty or the complement never reaches the cap.
double default_pilot_threshold(const CoefficientSpec& spec, std::size_t n);

// Fit the pilot on N1(T_pilot) = {l in S_F^c : c_l < T_pilot}.  cap_override
// replaces the default support cap sqrt(n)/4; exceeding the cap throws.
PilotEstimate pilot_fit(const Sample& sample, const CoefficientSpec& spec, const BasisSpec& basis,
                        double T_pilot, double cap_override = -1.0);

double pilot_eval(const PilotEstimate& pilot, const BasisSpec& basis, std::span<const double> t);

}  // namespace qf
