#include "qf/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qf {

void Sample::validate() const {
    if (dimension < 1) throw std::domain_error("sample: dimension must be >= 1");
    if (x.size() < 4) throw std::domain_error("sample: need at least 4 observations");
    if (t.size() != x.size() * static_cast<std::size_t>(dimension))
        throw std::domain_error("sample: point/response length mismatch");
    for (double v : t)
        if (!(v >= 0.0 && v <= 1.0)) throw std::domain_error("sample: design point outside [0,1]^d");
}

double empirical_coeff(const Sample& sample, const Index& ix, const BasisSpec& basis) {
    const std::size_t n = sample.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += sample.x[i] * eval_index(basis, ix, sample.point(i));
    return acc / static_cast<double>(n);
}

double default_pilot_threshold(const CoefficientSpec& spec, std::size_t n) {
    const double nd = static_cast<double>(n);
    const auto cap = static_cast<std::size_t>(
        std::floor(std::min(std::pow(nd, 0.4), std::sqrt(nd) / 4.0)));
    if (cap == 0) return 0.0;

    // collect the first cap+1 complement c-values by growing the bound
    double bound = 64.0;
    for (int it = 0; it < 60; ++it) {
        auto idx = low_c_complement(spec, bound);
        if (idx.size() > cap) {
            std::vector<double> cs;
            cs.reserve(idx.size());
            for (const auto& ix : idx) cs.push_back(coeff(spec, ix).c);
            std::nth_element(cs.begin(), cs.begin() + cap, cs.end());
            return cs[cap];  // strict inequality keeps exactly `cap` members
        }
        bound *= 8.0;
    }
    return std::numeric_limits<double>::infinity();  // complement never reaches the cap
}

PilotEstimate pilot_fit(const Sample& sample, const CoefficientSpec& spec, const BasisSpec& basis,
                        double T_pilot, double cap_override) {
    sample.validate();
    PilotEstimate pe;
    pe.T_pilot = T_pilot;
    pe.indices = low_c_complement(spec, T_pilot);
    const double cap =
        cap_override >= 0.0 ? cap_override : std::sqrt(static_cast<double>(sample.size())) / 4.0;
    if (static_cast<double>(pe.indices.size()) > cap)
        throw std::runtime_error(
            "pilot_fit: |N1(T_pilot)| = " + std::to_string(pe.indices.size()) +
            " exceeds the support cap " + std::to_string(cap) + "; choose a smaller T_pilot");
    pe.coefficients.reserve(pe.indices.size());
    for (const auto& ix : pe.indices) pe.coefficients.push_back(empirical_coeff(sample, ix, basis));
    return pe;
}

double pilot_eval(const PilotEstimate& pilot, const BasisSpec& basis, std::span<const double> t) {
    double acc = 0.0;
    for (std::size_t i = 0; i < pilot.indices.size(); ++i)
        acc += pilot.coefficients[i] * eval_index(basis, pilot.indices[i], t);
    return acc;
}

}  // namespace qf
