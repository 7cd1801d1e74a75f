#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "qf/index.hpp"

namespace qf {

// c_l = sum_j (2pi l_j)^{2 sigma_j},  q_l = prod_j |2pi l_j|^{2 alpha_j}
// on Z^d \ {0}.  Requires delta = sum_j alpha_j/sigma_j < 1 and harmonic
// mean sigma_bar > d/4.
struct SobolevDerivative {
    std::vector<double> sigma;
    std::vector<double> alpha;
};

// c_l = sum_i (2pi l_i)^{2 sigma},  q_l = (2pi)^2 (|l|^2 - (beta.l)^2)
// with a unit vector beta; S_F excludes the lattice line parallel to beta.
struct SingleIndex {
    double sigma = 2.0;
    std::vector<double> beta;
};

// Two-sample index set Z^d x {1,2}: c_(m,s) = sum_j (2pi m_j)^{2 sigma_j},
// q_(m,s) = (-1)^s prod_j |2pi m_j|^{2 alpha_j}.
struct TwoSampleNorm {
    std::vector<double> sigma;
    std::vector<double> alpha;
};

// Explicit finite coefficient list; escape hatch for tests and toy problems.
struct FiniteListEntry {
    Index index;
    double c = 0.0;
    double q = 0.0;
};
struct FiniteList {
    int ambient_dimension = 1;
    std::vector<FiniteListEntry> entries;
};

struct CoefficientSpec {
    std::variant<SobolevDerivative, SingleIndex, TwoSampleNorm, FiniteList> family;

    int dimension() const;          // lattice dimension d
    int ambient_dimension() const;  // d, or 2d for the two-sample family
    bool two_sample() const;
    bool nonnegative() const;  // all q_l >= 0 on S_F
    double delta() const;      // sum alpha_j / sigma_j (0 for SingleIndex)
    double sigma_bar() const;  // harmonic mean of sigma
    void validate() const;     // throws std::domain_error naming the violated constraint
};

struct Coefficients {
    double c;
    double q;
};

// Closed-form coefficient pair; throws on a zero lattice index.
Coefficients coeff(const CoefficientSpec& spec, const Index& ix);

// Smallest c_l/|q_l| over S_F (threshold where N(T) first becomes nonempty).
double first_entry_threshold(const CoefficientSpec& spec);

// inf of |q_l| over S_F; exact for the derivative/two-sample families,
// taken over the finite list otherwise.
double inf_abs_q_over_support(const CoefficientSpec& spec);

struct ActiveSet {
    double threshold = 0.0;
    std::vector<Index> indices;  // enumeration order: lattice odometer, tag inner
    std::vector<double> c;
    std::vector<double> q;

    std::size_t size() const { return indices.size(); }
};

struct EnumerationLimits {
    long max_axis_extent = 1 << 21;          // per-axis |l_j| cap
    std::size_t max_points = 80'000'000;     // scanned-lattice-point cap
};

struct ActiveSetTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// N(T) = {l in S_F : c_l < T |q_l|}, strict inequality at the boundary.
// The search box is seeded from the analytic per-axis bound implied by
// c_l < T|q_l| where one exists, then grown until a full outer shell
// contributes nothing; unbounded growth trips EnumerationLimits.
ActiveSet active_set(const CoefficientSpec& spec, double T,
                     const EnumerationLimits& limits = {});

// Streaming visit of N(T) members as (index, c, q); same order and growth
// rules as active_set without materializing the set.
void for_each_active(const CoefficientSpec& spec, double T,
                     const std::function<void(const Index&, double, double)>& visit,
                     const EnumerationLimits& limits = {});

struct SpectralSums {
    double I0 = 0.0;  // sum (q - c/T)_+^2
    double I1 = 0.0;  // sum q (q - c/T)_+
    double I2 = 0.0;  // I1 - I0
    double M = 0.0;   // sum over N(T) of q^2
    double M_plus = 0.0;
    double M_minus = 0.0;
    std::size_t count = 0;
    std::size_t N_star = 0;  // count of the dominant sign class
};

SpectralSums spectral_sums(const ActiveSet& set);
SpectralSums spectral_sums(const CoefficientSpec& spec, double T,
                           const EnumerationLimits& limits = {});

// N1(T) = {l in S_F^c : c_l < T}; support candidates for the pilot
// estimator.  Empty whenever q never vanishes (detection-type functionals).
std::vector<Index> low_c_complement(const CoefficientSpec& spec, double T,
                                    const EnumerationLimits& limits = {});

}  // namespace qf
