#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "qf/basis.hpp"
#include "qf/spectra.hpp"

namespace qf {

struct TuningError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InfeasibleSeparation : std::runtime_error {
    double attainable_sup;  // sup over T of the separation ratio
    InfeasibleSeparation(const std::string& what, double sup)
        : std::runtime_error(what), attainable_sup(sup) {}
};

// Finite-sample handling of the tuning equation's vanishing slack term:
//   None            solve the slack-free equation exactly
//   VarianceMatched replace the factor 2 z by z (1 + s(T)) with
//                   s(T)^2 = 1 + 2 m sum_l w_l(T)^2 v_l(T), the leading
//                   variance of the statistic at the least-favorable
//                   alternative; s -> 1 as n grows, so both solve the same
//                   asymptotic relation
enum class TuningSlack { None, VarianceMatched };

// Diagnostics for the sharp-test regularity conditions at the tuned T.
// The conditions are asymptotic; the artifact reports the finite-n
// constants and flags them against fixed heuristic levels.
struct ConditionReport {
    double c1_constant = 0.0;  // |N| max q^2 / sum (q - c/T)^2
    double c2_ratio = 0.0;     // sum_N q^2 / (n^2 min_N q^2)
    double c3_constant = 0.0;  // grid sup of sum_N phi^2 / |N|
    double c4_ratio = 0.0;     // |N| / n
    double c5_value = 0.0;     // T inf_{S_F} |q|
    bool c1_ok = false, c2_ok = false, c3_ok = false, c4_ok = false, c5_ok = false;
};

struct ExtremalSolution {
    double T = 0.0;
    ActiveSet set;                         // N(T)
    std::vector<double> weights;           // w*_l, ||w*||_2 = 1
    std::vector<double> least_favorable;   // v*_l
    double rate = 0.0;                     // r*_{n,gamma}
    double gamma = 0.0;
    long n = 0;
    ConditionReport conditions;
};

// T_rho solving  sum q (Tq - c)_+ / sum c (Tq - c)_+ = rho^2  (nonnegative
// families; the ratio is continuous and nonincreasing in T).  Throws
// InfeasibleSeparation when rho^2 is outside the attainable range.
double solve_T_rho(const CoefficientSpec& spec, double rho);

// T_{n,gamma} solving
//   (m(m-1)/2 sum (Tq-c)_+^2)^{1/2} = (sum c (Tq-c)_+) z (1 + s(T)),
// m = n - floor(sqrt n), s per the slack policy (s = 1 when None).
// Log-scale bisection with geometric bracket growth; a dense scan backs up
// the bracket test, and TuningError carries diagnostics when no sign
// change exists (the equation has no finite-n solution).
double solve_T_n_gamma(const CoefficientSpec& spec, long n, double gamma,
                       TuningSlack slack = TuningSlack::None);

// Assembles the optimal-weight solution at T (tuned unless overridden):
//   w*_l = (Tq-c)_+ / ||(Tq-c)_+||_2,  v*_l = (Tq-c)_+ / sum c (Tq-c)_+,
//   r*^2 = sum q (Tq-c)_+ / sum c (Tq-c)_+.
ExtremalSolution separation_rate(const CoefficientSpec& spec, long n, double gamma,
                                 const BasisSpec& basis, TuningSlack slack = TuningSlack::None,
                                 std::optional<double> T_override = std::nullopt);

// Best-effort oracle: minimize ||v||_2 over v >= 0, <v,c> <= 1,
// <v,q> >= rho^2 by projected gradient descent (Dykstra projections) with
// random restarts.  Intended for small instances only.
struct SaddleResult {
    bool feasible = false;
    double value = 0.0;          // ||v||_2 at the best iterate
    std::vector<double> v;
    double kkt_residual = 0.0;   // max stationarity/complementarity violation
};
SaddleResult saddle_value_bruteforce(std::span<const double> c, std::span<const double> q,
                                     double rho, int restarts = 16, std::uint64_t seed = 1);

// KKT witness for the analytic pair at threshold T: with
// D = sum c (Tq-c)_+ the multipliers lambda = 2/D, mu = 2T/D,
// nu_l = 2(c_l - T q_l)_+/D certify optimality; returns the residual of
// 2v + lambda c - mu q - nu.
double kkt_residual_analytic(std::span<const double> c, std::span<const double> q,
                             std::span<const double> v, double T);

// Closed-form minimax rate for the partial-derivative functional over the
// anisotropic Sobolev ellipsoid.
struct ClosedFormRate {
    double delta = 0.0;
    double sigma_bar = 0.0;
    std::vector<double> kappa_parts;
    double kappa = 0.0;
    double C_dsa = 0.0;          // C(d, sigma, alpha)
    double rate_exponent = 0.0;  // 2 sigma_bar (1-delta) / (4 sigma_bar + d)
    double C_star = 0.0;
    double r_star = 0.0;         // C_star n^{-rate_exponent}
    double T_asymptotic = 0.0;   // (C_star n^{-exponent})^{-2} (1 + 2/kappa)
};
ClosedFormRate closed_form_rate_derivative(std::span<const double> sigma,
                                           std::span<const double> alpha, int d, long n,
                                           double gamma);

// Constants of the single-index goodness-of-fit example, computed by
// adaptive quadrature of the compactly supported integrands.
struct SingleIndexConstants {
    double C0_bar = 0.0;
    double C1_bar = 0.0;
    double C2_bar = 0.0;
    double quadrature_error = 0.0;
};
SingleIndexConstants single_index_constants(std::span<const double> beta, double sigma, int d,
                                            double tol = 1e-4);

struct SingleIndexRate {
    SingleIndexConstants constants;
    double rate_exponent = 0.0;  // 2 (sigma-1) / (4 sigma + d)
    double C_star = 0.0;
    double r_star = 0.0;
    double T_asymptotic = 0.0;   // (C_star r_n*)^{-2} C1_bar/C2_bar
};
SingleIndexRate closed_form_rate_single_index(std::span<const double> beta, double sigma, int d,
                                              long n, double gamma,
                                              const SingleIndexConstants* precomputed = nullptr);

// Indefinite-functional truncation: T_n^0 balancing T sqrt(M(T)) = n,
// T_n = min(T_n^0, sqrt n); rate T_n^{-1/2}; the regime is regular when
// sqrt(n) <= T_n^0.
struct TwoRegimeRate {
    double T0 = 0.0;
    double T = 0.0;
    double rate = 0.0;
    bool regular = false;
};
TwoRegimeRate two_regime_rate(const CoefficientSpec& spec, long n);

// Rate-only balance n r^2 = M(r^{-2})^{1/2} for nonnegative families.
double rate_from_balance(const CoefficientSpec& spec, long n);

// Condition diagnostics at a given solution (exposed for reuse by tests).
ConditionReport check_conditions(const CoefficientSpec& spec, const BasisSpec& basis,
                                 const ActiveSet& set, long n);

}  // namespace qf
