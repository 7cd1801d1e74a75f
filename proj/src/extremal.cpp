#include "qf/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qf/gaussian.hpp"
#include "qf/quadrature.hpp"
#include "qf/rng.hpp"

namespace qf {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct TuneSums {
    double u2 = 0.0;   // sum (Tq-c)_+^2
    double cu = 0.0;   // sum c (Tq-c)_+
    double qu = 0.0;   // sum q (Tq-c)_+
    double u3 = 0.0;   // sum (Tq-c)_+^3
    std::size_t count = 0;
};

TuneSums tune_sums(const CoefficientSpec& spec, double T) {
    TuneSums s;
    for_each_active(spec, T, [&](const Index&, double c, double q) {
        double u = T * q - c;
        if (u <= 0.0) return;
        s.u2 += u * u;
        s.cu += c * u;
        s.qu += q * u;
        s.u3 += u * u * u;
        ++s.count;
    });
    return s;
}

double slack_factor(const TuneSums& s, long m, TuningSlack slack) {
    if (slack == TuningSlack::None || s.u2 <= 0.0 || s.cu <= 0.0) return 1.0;
    // leading variance at the least-favorable alternative:
    // 2 m sum w^2 v = 2 m sum u^3 / (sum u^2 sum c u)
    double infl = 2.0 * static_cast<double>(m) * s.u3 / (s.u2 * s.cu);
    return std::sqrt(1.0 + infl);
}

// LHS/RHS of the tuning equation; crosses 1 at the solution.
double tuning_ratio(const CoefficientSpec& spec, double T, long m, double z, TuningSlack slack) {
    TuneSums s = tune_sums(spec, T);
    if (s.count == 0 || s.cu <= 0.0) return 0.0;
    double lhs = std::sqrt(0.5 * static_cast<double>(m) * (m - 1) * s.u2);
    double rhs = s.cu * z * (1.0 + slack_factor(s, m, slack));
    return lhs / rhs;
}

double separation_ratio(const CoefficientSpec& spec, double T) {
    TuneSums s = tune_sums(spec, T);
    if (s.count == 0 || s.cu <= 0.0) return 0.0;
    return s.qu / s.cu;
}

}  // namespace

double solve_T_rho(const CoefficientSpec& spec, double rho) {
    if (!spec.nonnegative())
        throw std::domain_error("solve_T_rho: requires a nonnegative functional");
    if (!(rho > 0)) throw std::domain_error("solve_T_rho: rho must be positive");
    const double rho2 = rho * rho;
    const double T1 = first_entry_threshold(spec);
    const double sup = 1.0 / T1;  // ratio tends to max q/c as T -> T1+
    if (rho2 > sup * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "solve_T_rho: infeasible separation, rho^2 = " << rho2
           << " is at or above the attainable supremum " << sup;
        throw InfeasibleSeparation(os.str(), sup);
    }

    double lo = T1 * (1.0 + 1e-12);
    double hi = lo * 2.0;
    int guard = 0;
    while (separation_ratio(spec, hi) > rho2) {
        hi *= 2.0;
        if (++guard > 200) {
            double limit = separation_ratio(spec, hi);
            std::ostringstream os;
            os << "solve_T_rho: rho^2 = " << rho2 << " below the attainable limit " << limit
               << " (ratio does not decay to it on any finite T)";
            throw InfeasibleSeparation(os.str(), limit);
        }
    }
    for (int it = 0; it < 300; ++it) {
        double mid = std::sqrt(lo * hi);
        double r = separation_ratio(spec, mid);
        if (std::abs(r - rho2) <= 1e-9 * rho2) return mid;
        (r > rho2 ? lo : hi) = mid;
    }
    return std::sqrt(lo * hi);
}

double solve_T_n_gamma(const CoefficientSpec& spec, long n, double gamma, TuningSlack slack) {
    if (!spec.nonnegative())
        throw std::domain_error("solve_T_n_gamma: requires a nonnegative functional");
    if (!(gamma > 0 && gamma < 1)) throw std::domain_error("solve_T_n_gamma: gamma must lie in (0,1)");
    const long m = n - static_cast<long>(std::floor(std::sqrt(static_cast<double>(n))));
    if (n < 4 || m < 2) throw std::domain_error("solve_T_n_gamma: need n >= 4");
    const double z = normal_quantile(1.0 - gamma / 2.0);

    const double T1 = first_entry_threshold(spec);
    double lo = T1 * (1.0 + 1e-9);
    auto g = [&](double T) { return tuning_ratio(spec, T, m, z, slack); };

    if (g(lo) < 1.0) {
        // no bracket at the left edge; scan for a sign change before giving up
        double best = 0.0, best_T = lo;
        bool found = false;
        double prev = lo;
        for (int i = 1; i <= 400 && !found; ++i) {
            double T = lo * std::pow(10.0, i * (10.0 / 400.0));
            double v = g(T);
            if (v > best) {
                best = v;
                best_T = T;
            }
            if (v >= 1.0) {
                lo = prev;
                found = true;
            }
            prev = T;
        }
        if (!found) {
            std::ostringstream os;
            os << "solve_T_n_gamma: tuning failed, no solution of the threshold equation; "
               << "max LHS/RHS = " << best << " at T = " << best_T << " (m = " << m
               << ", first entry at T = " << T1 << ")";
            throw TuningError(os.str());
        }
    }

    double hi = lo * 2.0;
    int guard = 0;
    while (g(hi) >= 1.0) {
        hi *= 2.0;
        if (++guard > 200) throw TuningError("solve_T_n_gamma: bracket expansion failed");
    }
    while (hi - lo > 1e-13 * lo) {
        double mid = std::sqrt(lo * hi);
        (g(mid) >= 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

ConditionReport check_conditions(const CoefficientSpec& spec, const BasisSpec& basis,
                                 const ActiveSet& set, long n) {
    ConditionReport rep;
    const std::size_t k = set.size();
    if (k == 0) return rep;

    double max_q2 = 0.0, min_q2 = std::numeric_limits<double>::infinity();
    double i0 = 0.0, M = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        double q2 = set.q[i] * set.q[i];
        max_q2 = std::max(max_q2, q2);
        min_q2 = std::min(min_q2, q2);
        M += q2;
        double plus = std::abs(set.q[i]) - set.c[i] / set.threshold;
        if (plus > 0) i0 += plus * plus;
    }
    rep.c1_constant = i0 > 0 ? static_cast<double>(k) * max_q2 / i0 : 0.0;
    rep.c2_ratio = M / (static_cast<double>(n) * n * min_q2);
    rep.c4_ratio = static_cast<double>(k) / n;
    rep.c5_value = set.threshold * inf_abs_q_over_support(spec);
    rep.c3_constant =
        grid_sup_sum_sq(basis, set.indices, spec.ambient_dimension()) / static_cast<double>(k);

    // fixed heuristic levels; the conditions themselves are asymptotic
    rep.c1_ok = rep.c1_constant <= 64.0;
    rep.c2_ok = rep.c2_ratio <= 0.1;
    rep.c3_ok = rep.c3_constant <= sup_sq_bound(basis) + 1e-6;
    rep.c4_ok = k >= 2 && rep.c4_ratio <= 0.25;
    rep.c5_ok = rep.c5_value >= 1.0;
    return rep;
}

ExtremalSolution separation_rate(const CoefficientSpec& spec, long n, double gamma,
                                 const BasisSpec& basis, TuningSlack slack,
                                 std::optional<double> T_override) {
    if (!spec.nonnegative())
        throw std::domain_error("separation_rate: requires a nonnegative functional");
    ExtremalSolution sol;
    sol.n = n;
    sol.gamma = gamma;
    sol.T = T_override ? *T_override : solve_T_n_gamma(spec, n, gamma, slack);
    sol.set = active_set(spec, sol.T);
    if (sol.set.size() == 0) throw TuningError("separation_rate: empty active set at the tuned T");

    const std::size_t k = sol.set.size();
    double u2 = 0.0, cu = 0.0, qu = 0.0;
    std::vector<double> u(k);
    for (std::size_t i = 0; i < k; ++i) {
        u[i] = sol.T * sol.set.q[i] - sol.set.c[i];
        u2 += u[i] * u[i];
        cu += sol.set.c[i] * u[i];
        qu += sol.set.q[i] * u[i];
    }
    sol.weights.resize(k);
    sol.least_favorable.resize(k);
    double norm = std::sqrt(u2);
    for (std::size_t i = 0; i < k; ++i) {
        sol.weights[i] = u[i] / norm;
        sol.least_favorable[i] = u[i] / cu;
    }
    sol.rate = std::sqrt(qu / cu);
    sol.conditions = check_conditions(spec, basis, sol.set, n);
    return sol;
}

namespace {

// projection onto {v >= 0} n {<v,c> <= 1} n {<v,q> >= rho2} via Dykstra;
// iterates until the feasibility violation of the current point drops
// below tol (or the iteration cap)
void dykstra_project(std::vector<double>& v, std::span<const double> c, std::span<const double> q,
                     double rho2, int max_iters, double tol = 1e-13) {
    const std::size_t k = v.size();
    double cc = 0.0, qq = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        cc += c[i] * c[i];
        qq += q[i] * q[i];
    }
    std::vector<double> p(k, 0.0), r(k, 0.0), s(k, 0.0);  // per-set increments
    for (int it = 0; it < max_iters; ++it) {
        // nonnegativity
        for (std::size_t i = 0; i < k; ++i) {
            double y = v[i] + p[i];
            double proj = std::max(y, 0.0);
            p[i] = y - proj;
            v[i] = proj;
        }
        // <v,c> <= 1
        double dot = 0.0;
        for (std::size_t i = 0; i < k; ++i) dot += (v[i] + r[i]) * c[i];
        double lam = dot > 1.0 ? (dot - 1.0) / cc : 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            double y = v[i] + r[i];
            double proj = y - lam * c[i];
            r[i] = y - proj;
            v[i] = proj;
        }
        // <v,q> >= rho2
        dot = 0.0;
        for (std::size_t i = 0; i < k; ++i) dot += (v[i] + s[i]) * q[i];
        double mu = dot < rho2 ? (rho2 - dot) / qq : 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            double y = v[i] + s[i];
            double proj = y + mu * q[i];
            s[i] = y - proj;
            v[i] = proj;
        }
        if (it % 16 == 15) {
            double viol = 0.0, dc = 0.0, dq = 0.0;
            for (std::size_t i = 0; i < k; ++i) {
                viol = std::max(viol, -v[i]);
                dc += std::max(v[i], 0.0) * c[i];
                dq += std::max(v[i], 0.0) * q[i];
            }
            viol = std::max({viol, dc - 1.0, rho2 - dq});
            if (viol < tol) break;
        }
    }
    for (double& x : v) x = std::max(x, 0.0);
}

double kkt_residual_numeric(std::span<const double> c, std::span<const double> q,
                            const std::vector<double>& v, double rho2) {
    const std::size_t k = v.size();
    double vmax = 0.0;
    for (double x : v) vmax = std::max(vmax, x);
    double dot_c = 0.0, dot_q = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        dot_c += c[i] * v[i];
        dot_q += q[i] * v[i];
    }
    // least-squares multipliers on the numerical support
    double a11 = 0.0, a12 = 0.0, a22 = 0.0, b1 = 0.0, b2 = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        if (v[i] <= 1e-9 * vmax) continue;
        a11 += c[i] * c[i];
        a12 -= c[i] * q[i];
        a22 += q[i] * q[i];
        b1 -= 2.0 * v[i] * c[i];
        b2 += 2.0 * v[i] * q[i];
    }
    double det = a11 * a22 - a12 * a12;
    double lam = 0.0, mu = 0.0;
    if (std::abs(det) > 1e-300) {
        lam = (b1 * a22 - a12 * b2) / det;
        mu = (a11 * b2 - a12 * b1) / det;
    }
    lam = std::max(lam, 0.0);
    mu = std::max(mu, 0.0);

    double res = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        double nu = 2.0 * v[i] + lam * c[i] - mu * q[i];
        if (v[i] > 1e-9 * vmax)
            res = std::max(res, std::abs(nu));  // nu must vanish on the support
        else
            res = std::max(res, std::max(0.0, -nu));  // multiplier nonnegativity
        res = std::max(res, std::max(0.0, -v[i]));
    }
    res = std::max(res, std::max(0.0, dot_c - 1.0));
    res = std::max(res, std::max(0.0, rho2 - dot_q));
    res = std::max(res, std::abs(lam * (dot_c - 1.0)));
    res = std::max(res, std::abs(mu * (dot_q - rho2)));
    return res;
}

}  // namespace

SaddleResult saddle_value_bruteforce(std::span<const double> c, std::span<const double> q,
                                     double rho, int restarts, std::uint64_t seed) {
    const std::size_t k = c.size();
    if (q.size() != k || k == 0) throw std::invalid_argument("saddle_value_bruteforce: bad arrays");
    const double rho2 = rho * rho;

    SaddleResult out;
    double sup = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        if (q[i] <= 0) continue;
        sup = c[i] > 0 ? std::max(sup, q[i] / c[i]) : std::numeric_limits<double>::infinity();
    }
    if (rho2 > sup * (1.0 + 1e-12)) return out;  // constraints contradict
    out.feasible = true;

    double best = std::numeric_limits<double>::infinity();
    std::vector<double> bestv;
    for (int r = 0; r < restarts; ++r) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
        std::vector<double> v(k);
        for (auto& x : v) x = std::abs(rng.normal()) * rho2;
        dykstra_project(v, c, q, rho2, 400);
        for (int step = 0; step < 900; ++step) {
            for (auto& x : v) x *= 0.8;  // gradient step on ||v||^2 with eta = 0.1
            dykstra_project(v, c, q, rho2, 400);
        }
        dykstra_project(v, c, q, rho2, 60000);  // land strictly inside the feasible set
        // tiny residual infeasibility would fake a lower objective; scale it out
        double dq = 0.0;
        for (std::size_t i = 0; i < k; ++i) dq += v[i] * q[i];
        if (dq < rho2 && dq > 0)
            for (auto& x : v) x *= rho2 / dq;
        double norm2 = 0.0;
        for (double x : v) norm2 += x * x;
        double norm = std::sqrt(norm2);
        if (norm < best) {
            best = norm;
            bestv = v;
        }
    }
    out.value = best;
    out.v = std::move(bestv);
    out.kkt_residual = kkt_residual_numeric(c, q, out.v, rho2);
    return out;
}

double kkt_residual_analytic(std::span<const double> c, std::span<const double> q,
                             std::span<const double> v, double T) {
    const std::size_t k = c.size();
    double D = 0.0;
    for (std::size_t i = 0; i < k; ++i) D += c[i] * std::max(T * q[i] - c[i], 0.0);
    double lam = 2.0 / D, mu = 2.0 * T / D;
    double res = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        double nu = 2.0 * std::max(c[i] - T * q[i], 0.0) / D;
        res = std::max(res, std::abs(2.0 * v[i] + lam * c[i] - mu * q[i] - nu));
    }
    return res;
}

ClosedFormRate closed_form_rate_derivative(std::span<const double> sigma,
                                           std::span<const double> alpha, int d, long n,
                                           double gamma) {
    if (d < 1 || sigma.size() != static_cast<std::size_t>(d) || alpha.size() != sigma.size())
        throw std::domain_error("closed_form_rate_derivative: dimension mismatch");
    ClosedFormRate r;
    double inv = 0.0;
    for (int j = 0; j < d; ++j) {
        if (!(sigma[j] > 0)) throw std::domain_error("closed_form_rate_derivative: sigma_j > 0 violated");
        r.delta += alpha[j] / sigma[j];
        inv += 1.0 / sigma[j];
    }
    r.sigma_bar = d / inv;
    if (!(r.delta < 1.0))
        throw std::domain_error("closed_form_rate_derivative: delta = sum alpha_j/sigma_j < 1 violated");
    if (!(r.sigma_bar > d / 4.0))
        throw std::domain_error("closed_form_rate_derivative: sigma_bar > d/4 violated");
    if (!(gamma > 0 && gamma < 1))
        throw std::domain_error("closed_form_rate_derivative: gamma in (0,1) violated");

    r.kappa_parts.resize(d);
    double lg_sum = 0.0, lsig = 0.0;
    for (int j = 0; j < d; ++j) {
        r.kappa_parts[j] = 1.0 / (2.0 * sigma[j]) +
                           (alpha[j] / sigma[j]) * (4.0 * r.sigma_bar + d) /
                               (2.0 * r.sigma_bar * (1.0 - r.delta));
        r.kappa += r.kappa_parts[j];
        lg_sum += std::lgamma(r.kappa_parts[j]);
        lsig += std::log(sigma[j]);
    }
    r.C_dsa = std::exp(lg_sum - std::lgamma(r.kappa + 2.0) - d * std::log(kTwoPi) - lsig -
                       std::log1p(-r.delta));
    r.rate_exponent = 2.0 * r.sigma_bar * (1.0 - r.delta) / (4.0 * r.sigma_bar + d);

    double z = normal_quantile(1.0 - gamma / 2.0);
    double e1 = r.sigma_bar * (1.0 - r.delta) / (4.0 * r.sigma_bar + d);
    double e2 = (2.0 * (1.0 + r.delta) * r.sigma_bar + d) / (2.0 * (4.0 * r.sigma_bar + d));
    r.C_star = std::pow(4.0 * z * z * r.kappa * r.C_dsa, e1) *
               std::pow(1.0 + 2.0 / r.kappa, e2);
    r.r_star = r.C_star * std::pow(static_cast<double>(n), -r.rate_exponent);
    r.T_asymptotic = (1.0 + 2.0 / r.kappa) / (r.r_star * r.r_star);
    return r;
}

SingleIndexConstants single_index_constants(std::span<const double> beta, double sigma, int d,
                                            double tol) {
    if (d < 1 || beta.size() != static_cast<std::size_t>(d))
        throw std::domain_error("single_index_constants: dimension mismatch");
    double b2 = 0.0;
    for (double b : beta) b2 += b * b;
    if (std::abs(std::sqrt(b2) - 1.0) > 1e-12)
        throw std::domain_error("single_index_constants: beta must be a unit vector");
    if (!(sigma > std::max(1.0, d / 4.0)))
        throw std::domain_error("single_index_constants: sigma > max(1, d/4) violated");

    // support box: outside [-R,R]^d the bracket is negative because
    // u^2 - u^{2 sigma} <= -(d-1) m* - 1 once u >= R
    double ustar = std::pow(1.0 / sigma, 1.0 / (2.0 * sigma - 2.0));
    double mstar = ustar * ustar - std::pow(ustar, 2.0 * sigma);
    double target = (d - 1) * mstar + 1.0;
    double lo = std::max(1.0, ustar), hi = 2.0 * lo;
    while (std::pow(hi, 2.0 * sigma) - hi * hi < target) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (std::pow(mid, 2.0 * sigma) - mid * mid < target ? lo : hi) = mid;
    }
    const double R = hi;

    auto bracket = [&](std::span<const double> x) {
        double n2 = 0.0, proj = 0.0, s2s = 0.0;
        for (int j = 0; j < d; ++j) {
            n2 += x[j] * x[j];
            proj += beta[j] * x[j];
            s2s += std::pow(std::abs(x[j]), 2.0 * sigma);
        }
        return n2 - proj * proj - s2s;
    };
    const double scale = std::pow(kTwoPi, -static_cast<double>(d));
    auto f0 = [&](std::span<const double> x) {
        double b = bracket(x);
        return b > 0 ? scale * b * b : 0.0;
    };
    auto f1 = [&](std::span<const double> x) {
        double b = bracket(x);
        if (b <= 0) return 0.0;
        double n2 = 0.0, proj = 0.0;
        for (int j = 0; j < d; ++j) {
            n2 += x[j] * x[j];
            proj += beta[j] * x[j];
        }
        return scale * (n2 - proj * proj) * b;
    };

    std::vector<double> blo(d, -R), bhi(d, R);
    SingleIndexConstants out;
    auto r0 = adaptive_integrate(f0, blo, bhi, tol / 2);
    auto r1 = adaptive_integrate(f1, blo, bhi, tol / 2);
    out.C0_bar = r0.value;
    out.C1_bar = r1.value;
    out.C2_bar = r1.value - r0.value;
    out.quadrature_error = r0.error + r1.error;
    if (out.quadrature_error > tol)
        throw QuadratureError("single_index_constants: tolerance not met", out.quadrature_error);
    return out;
}

SingleIndexRate closed_form_rate_single_index(std::span<const double> beta, double sigma, int d,
                                              long n, double gamma,
                                              const SingleIndexConstants* precomputed) {
    SingleIndexRate r;
    r.constants = precomputed ? *precomputed : single_index_constants(beta, sigma, d);
    if (!(gamma > 0 && gamma < 1))
        throw std::domain_error("closed_form_rate_single_index: gamma in (0,1) violated");
    r.rate_exponent = 2.0 * (sigma - 1.0) / (4.0 * sigma + d);
    double z = normal_quantile(1.0 - gamma / 2.0);
    const auto& cc = r.constants;
    r.C_star = std::sqrt(cc.C1_bar / cc.C2_bar) *
               std::pow(8.0 * z * z * cc.C2_bar * cc.C2_bar / cc.C0_bar,
                        (sigma - 1.0) / (4.0 * sigma + d));
    r.r_star = r.C_star * std::pow(static_cast<double>(n), -r.rate_exponent);
    r.T_asymptotic = (cc.C1_bar / cc.C2_bar) / (r.r_star * r.r_star);
    return r;
}

TwoRegimeRate two_regime_rate(const CoefficientSpec& spec, long n) {
    bool plus = false, minus = false;
    if (spec.two_sample()) {
        plus = minus = true;
    } else if (auto* fl = std::get_if<FiniteList>(&spec.family)) {
        for (const auto& e : fl->entries) {
            plus |= e.q > 0;
            minus |= e.q < 0;
        }
    }
    if (!plus || !minus)
        throw std::domain_error("two_regime_rate: both sign classes must be nonempty");

    const double T1 = first_entry_threshold(spec);
    auto H = [&](double T) {
        return T * std::sqrt(spectral_sums(spec, T).M) - static_cast<double>(n);
    };
    double lo = T1 * 0.5;
    double hi = T1 * (1.0 + 1e-9);
    int guard = 0;
    while (H(hi) <= 0.0) {
        hi *= 2.0;
        if (++guard > 400) throw TuningError("two_regime_rate: balance bracket expansion failed");
    }
    while (hi - lo > 1e-12 * hi) {
        double mid = std::sqrt(lo * hi);
        (H(mid) <= 0.0 ? lo : hi) = mid;
    }
    TwoRegimeRate out;
    out.T0 = 0.5 * (lo + hi);
    double sqrt_n = std::sqrt(static_cast<double>(n));
    out.T = std::min(out.T0, sqrt_n);
    out.rate = 1.0 / std::sqrt(out.T);
    out.regular = sqrt_n <= out.T0;
    return out;
}

double rate_from_balance(const CoefficientSpec& spec, long n) {
    if (!spec.nonnegative())
        throw std::domain_error("rate_from_balance: requires a nonnegative functional");
    const double T1 = first_entry_threshold(spec);
    auto g = [&](double r) {
        double T = 1.0 / (r * r);
        double M = T > T1 ? spectral_sums(spec, T).M : 0.0;
        return static_cast<double>(n) * r * r - std::sqrt(M);
    };
    double hi = 1.0 / std::sqrt(T1);  // M vanishes here, so g > 0
    double lo = hi;
    int guard = 0;
    do {  // step downward so M is never evaluated at an absurd threshold
        lo *= 0.5;
        if (++guard > 200) return lo;  // degenerate: balance holds only at r -> 0
    } while (g(lo) >= 0.0);
    while (hi - lo > 1e-12 * hi) {
        double mid = std::sqrt(lo * hi);
        (g(mid) >= 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace qf
