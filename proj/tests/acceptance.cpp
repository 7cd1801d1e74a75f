// Acceptance suite: one line of output per criterion, nonzero exit when any
// criterion fails.  Monte Carlo runs use fixed seeds so the outcome is
// reproducible run to run.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qf/gaussian.hpp"
#include "qf/lowerbound.hpp"
#include "qf/rng.hpp"
#include "qf/sim.hpp"
#include "qf/utest.hpp"

using namespace qf;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr int kThreads = 4;

int g_failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", number, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double ols_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= xs.size();
    my /= ys.size();
    double num = 0, den = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
    }
    return num / den;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

// --- 1. saddle-point oracle equivalence -------------------------------------

void criterion_1() {
    auto start = std::chrono::steady_clock::now();
    Rng rng(20240601);
    int instances = 0;
    double worst_rel = 0.0, worst_kkt = 0.0, worst_oracle_kkt = 0.0;
    while (instances < 20) {
        int k = 2 + static_cast<int>(rng.raw() % 11);  // up to 12 indices
        std::vector<double> c(k), q(k);
        for (int i = 0; i < k; ++i) {
            c[i] = 0.4 + 3.6 * rng.uniform();
            q[i] = 0.2 + 1.8 * rng.uniform();
        }
        FiniteList fl;
        fl.ambient_dimension = 1;
        for (int i = 0; i < k; ++i) fl.entries.push_back({Index{{i + 1}, 0}, c[i], q[i]});
        CoefficientSpec spec{fl};

        double sup = 0;
        for (int i = 0; i < k; ++i) sup = std::max(sup, q[i] / c[i]);
        double qq = 0, cq = 0;
        for (int i = 0; i < k; ++i) {
            qq += q[i] * q[i];
            cq += c[i] * q[i];
        }
        double lim = qq / cq;  // large-T limit of the separation ratio
        double rho2 = lim + (0.15 + 0.7 * rng.uniform()) * (sup - lim);
        double T;
        try {
            T = solve_T_rho(spec, std::sqrt(rho2));
        } catch (const InfeasibleSeparation&) {
            continue;
        }

        double cu = 0;
        for (int i = 0; i < k; ++i) cu += c[i] * std::max(T * q[i] - c[i], 0.0);
        std::vector<double> v(k);
        double norm2 = 0;
        for (int i = 0; i < k; ++i) {
            v[i] = std::max(T * q[i] - c[i], 0.0) / cu;
            norm2 += v[i] * v[i];
        }
        double analytic_value = std::sqrt(norm2);

        auto res = saddle_value_bruteforce(c, q, std::sqrt(rho2), 16,
                                           derive_seed(777, instances));
        if (!res.feasible) {
            report(1, "saddle-point oracle equivalence", false, "oracle reported infeasible");
            return;
        }
        worst_rel = std::max(worst_rel, std::abs(res.value - analytic_value) / analytic_value);
        worst_kkt = std::max(worst_kkt, kkt_residual_analytic(c, q, v, T));
        worst_oracle_kkt = std::max(worst_oracle_kkt, res.kkt_residual);
        ++instances;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool pass = worst_rel <= 1e-6 && worst_kkt <= 1e-8 && secs < 60.0;
    report(1, "saddle-point oracle equivalence", pass,
           "20 instances, worst |value diff|/value = " + fmt(worst_rel) +
               ", analytic KKT residual = " + fmt(worst_kkt) + ", oracle KKT residual = " +
               fmt(worst_oracle_kkt) + ", " + fmt(secs) + " s");
}

// --- 2. Wilks calibration ----------------------------------------------------

void criterion_2() {
    TestConfig cfg;
    cfg.spec = CoefficientSpec{SobolevDerivative{{2.0}, {0.0}}};
    cfg.basis = {BasisKind::FourierTensor, 1};
    cfg.n = 1000;
    cfg.gamma = 0.05;
    // the slack-free threshold equation has no solution at this (sigma, n);
    // a documented explicit truncation with 41 active indices is used
    // (20000-replication reference values: type I 0.0375/0.0338, KS 0.035)
    cfg.T_override = std::pow(kTwoPi * 20.5, 4.0);

    bool pass = true;
    std::string detail;
    for (auto kind : {NoiseSpec::Kind::Gaussian, NoiseSpec::Kind::Rademacher}) {
        NoiseSpec noise{kind};
        auto res = wilks_diagnostic(cfg, noise, 2000, 1234, kThreads);
        bool ok = res.ks <= 0.05 && res.type1 >= 0.03 && res.type1 <= 0.07;
        pass &= ok;
        detail += std::string(kind == NoiseSpec::Kind::Gaussian ? "gaussian" : "rademacher") +
                  ": KS = " + fmt(res.ks) + ", type I = " + fmt(res.type1) + "; ";
    }
    report(2, "Wilks calibration (n=1000, sigma=2, gamma=0.05, 2000 reps)", pass, detail);
}

// --- 3. sharp separation ------------------------------------------------------

void criterion_3() {
    TestConfig cfg;
    cfg.spec = CoefficientSpec{SobolevDerivative{{0.75, 0.75}, {0.0, 0.0}}};
    cfg.basis = {BasisKind::FourierTensor, 2};
    cfg.n = 2000;
    cfg.gamma = 0.10;
    // the threshold equation is solved with its variance-matched vanishing
    // slack term, which restores the gamma + o(1) calibration at finite n
    cfg.slack = TuningSlack::VarianceMatched;

    auto sol = separation_rate(cfg.spec, cfg.n, cfg.gamma, cfg.basis, cfg.slack);
    ThetaMap alt;
    alt.indices = sol.set.indices;
    for (double v : sol.least_favorable) alt.values.push_back(std::sqrt(v));

    NoiseSpec gauss;
    auto res = monte_carlo(cfg, gauss, ThetaMap{}, alt, 1000, 555001, kThreads);
    double cum = res.estimates.cumulative;
    bool pass = cum <= cfg.gamma + 0.07;
    report(3, "sharp separation at the least-favorable alternative", pass,
           "type I = " + fmt(res.estimates.type1) + ", type II = " +
               fmt(res.estimates.type2.value_or(-1)) + ", cumulative = " + fmt(cum) +
               " <= " + fmt(cfg.gamma + 0.07) + "; T = " + fmt(sol.T) + ", |N| = " +
               std::to_string(sol.set.size()) + ", r* = " + fmt(sol.rate));
}

// --- 4. exponent recovery -----------------------------------------------------

void criterion_4() {
    const BasisSpec t1{BasisKind::FourierTensor, 1}, t2{BasisKind::FourierTensor, 2};
    struct Setting {
        CoefficientSpec spec;
        BasisSpec basis;
        double target;
    };
    std::vector<Setting> premierex = {
        {CoefficientSpec{SobolevDerivative{{1.0}, {0.0}}}, t1, -0.4},
        {CoefficientSpec{SobolevDerivative{{1.25}, {0.25}}}, t1, -1.0 / 3.0},
        {CoefficientSpec{SobolevDerivative{{1.0, 1.0}, {0.0, 0.0}}}, t2, -1.0 / 3.0},
    };
    bool pass = true;
    std::string detail;
    for (const auto& s : premierex) {
        std::vector<double> xs, ys;
        for (double n = 1e3; n <= 1.01e7; n *= 10.0) {
            auto sol = separation_rate(s.spec, static_cast<long>(n), 0.05, s.basis);
            xs.push_back(std::log(n));
            ys.push_back(std::log(sol.rate));
        }
        double slope = ols_slope(xs, ys);
        pass &= std::abs(slope - s.target) <= 0.02;
        detail += "slope " + fmt(slope) + " vs " + fmt(s.target) + "; ";
    }
    std::vector<std::pair<CoefficientSpec, double>> regimes = {
        {CoefficientSpec{TwoSampleNorm{{2.0}, {0.5}}}, -0.25},       // regular
        {CoefficientSpec{TwoSampleNorm{{2.0}, {1.5}}}, -1.0 / 9.0},  // irregular
    };
    for (const auto& [spec, target] : regimes) {
        std::vector<double> xs, ys;
        for (double n = 1e3; n <= 1.01e7; n *= 10.0) {
            auto r = two_regime_rate(spec, static_cast<long>(n));
            xs.push_back(std::log(n));
            ys.push_back(std::log(r.rate));
        }
        double slope = ols_slope(xs, ys);
        pass &= std::abs(slope - target) <= 0.02;
        detail += "two-regime slope " + fmt(slope) + " vs " + fmt(target) + "; ";
    }
    report(4, "exponent recovery (three derivative settings, two regimes)", pass, detail);
}

// --- 5. asymptotic constants ---------------------------------------------------

void criterion_5() {
    auto start = std::chrono::steady_clock::now();
    struct Setting {
        std::vector<double> sigma, alpha;
        double T;
    };
    // truncations chosen so |N(T)| >= 1e4
    std::vector<Setting> settings = {
        {{1.0}, {0.0}, std::pow(kTwoPi * 5000.5, 2.0)},
        {{1.0, 1.0}, {0.0, 0.0}, std::pow(kTwoPi * 57.0, 2.0)},
        {{2.0}, {0.5}, std::pow(kTwoPi * 5000.5, 3.0)},
    };
    bool pass = true;
    std::string detail;
    for (const auto& s : settings) {
        int d = static_cast<int>(s.sigma.size());
        auto cf = closed_form_rate_derivative(s.sigma, s.alpha, d, 1000, 0.05);
        CoefficientSpec spec{SobolevDerivative{s.sigma, s.alpha}};
        auto sums = spectral_sums(spec, s.T);
        double a = (4 * cf.delta * cf.sigma_bar + d) / (2 * (1 - cf.delta) * cf.sigma_bar);
        double r0 = sums.I0 / std::pow(s.T, a) / (2 * cf.C_dsa / (cf.kappa + 2));
        double r1 = sums.I1 / std::pow(s.T, a) / cf.C_dsa;
        bool ok = sums.count >= 10000 && std::abs(r0 - 1) <= 0.05 && std::abs(r1 - 1) <= 0.05;
        pass &= ok;
        detail += "|N| = " + std::to_string(sums.count) + ", I0 ratio = " + fmt(r0) +
                  ", I1 ratio = " + fmt(r1) + "; ";
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    pass &= secs < 60.0;
    report(5, "exact-sum constants at |N| >= 1e4", pass, detail + fmt(secs) + " s");
}

// --- 6. moment identities -------------------------------------------------------

void criterion_6() {
    TestConfig cfg;
    cfg.spec = CoefficientSpec{SobolevDerivative{{1.0}, {0.0}}};
    cfg.basis = {BasisKind::FourierTensor, 1};
    cfg.gamma = 0.05;
    cfg.T_override = 483.0;  // six active indices
    NoiseSpec gauss;

    // mean identity at n = 200 with a known signal
    cfg.n = 200;
    ThetaMap theta{{{{1}, 0}, {{-1}, 0}}, {0.15, 0.15}};
    cfg.true_theta = theta;
    auto prep = prepare_sharp(cfg);
    const auto m = static_cast<double>(200 - 14);
    double s = 0.0;
    for (std::size_t l = 0; l < prep.weights.indices.size(); ++l)
        for (std::size_t j = 0; j < theta.indices.size(); ++j)
            if (prep.weights.indices[l] == theta.indices[j])
                s += prep.weights.w[l] * theta.values[j] * theta.values[j];
    const double h_n = std::sqrt(m * (m - 1) / 2.0) * s;

    const int reps = 10000;
    auto mc = monte_carlo(cfg, gauss, theta, std::nullopt, reps, 606001, kThreads);
    double mean = 0.0, var = 0.0;
    for (const auto& r : mc.records) mean += r.statistic;
    mean /= reps;
    for (const auto& r : mc.records) var += (r.statistic - mean) * (r.statistic - mean);
    var /= reps - 1;
    double se = std::sqrt(var / reps);
    bool mean_ok = std::abs(mean - h_n) <= 3.0 * se;

    // null variance at n = 500
    cfg.n = 500;
    cfg.true_theta.reset();
    auto w = wilks_diagnostic(cfg, gauss, 2000, 606002, kThreads);
    double null_var = 0.0, null_mean = 0.0;
    for (double v : w.statistics) null_mean += v;
    null_mean /= w.statistics.size();
    for (double v : w.statistics) null_var += (v - null_mean) * (v - null_mean);
    null_var /= w.statistics.size() - 1;
    bool var_ok = null_var >= 0.9 && null_var <= 1.1;

    report(6, "moment identities (mean = h_n, null variance = 1)", mean_ok && var_ok,
           "mean = " + fmt(mean) + " vs h_n = " + fmt(h_n) + " (SE " + fmt(se) + "), null var = " +
               fmt(null_var));
}

// --- 7. indefinite guarantees -----------------------------------------------------

void criterion_7() {
    TestConfig cfg;
    cfg.spec = CoefficientSpec{TwoSampleNorm{{0.75}, {0.0}}};
    cfg.basis = {BasisKind::FourierDotProduct, 1};
    cfg.mode = TestMode::Indefinite;
    cfg.n = 2000;
    cfg.gamma = 0.10;
    cfg.class_bounds = default_class_bounds(cfg.spec, cfg.basis, two_regime_rate(cfg.spec, 2000).T);

    auto prep = prepare_indefinite(cfg);
    const double rho2 = prep.rho2_guaranteed;
    cfg.rho2_claimed = rho2;

    // null member from the two-point family (Q[f0] = 0 on the ellipsoid
    // boundary) and a tail-free alternative with |Q[f]| equal to the
    // guarantee, spread over the positive part of N(T)
    auto probe = two_point_pair(cfg.spec, cfg.n, 1e-9);
    auto pair = two_point_pair(
        cfg.spec, cfg.n,
        2.0 * probe.theta0_plus * std::sqrt(std::log(1.0 / (4.0 * cfg.gamma))));
    ThetaMap f0 = two_point_theta(pair, false);

    ThetaMap alt;
    std::size_t n_plus = 0;
    for (double q : prep.set.q) n_plus += q > 0 ? 1 : 0;
    for (std::size_t i = 0; i < prep.set.size(); ++i)
        if (prep.set.q[i] > 0) {
            alt.indices.push_back(prep.set.indices[i]);
            alt.values.push_back(std::sqrt(rho2 / static_cast<double>(n_plus)));
        }
    double Q_alt = 0.0;
    for (std::size_t i = 0; i < alt.indices.size(); ++i)
        Q_alt += coeff(cfg.spec, alt.indices[i]).q * alt.values[i] * alt.values[i];

    NoiseSpec gauss;
    auto res = monte_carlo(cfg, gauss, f0, alt, 1000, 707001, kThreads);
    bool pass = res.estimates.type1 <= cfg.gamma / 2 + 0.03 &&
                res.estimates.type2.value_or(1.0) <= cfg.gamma / 2 + 0.03 &&
                Q_alt >= rho2 * (1 - 1e-12);
    report(7, "indefinite guarantees (two-sample family, n=2000)", pass,
           "type I = " + fmt(res.estimates.type1) + ", type II = " +
               fmt(res.estimates.type2.value_or(-1)) + " (gate " + fmt(cfg.gamma / 2 + 0.03) +
               "), guaranteed rho^2 = " + fmt(rho2) + ", threshold = " + fmt(prep.threshold) +
               ", |Q[f_alt]| = " + fmt(Q_alt));
}

// --- 8. lower-bound constructions ---------------------------------------------------

void criterion_8() {
    CoefficientSpec spec{SobolevDerivative{{1.0}, {0.0}}};
    const double delta = 0.5, gamma = 0.05;
    const long n = 10000000;
    auto sol = separation_rate(spec, n, gamma, {BasisKind::FourierTensor, 1});
    auto prior = prior_from_solution(sol, delta);

    // the prior's mean functional energy is (1 - delta) r*^2, so membership
    // is certified only up to C <= sqrt(1 - delta); the margined target is
    // C = 0.9 sqrt(1 - delta), and the frequency at the un-shrunk 0.9 r*
    // (which vanishes by construction) is reported alongside
    const double shrunk = 0.9 * std::sqrt(1.0 - delta) * sol.rate;
    const double literal = 0.9 * sol.rate;
    int reps = 2000, in_shrunk = 0, in_literal = 0;
    for (int r = 0; r < reps; ++r) {
        auto th = prior_sample(prior, derive_seed(808001, r));
        double H1 = 0.0, H2 = 0.0;
        for (std::size_t i = 0; i < th.values.size(); ++i) {
            H1 += sol.set.q[i] * th.values[i] * th.values[i];
            H2 += sol.set.c[i] * th.values[i] * th.values[i];
        }
        in_shrunk += (H1 >= shrunk * shrunk && H2 <= 1.0) ? 1 : 0;
        in_literal += (H1 >= literal * literal && H2 <= 1.0) ? 1 : 0;
    }
    double freq = static_cast<double>(in_shrunk) / reps;

    CoefficientSpec ts{TwoSampleNorm{{1.0}, {0.0}}};
    auto pair = two_point_pair(ts, 100000, 0.3);
    double Q0 = pair.q_plus * pair.theta0_plus * pair.theta0_plus +
                pair.q_minus * pair.theta0_minus * pair.theta0_minus;
    double ssum = pair.theta0_plus + pair.theta1_plus;
    double kl_identity = std::abs(pair.kl_bound * ssum * ssum - pair.z * pair.z);
    bool kl_ok = kl_identity <= 1e-10 &&
                 pair.kl_bound <= pair.z * pair.z / (4 * pair.theta1_plus * pair.theta1_plus) +
                                      1e-10 &&
                 pair.kl_bound >= pair.z * pair.z / (4 * pair.theta0_plus * pair.theta0_plus) -
                                      1e-10;

    bool pass = freq >= 0.95 && std::abs(Q0) <= 1e-12 && kl_ok;
    report(8, "lower-bound constructions", pass,
           "prior membership at 0.9 sqrt(1-delta) r* = " + fmt(freq) +
               " (literal 0.9 r*: " + fmt(static_cast<double>(in_literal) / reps) +
               "), |Q[f0]| = " + fmt(std::abs(Q0)) + ", KL identity residual = " +
               fmt(kl_identity));
}

// --- 9. CLI determinism ----------------------------------------------------------

namespace fs = std::filesystem;

std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void criterion_9() {
    const std::string cli = QF_CLI_PATH;
    fs::path dir = fs::temp_directory_path() / "qf_acceptance_cli";
    fs::create_directories(dir);
    auto at = [&](const std::string& f) { return (dir / f).string(); };

    {
        std::ofstream cfg(at("cfg.json"));
        cfg << R"({"family": {"kind": "sobolev_derivative", "sigma": [1.0], "alpha": [0.0]},
                   "n": 1000, "gamma": 0.05, "seed": 4, "reps": 150,
                   "noise": {"kind": "gaussian"},
                   "alternative": {"kind": "least_favorable"}})";
    }
    {
        std::ofstream data(at("data.csv"));
        data << "t1,x\n";
        Rng rng(140);
        for (int i = 0; i < 1000; ++i) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", rng.uniform(), rng.normal());
            data << buf;
        }
    }

    bool pass = true;
    std::string detail;
    // run a subcommand twice with distinct output bases and byte-compare the
    // produced files; `suffixes` lists what the command appends to the base
    auto run2 = [&](const std::string& name, const std::string& args,
                    const std::vector<std::string>& suffixes) {
        for (int round = 1; round <= 2; ++round) {
            std::string base = at(name + "." + std::to_string(round));
            std::string cmd = cli + " " + args;
            auto pos = cmd.find("{OUT}");
            cmd.replace(pos, 5, base);
            int rc = std::system((cmd + " >/dev/null 2>&1").c_str());
            if (WEXITSTATUS(rc) != 0) {
                pass = false;
                detail += name + ": exit " + std::to_string(WEXITSTATUS(rc)) + "; ";
                return;
            }
        }
        for (const auto& sfx : suffixes) {
            auto a = slurp(at(name + ".1" + sfx)), b = slurp(at(name + ".2" + sfx));
            if (a != b || a.empty()) {
                pass = false;
                detail += name + ": outputs differ; ";
                return;
            }
        }
        detail += name + " ok; ";
    };

    run2("rate", "rate --config " + at("cfg.json") + " --out {OUT}", {""});
    run2("weights", "weights --config " + at("cfg.json") + " --out {OUT}", {""});
    run2("test", "test --config " + at("cfg.json") + " --data " + at("data.csv") + " --out {OUT}",
         {""});
    run2("simulate", "simulate --config " + at("cfg.json") + " --threads 3 --out {OUT}",
         {".csv", ".json"});
    std::error_code ec;
    fs::remove_all(dir, ec);
    report(9, "CLI determinism (identical config and seed)", pass, detail);
}

}  // namespace

int main() {
    auto start = std::chrono::steady_clock::now();
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%d/9 criteria passed in %.1f s\n", 9 - g_failures, secs);
    return g_failures == 0 ? 0 : 1;
}
