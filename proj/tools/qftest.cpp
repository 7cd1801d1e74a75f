// qftest: minimax tests for diagonal quadratic functionals of a regression
// function.  Subcommands: rate | weights | test | simulate.  Exit codes:
// 0 success, 2 configuration error, 3 data error, 4 numerical failure.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "qf/gaussian.hpp"
#include "qf/lowerbound.hpp"
#include "qf/sim.hpp"
#include "qf/utest.hpp"

using nlohmann::json;

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require_keys(const json& obj, const char* where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ConfigError(std::string(where) + " must be a JSON object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed) ok |= it.key() == k;
        if (!ok) throw ConfigError(std::string("unknown key \"") + it.key() + "\" in " + where);
    }
}

std::vector<double> as_vector(const json& j, const char* name) {
    if (!j.is_array()) throw ConfigError(std::string(name) + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) throw ConfigError(std::string(name) + " must be numeric");
        out.push_back(v.get<double>());
    }
    return out;
}

qf::Index parse_index(const json& j) {
    qf::Index ix;
    for (const auto& v : j.at("lattice")) ix.lattice.push_back(v.get<int>());
    ix.tag = j.value("tag", 0);
    return ix;
}

qf::CoefficientSpec parse_family(const json& j) {
    require_keys(j, "family", {"kind", "sigma", "alpha", "beta", "d", "entries"});
    std::string kind = j.at("kind").get<std::string>();
    qf::CoefficientSpec spec;
    if (kind == "sobolev_derivative") {
        spec.family = qf::SobolevDerivative{as_vector(j.at("sigma"), "sigma"),
                                            as_vector(j.at("alpha"), "alpha")};
    } else if (kind == "two_sample_norm") {
        spec.family = qf::TwoSampleNorm{as_vector(j.at("sigma"), "sigma"),
                                        as_vector(j.at("alpha"), "alpha")};
    } else if (kind == "single_index") {
        spec.family = qf::SingleIndex{j.at("sigma").get<double>(), as_vector(j.at("beta"), "beta")};
    } else if (kind == "finite_list") {
        qf::FiniteList fl;
        fl.ambient_dimension = j.at("d").get<int>();
        for (const auto& e : j.at("entries")) {
            require_keys(e, "finite_list entry", {"lattice", "tag", "c", "q"});
            fl.entries.push_back(
                {parse_index(e), e.at("c").get<double>(), e.at("q").get<double>()});
        }
        spec.family = fl;
    } else {
        throw ConfigError("unknown family kind \"" + kind + "\"");
    }
    try {
        spec.validate();
    } catch (const std::domain_error& e) {
        throw ConfigError(e.what());
    }
    return spec;
}

struct RunConfig {
    json raw;
    qf::CoefficientSpec spec;
    qf::BasisSpec basis;
    qf::TestMode mode = qf::TestMode::SharpNonnegative;
    long n = 0;
    double gamma = 0.05;
    qf::NoiseSpec noise;
    std::optional<double> T_override, T_pilot;
    double pilot_cap = -1.0;
    double tau = 1.0;
    qf::TuningSlack slack = qf::TuningSlack::None;
    std::optional<qf::ClassBounds> class_bounds;
    std::uint64_t seed = 1;
    int reps = 1000;
    int threads = 0;  // 0: resolve from env
    json null_spec, alt_spec;
};

qf::NoiseSpec parse_noise(const json& j) {
    require_keys(j, "noise", {"kind", "df"});
    qf::NoiseSpec n;
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "gaussian")
        n.kind = qf::NoiseSpec::Kind::Gaussian;
    else if (kind == "rademacher")
        n.kind = qf::NoiseSpec::Kind::Rademacher;
    else if (kind == "student")
        n.kind = qf::NoiseSpec::Kind::ScaledStudent;
    else
        throw ConfigError("unknown noise kind \"" + kind + "\"");
    n.df = j.value("df", 9.0);
    try {
        n.validate();
    } catch (const std::domain_error& e) {
        throw ConfigError(e.what());
    }
    return n;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    require_keys(j, "config",
                 {"family", "basis", "n", "gamma", "mode", "noise", "T", "T_pilot", "pilot_cap",
                  "tau", "tuning_slack", "class_bounds", "seed", "reps", "threads", "null",
                  "alternative"});

    RunConfig cfg;
    cfg.raw = j;
    cfg.spec = parse_family(j.at("family"));

    std::string basis = j.value("basis", cfg.spec.two_sample() ? "dot_product" : "tensor");
    if (basis == "tensor")
        cfg.basis = {qf::BasisKind::FourierTensor, cfg.spec.dimension()};
    else if (basis == "dot_product")
        cfg.basis = {qf::BasisKind::FourierDotProduct, cfg.spec.dimension()};
    else
        throw ConfigError("unknown basis \"" + basis + "\"");

    cfg.n = j.value("n", 0L);
    cfg.gamma = j.value("gamma", 0.05);
    if (!(cfg.gamma > 0 && cfg.gamma < 1)) throw ConfigError("gamma must lie in (0,1)");

    std::string mode = j.value("mode", cfg.spec.nonnegative() ? "sharp" : "indefinite");
    if (mode == "sharp")
        cfg.mode = qf::TestMode::SharpNonnegative;
    else if (mode == "indefinite")
        cfg.mode = qf::TestMode::Indefinite;
    else
        throw ConfigError("unknown mode \"" + mode + "\"");

    if (j.contains("noise")) cfg.noise = parse_noise(j.at("noise"));
    if (j.contains("T")) cfg.T_override = j.at("T").get<double>();
    if (j.contains("T_pilot")) cfg.T_pilot = j.at("T_pilot").get<double>();
    cfg.pilot_cap = j.value("pilot_cap", -1.0);
    cfg.tau = j.value("tau", 1.0);

    std::string slack = j.value("tuning_slack", "none");
    if (slack == "none")
        cfg.slack = qf::TuningSlack::None;
    else if (slack == "variance_matched")
        cfg.slack = qf::TuningSlack::VarianceMatched;
    else
        throw ConfigError("unknown tuning_slack \"" + slack + "\"");

    if (j.contains("class_bounds")) {
        require_keys(j.at("class_bounds"), "class_bounds", {"D3", "D4"});
        cfg.class_bounds = qf::ClassBounds{j.at("class_bounds").at("D3").get<double>(),
                                           j.at("class_bounds").at("D4").get<double>()};
    }
    cfg.seed = j.value("seed", 1ull);
    cfg.reps = j.value("reps", 1000);
    cfg.threads = j.value("threads", 0);
    if (j.contains("null")) cfg.null_spec = j.at("null");
    if (j.contains("alternative")) cfg.alt_spec = j.at("alternative");
    return cfg;
}

int resolve_threads(const RunConfig& cfg, int flag_threads) {
    if (flag_threads > 0) return flag_threads;
    if (cfg.threads > 0) return cfg.threads;
    if (const char* env = std::getenv("QFTEST_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

double resolve_T(const RunConfig& cfg) {
    if (cfg.T_override) return *cfg.T_override;
    if (cfg.mode == qf::TestMode::Indefinite) return qf::two_regime_rate(cfg.spec, cfg.n).T;
    return qf::solve_T_n_gamma(cfg.spec, cfg.n, cfg.gamma, cfg.slack);
}

qf::TestConfig to_test_config(const RunConfig& cfg) {
    qf::TestConfig tc;
    tc.n = cfg.n;
    tc.gamma = cfg.gamma;
    tc.spec = cfg.spec;
    tc.basis = cfg.basis;
    tc.mode = cfg.mode;
    tc.T_override = cfg.T_override;
    tc.slack = cfg.slack;
    tc.T_pilot = cfg.T_pilot;
    tc.pilot_cap = cfg.pilot_cap;
    tc.tau = cfg.tau;
    tc.class_bounds = cfg.class_bounds;
    if (tc.mode == qf::TestMode::Indefinite && !tc.class_bounds)
        tc.class_bounds = qf::default_class_bounds(cfg.spec, cfg.basis, resolve_T(cfg));
    return tc;
}

qf::ThetaMap parse_theta(const RunConfig& cfg, const json& j, bool is_alternative) {
    if (j.is_null()) return {};
    require_keys(j, is_alternative ? "alternative" : "null", {"kind", "z", "theta"});
    std::string kind = j.value("kind", "zero");
    if (kind == "zero") return {};
    if (kind == "theta") {
        qf::ThetaMap th;
        for (const auto& e : j.at("theta")) {
            require_keys(e, "theta entry", {"lattice", "tag", "value"});
            th.indices.push_back(parse_index(e));
            th.values.push_back(e.at("value").get<double>());
        }
        return th;
    }
    if (kind == "least_favorable") {
        auto sol =
            qf::separation_rate(cfg.spec, cfg.n, cfg.gamma, cfg.basis, cfg.slack, cfg.T_override);
        qf::ThetaMap th;
        th.indices = sol.set.indices;
        for (double v : sol.least_favorable) th.values.push_back(std::sqrt(v));
        return th;
    }
    if (kind == "two_point") {
        double z;
        if (j.contains("z")) {
            z = j.at("z").get<double>();
        } else {
            // z at which the Kullback-Leibler bound certifies the gamma level
            auto probe = qf::two_point_pair(cfg.spec, cfg.n, 1e-9);
            z = 2.0 * probe.theta0_plus * std::sqrt(std::log(1.0 / (4.0 * cfg.gamma)));
        }
        auto pair = qf::two_point_pair(cfg.spec, cfg.n, z);
        return qf::two_point_theta(pair, is_alternative);
    }
    throw ConfigError("unknown theta kind \"" + kind + "\"");
}

// --- output helpers ---------------------------------------------------------

void atomic_write(const std::string& path, const std::string& payload) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot open output file " + tmp);
        out << payload;
    }
    std::filesystem::rename(tmp, path);
}

void emit(const std::string& out_path, const json& j) {
    std::string payload = j.dump(2) + "\n";
    if (out_path.empty())
        std::fputs(payload.c_str(), stdout);
    else
        atomic_write(out_path, payload);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json report_to_json(const qf::TestReport& rep) {
    json j;
    j["statistic"] = rep.statistic;
    j["threshold"] = rep.threshold;
    j["reject"] = rep.reject;
    if (rep.h_n_predicted) j["h_n_predicted"] = *rep.h_n_predicted;
    json diag = json::object();
    for (const auto& [k, v] : rep.diagnostics) diag[k] = v;
    j["diagnostics"] = diag;
    return j;
}

json conditions_to_json(const qf::ConditionReport& c) {
    return json{{"c1_constant", c.c1_constant}, {"c1_ok", c.c1_ok},
                {"c2_ratio", c.c2_ratio},       {"c2_ok", c.c2_ok},
                {"c3_constant", c.c3_constant}, {"c3_ok", c.c3_ok},
                {"c4_ratio", c.c4_ratio},       {"c4_ok", c.c4_ok},
                {"c5_value", c.c5_value},       {"c5_ok", c.c5_ok}};
}

// --- subcommands -------------------------------------------------------------

int cmd_rate(const RunConfig& cfg, const std::string& out_path) {
    json out;
    out["config"] = cfg.raw;

    if (auto* s = std::get_if<qf::SobolevDerivative>(&cfg.spec.family)) {
        auto cf = qf::closed_form_rate_derivative(s->sigma, s->alpha, cfg.spec.dimension(), cfg.n,
                                                  cfg.gamma);
        out["rate_exponent"] = cf.rate_exponent;
        out["C_star"] = cf.C_star;
        out["closed_form"] = {{"r_star", cf.r_star}, {"T", cf.T_asymptotic},
                              {"kappa", cf.kappa},   {"C_dsa", cf.C_dsa},
                              {"delta", cf.delta},   {"sigma_bar", cf.sigma_bar}};
    } else if (auto* si = std::get_if<qf::SingleIndex>(&cfg.spec.family)) {
        auto cf = qf::closed_form_rate_single_index(si->beta, si->sigma, cfg.spec.dimension(),
                                                    cfg.n, cfg.gamma);
        out["rate_exponent"] = cf.rate_exponent;
        out["C_star"] = cf.C_star;
        out["closed_form"] = {{"r_star", cf.r_star},
                              {"T", cf.T_asymptotic},
                              {"C0_bar", cf.constants.C0_bar},
                              {"C1_bar", cf.constants.C1_bar},
                              {"C2_bar", cf.constants.C2_bar},
                              {"quadrature_error", cf.constants.quadrature_error}};
    } else if (std::holds_alternative<qf::TwoSampleNorm>(cfg.spec.family)) {
        double delta = cfg.spec.delta(), sbar = cfg.spec.sigma_bar();
        double d = cfg.spec.dimension();
        out["rate_exponent"] = std::min(2.0 * (1.0 - delta) * sbar / (4.0 * sbar + d), 0.25);
    }

    if (cfg.spec.nonnegative() && cfg.mode == qf::TestMode::SharpNonnegative) {
        try {
            auto sol = qf::separation_rate(cfg.spec, cfg.n, cfg.gamma, cfg.basis, cfg.slack,
                                           cfg.T_override);
            out["r_star"] = sol.rate;
            out["T"] = sol.T;
            out["n_active"] = sol.set.size();
            out["condition_flags"] = conditions_to_json(sol.conditions);
            if (out.contains("closed_form"))
                out["closed_form_over_numeric"] =
                    out["closed_form"]["r_star"].get<double>() / sol.rate;
        } catch (const qf::TuningError& e) {
            out["numeric_error"] = e.what();
        }
    } else {
        auto tr = qf::two_regime_rate(cfg.spec, cfg.n);
        out["r_star"] = tr.rate;
        out["T"] = tr.T;
        out["T0"] = tr.T0;
        out["regime"] = tr.regular ? "regular" : "irregular";
    }
    emit(out_path, out);
    return 0;
}

int cmd_weights(const RunConfig& cfg, const std::string& out_path) {
    if (!cfg.spec.nonnegative())
        throw ConfigError("weights: optimal weights are defined for nonnegative functionals");
    auto sol =
        qf::separation_rate(cfg.spec, cfg.n, cfg.gamma, cfg.basis, cfg.slack, cfg.T_override);

    std::ostringstream os;
    const int d = cfg.spec.dimension();
    for (int j = 1; j <= d; ++j) os << "l" << j << ",";
    os << "c,q,w_star,v_star\n";
    for (std::size_t i = 0; i < sol.set.size(); ++i) {
        for (int j = 0; j < d; ++j) os << sol.set.indices[i].lattice[j] << ",";
        os << fmt(sol.set.c[i]) << "," << fmt(sol.set.q[i]) << "," << fmt(sol.weights[i]) << ","
           << fmt(sol.least_favorable[i]) << "\n";
    }
    atomic_write(out_path, os.str());
    return 0;
}

qf::Sample read_csv(const std::string& path, int ambient_dim) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open data file " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty data file");

    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::string cur;
        for (char ch : s) {
            if (ch == ',') {
                out.push_back(cur);
                cur.clear();
            } else if (ch != '\r') {
                cur += ch;
            }
        }
        out.push_back(cur);
        return out;
    };

    auto header = split(line);
    for (std::size_t a = 0; a < header.size(); ++a)
        for (std::size_t b = a + 1; b < header.size(); ++b)
            if (header[a] == header[b])
                throw DataError("duplicated header column \"" + header[a] + "\"");
    if (static_cast<int>(header.size()) != ambient_dim + 1)
        throw DataError("header mismatch: expected t1..t" + std::to_string(ambient_dim) +
                        ",x but found " + std::to_string(header.size()) + " columns");
    for (int j = 0; j < ambient_dim; ++j) {
        std::string want = "t" + std::to_string(j + 1);
        if (header[j] != want)
            throw DataError("header mismatch at column " + std::to_string(j + 1) + ": expected " +
                            want + ", found \"" + header[j] + "\"");
    }
    if (header.back() != "x") throw DataError("header mismatch: last column must be x");

    qf::Sample s;
    s.dimension = ambient_dim;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto cells = split(line);
        if (static_cast<int>(cells.size()) != ambient_dim + 1)
            throw DataError("line " + std::to_string(line_no) + ": expected " +
                            std::to_string(ambient_dim + 1) + " fields");
        for (int j = 0; j <= ambient_dim; ++j) {
            const std::string& cell = cells[j];
            char* end = nullptr;
            double v = std::strtod(cell.c_str(), &end);
            if (cell.empty() || end != cell.c_str() + cell.size())
                throw DataError("line " + std::to_string(line_no) + ": field \"" + cell +
                                "\" does not parse as a decimal number");
            if (j < ambient_dim) {
                if (!(v >= 0.0 && v <= 1.0))
                    throw DataError("line " + std::to_string(line_no) +
                                    ": design point outside [0,1]");
                s.t.push_back(v);
            } else {
                s.x.push_back(v);
            }
        }
    }
    return s;
}

int cmd_test(const RunConfig& cfg_in, const std::string& data_path, const std::string& out_path) {
    RunConfig cfg = cfg_in;
    qf::Sample sample = read_csv(data_path, cfg.spec.ambient_dimension());
    cfg.n = static_cast<long>(sample.size());
    qf::TestConfig tc = to_test_config(cfg);

    qf::TestReport rep = (cfg.mode == qf::TestMode::SharpNonnegative)
                             ? qf::sharp_test(sample, tc)
                             : qf::indefinite_test(sample, tc);
    json out = report_to_json(rep);
    out["n"] = sample.size();
    out["config"] = cfg.raw;
    emit(out_path, out);
    return 0;
}

int cmd_simulate(const RunConfig& cfg, const std::string& out_prefix, int flag_threads) {
    int threads = resolve_threads(cfg, flag_threads);
    qf::TestConfig tc = to_test_config(cfg);
    qf::ThetaMap f_null = parse_theta(cfg, cfg.null_spec, false);
    std::optional<qf::ThetaMap> f_alt;
    if (!cfg.alt_spec.is_null() && cfg.alt_spec.value("kind", "zero") != "zero")
        f_alt = parse_theta(cfg, cfg.alt_spec, true);

    auto res = qf::monte_carlo(tc, cfg.noise, f_null, f_alt, cfg.reps, cfg.seed, threads);

    std::ostringstream csv;
    csv << "rep,statistic,threshold,reject,hypothesis\n";
    for (const auto& r : res.records)
        csv << r.rep << "," << fmt(r.statistic) << "," << fmt(r.threshold) << ","
            << (r.reject ? 1 : 0) << "," << r.hypothesis << "\n";
    atomic_write(out_prefix + ".csv", csv.str());

    std::vector<double> null_stats;
    for (const auto& r : res.records)
        if (r.hypothesis == 0) null_stats.push_back(r.statistic);

    json out;
    out["type1"] = res.estimates.type1;
    out["type1_se"] = res.estimates.type1_se;
    if (res.estimates.type2) {
        out["type2"] = *res.estimates.type2;
        out["type2_se"] = *res.estimates.type2_se;
    }
    out["cumulative"] = res.estimates.cumulative;
    out["ks_null"] = qf::ks_distance_to_normal(null_stats);
    out["replications"] = res.estimates.replications;
    out["seed"] = res.estimates.seed;
    json resolved = cfg.raw;
    resolved["n"] = cfg.n;
    resolved["gamma"] = cfg.gamma;
    resolved["reps"] = cfg.reps;
    resolved["seed"] = cfg.seed;
    resolved["tau"] = cfg.tau;
    resolved["mode"] = cfg.mode == qf::TestMode::SharpNonnegative ? "sharp" : "indefinite";
    if (tc.class_bounds)
        resolved["class_bounds"] = {{"D3", tc.class_bounds->D3}, {"D4", tc.class_bounds->D4}};
    out["config"] = resolved;
    atomic_write(out_prefix + ".json", out.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"minimax tests for diagonal quadratic functionals"};
    app.require_subcommand(1);

    std::string config_path, out_path, data_path;
    int flag_seed = -1, flag_threads = 0;

    auto add_common = [&](CLI::App* sub, bool need_out) {
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        auto* o = sub->add_option("--out", out_path, "output path");
        if (need_out) o->required();
        sub->add_option("--seed", flag_seed, "override the config seed");
        sub->add_option("--threads", flag_threads, "worker count (default: QFTEST_THREADS or 1)");
    };

    auto* rate = app.add_subcommand("rate", "closed-form and numeric separation rates");
    add_common(rate, false);
    auto* weights = app.add_subcommand("weights", "optimal weight array as CSV");
    add_common(weights, true);
    auto* test = app.add_subcommand("test", "run the configured test on a data file");
    add_common(test, false);
    test->add_option("--data", data_path, "CSV with header t1..td,x")->required();
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo error-rate campaign");
    add_common(simulate, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        RunConfig cfg = load_config(config_path);
        if (flag_seed >= 0) cfg.seed = static_cast<std::uint64_t>(flag_seed);
        if (rate->parsed()) return cmd_rate(cfg, out_path);
        if (weights->parsed()) return cmd_weights(cfg, out_path);
        if (test->parsed()) return cmd_test(cfg, data_path, out_path);
        return cmd_simulate(cfg, out_path, flag_threads);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 4;
    }
}
