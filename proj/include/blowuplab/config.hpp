#pragma once

// Flat key = value configuration with one section per module. Every field
// has an embedded default (the printable default config reproduces the
// oscillatory-regime reference scenario) and parsing is strict: unknown
// keys are errors, so configs cannot silently drift.

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "blowuplab/special_functions.hpp"
#include "blowuplab/verifier.hpp"
#include "blowuplab/wave_solver.hpp"

namespace blowuplab {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    ModelParams model{.n = 1, .mu = 0.5, .nu_sq = 0.25, .p = 2.0, .R = 1.0};

    bool d_auto = false;   ///< d = mu + 0.1 ((p+1)/(p-1) - n - mu)
    double d = 1.0;
    bool eta_auto = true;  ///< eta = eta_1(d, mu, nu)
    double eta = 0.0;

    SolverConfig solver{.dx = 0.005,
                        .cfl = 0.45,
                        .t_max = 120.0,
                        .blowup_threshold = 1e6,
                        .outer_margin = 1.0,
                        .sample_stride = 8,
                        .snapshot_count = 17,
                        .nonlinearity = true,
                        .support_tol_rel = 5e-3};

    double amplitude_f = 1.0;
    double amplitude_g = 1.0;
    double epsilon = 0.1;

    std::vector<double> sweep_epsilons{0.05, 0.1, 0.2, 0.4};
    int refinements = 3;

    double verify_t_max = 12.0;
    std::vector<double> verify_sweep_epsilons{0.2, 0.3, 0.45};
    double verify_sweep_t_max = 30.0;
    double resolve_guard = 0.5;

    std::string output_dir = "out";
    int csv_r_stride = 4;

    // ---- derived -----------------------------------------------------

    double shift() const { return d_auto ? default_shift(model) : d; }

    TestFunctionParams test_params() const
    {
        return make_test_function_params(model, shift(),
                                         eta_auto ? std::nullopt : std::optional<double>(eta));
    }

    InitialData data() const
    {
        InitialData di;
        di.amplitude_f = amplitude_f;
        di.amplitude_g = amplitude_g;
        di.R = model.R;
        di.epsilon = epsilon;
        return di;
    }

    VerifyOptions verify_options() const
    {
        VerifyOptions v;
        v.refinements = refinements;
        v.trace_t_max = verify_t_max;
        v.sweep_epsilons = verify_sweep_epsilons;
        v.sweep_t_max = verify_sweep_t_max;
        v.resolve_guard = resolve_guard;
        return v;
    }

    /// Throws config_error on violated parse-time invariants; returns
    /// human-readable warnings for soft ones.
    std::vector<std::string> validate(bool sweep_requested = false) const
    {
        std::vector<std::string> warnings;
        try {
            model.validate();
            solver.validate(model.n);
            if (!(shift() > model.mu)) throw std::invalid_argument("d must exceed mu");
            (void)test_params();
            if (epsilon < 0.0) throw std::invalid_argument("epsilon must be >= 0");
            if (csv_r_stride < 1) throw std::invalid_argument("csv_r_stride must be >= 1");
            if (refinements < 1 || refinements > 4)
                throw std::invalid_argument("refinements must lie in [1, 4]");
            if (sweep_requested) {
                const double theta = lifespan_theta(model.n, shift(), model.p);
                if (!(theta > 0.0))
                    throw std::invalid_argument(
                        "sweep needs theta > 0: take d below (p+1)/(p-1) - n");
                for (double e : sweep_epsilons)
                    if (!(e > 0.0)) throw std::invalid_argument("sweep epsilons must be > 0");
                if (sweep_epsilons.empty())
                    throw std::invalid_argument("sweep needs at least one epsilon");
            }
        } catch (const std::exception& e) {
            throw config_error(e.what());
        }
        const double p_crit = model.p_crit();
        if (!(model.p < p_crit))
            warnings.push_back("p = " + std::to_string(model.p)
                               + " is not below the critical power "
                               + std::to_string(p_crit)
                               + " at dimension n + mu; blow-up is not guaranteed");
        return warnings;
    }
};

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

namespace detail_cfg {

inline std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& v, const std::string& key)
{
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw config_error("invalid number for " + key + ": '" + v + "'");
    }
}

inline int parse_int(const std::string& v, const std::string& key)
{
    try {
        std::size_t pos = 0;
        const int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw config_error("invalid integer for " + key + ": '" + v + "'");
    }
}

inline bool parse_bool(const std::string& v, const std::string& key)
{
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    throw config_error("invalid boolean for " + key + ": '" + v + "'");
}

inline std::vector<double> parse_list(const std::string& v, const std::string& key)
{
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(parse_double(item, key));
    }
    if (out.empty()) throw config_error("empty list for " + key);
    return out;
}

inline std::string join(const std::vector<double>& xs)
{
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        std::ostringstream os;
        os.precision(17);
        os << xs[i];
        out += os.str();
    }
    return out;
}

} // namespace detail_cfg

inline RunConfig parse_config_text(const std::string& text)
{
    RunConfig cfg;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail_cfg::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error("line " + std::to_string(lineno) + ": malformed section");
            section = detail_cfg::trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = detail_cfg::trim(line.substr(0, eq));
        const std::string val = detail_cfg::trim(line.substr(eq + 1));
        const std::string full = section + "." + key;
        using namespace detail_cfg;

        if (full == "model.n") cfg.model.n = parse_int(val, full);
        else if (full == "model.mu") cfg.model.mu = parse_double(val, full);
        else if (full == "model.nu_sq") cfg.model.nu_sq = parse_double(val, full);
        else if (full == "model.p") cfg.model.p = parse_double(val, full);
        else if (full == "model.R") cfg.model.R = parse_double(val, full);
        else if (full == "test_function.d") {
            if (val == "auto") cfg.d_auto = true;
            else { cfg.d_auto = false; cfg.d = parse_double(val, full); }
        }
        else if (full == "test_function.eta") {
            if (val == "auto") cfg.eta_auto = true;
            else { cfg.eta_auto = false; cfg.eta = parse_double(val, full); }
        }
        else if (full == "solver.dx") cfg.solver.dx = parse_double(val, full);
        else if (full == "solver.cfl") cfg.solver.cfl = parse_double(val, full);
        else if (full == "solver.t_max") cfg.solver.t_max = parse_double(val, full);
        else if (full == "solver.blowup_threshold") cfg.solver.blowup_threshold = parse_double(val, full);
        else if (full == "solver.outer_margin") cfg.solver.outer_margin = parse_double(val, full);
        else if (full == "solver.sample_stride") cfg.solver.sample_stride = parse_int(val, full);
        else if (full == "solver.snapshot_count") cfg.solver.snapshot_count = parse_int(val, full);
        else if (full == "solver.nonlinearity") cfg.solver.nonlinearity = parse_bool(val, full);
        else if (full == "solver.support_tol_rel") cfg.solver.support_tol_rel = parse_double(val, full);
        else if (full == "data.amplitude_f") cfg.amplitude_f = parse_double(val, full);
        else if (full == "data.amplitude_g") cfg.amplitude_g = parse_double(val, full);
        else if (full == "data.epsilon") cfg.epsilon = parse_double(val, full);
        else if (full == "sweep.epsilons") cfg.sweep_epsilons = parse_list(val, full);
        else if (full == "sweep.refinements") cfg.refinements = parse_int(val, full);
        else if (full == "verify.t_max") cfg.verify_t_max = parse_double(val, full);
        else if (full == "verify.sweep_epsilons") cfg.verify_sweep_epsilons = parse_list(val, full);
        else if (full == "verify.sweep_t_max") cfg.verify_sweep_t_max = parse_double(val, full);
        else if (full == "verify.resolve_guard") cfg.resolve_guard = parse_double(val, full);
        else if (full == "output.dir") cfg.output_dir = val;
        else if (full == "output.csv_r_stride") cfg.csv_r_stride = parse_int(val, full);
        else throw config_error("line " + std::to_string(lineno) + ": unknown key '" + full + "'");
    }
    return cfg;
}

inline RunConfig parse_config_file(const std::string& path)
{
    std::ifstream is(path);
    if (!is) throw config_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config_text(ss.str());
}

inline std::string config_to_text(const RunConfig& cfg)
{
    std::ostringstream os;
    os.precision(17);
    os << "[model]\n"
       << "n = " << cfg.model.n << "\n"
       << "mu = " << cfg.model.mu << "\n"
       << "nu_sq = " << cfg.model.nu_sq << "\n"
       << "p = " << cfg.model.p << "\n"
       << "R = " << cfg.model.R << "\n\n";
    os << "[test_function]\n";
    if (cfg.d_auto) os << "d = auto\n";
    else os << "d = " << cfg.d << "\n";
    if (cfg.eta_auto) os << "eta = auto\n";
    else os << "eta = " << cfg.eta << "\n";
    os << "\n[solver]\n"
       << "dx = " << cfg.solver.dx << "\n"
       << "cfl = " << cfg.solver.cfl << "\n"
       << "t_max = " << cfg.solver.t_max << "\n"
       << "blowup_threshold = " << cfg.solver.blowup_threshold << "\n"
       << "outer_margin = " << cfg.solver.outer_margin << "\n"
       << "sample_stride = " << cfg.solver.sample_stride << "\n"
       << "snapshot_count = " << cfg.solver.snapshot_count << "\n"
       << "nonlinearity = " << (cfg.solver.nonlinearity ? "on" : "off") << "\n"
       << "support_tol_rel = " << cfg.solver.support_tol_rel << "\n\n";
    os << "[data]\n"
       << "amplitude_f = " << cfg.amplitude_f << "\n"
       << "amplitude_g = " << cfg.amplitude_g << "\n"
       << "epsilon = " << cfg.epsilon << "\n\n";
    os << "[sweep]\n"
       << "epsilons = " << detail_cfg::join(cfg.sweep_epsilons) << "\n"
       << "refinements = " << cfg.refinements << "\n\n";
    os << "[verify]\n"
       << "t_max = " << cfg.verify_t_max << "\n"
       << "sweep_epsilons = " << detail_cfg::join(cfg.verify_sweep_epsilons) << "\n"
       << "sweep_t_max = " << cfg.verify_sweep_t_max << "\n"
       << "resolve_guard = " << cfg.resolve_guard << "\n\n";
    os << "[output]\n"
       << "dir = " << cfg.output_dir << "\n"
       << "csv_r_stride = " << cfg.csv_r_stride << "\n";
    return os.str();
}

} // namespace blowuplab
