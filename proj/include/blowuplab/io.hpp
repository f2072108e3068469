#pragma once

// Output formats: CSV with '.' decimal and full double precision (%.17g,
// locale-independent), JSON at shortest round-trip precision, files
// written via temp-then-rename so partial writes never land.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "blowuplab/functionals.hpp"
#include "blowuplab/lifespan.hpp"
#include "blowuplab/verifier.hpp"
#include "blowuplab/wave_solver.hpp"

namespace blowuplab::io {

/// Full-precision, locale-independent rendering of a double.
inline std::string fmt_full(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Writes content to a temporary sibling and renames it into place.
inline void atomic_write(const std::filesystem::path& path, const std::string& content)
{
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("atomic_write: cannot open " + tmp.string());
        os << content;
        if (!os) throw std::runtime_error("atomic_write: short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// CSV builders
// ---------------------------------------------------------------------------

/// Snapshot table (t, r, u, v), radially decimated by r_stride.
inline std::string trajectory_csv(const Trajectory& tr, int r_stride = 1)
{
    if (r_stride < 1) throw std::invalid_argument("trajectory_csv: r_stride must be >= 1");
    std::string out = "t,r,u,v\n";
    for (const RadialField& f : tr.snapshots) {
        for (std::size_t i = 0; i < f.u.size(); i += std::size_t(r_stride)) {
            out += fmt_full(f.t);
            out += ',';
            out += fmt_full(double(i) * f.dx);
            out += ',';
            out += fmt_full(f.u[i]);
            out += ',';
            out += fmt_full(f.v[i]);
            out += '\n';
        }
    }
    return out;
}

inline std::string trace_csv(const FunctionalTrace& ft)
{
    std::string out = "t,F,G,NL,NL_cum,L,H,holder_ratio,weak_residual,sup_u,sup_ut\n";
    for (std::size_t s = 0; s < ft.size(); ++s) {
        out += fmt_full(ft.times[s]);
        for (double v : {ft.F[s], ft.G[s], ft.NL[s], ft.NL_cum[s], ft.L[s], ft.H[s],
                         ft.holder_ratio[s], ft.weak_residual[s], ft.sup_u[s], ft.sup_ut[s]}) {
            out += ',';
            out += fmt_full(v);
        }
        out += '\n';
    }
    return out;
}

inline std::string sweep_csv(const SweepResult& sw)
{
    std::string out = "epsilon,T_dx,T_dx2,T_dx4,T_est,uncertainty,censored\n";
    for (const SweepEntry& e : sw.entries) {
        out += fmt_full(e.epsilon);
        for (int l = 0; l < 3; ++l) {
            out += ',';
            out += l < int(e.T_levels.size()) ? fmt_full(e.T_levels[std::size_t(l)]) : "nan";
        }
        out += ',';
        out += fmt_full(e.T_est);
        out += ',';
        out += fmt_full(e.uncertainty);
        out += ',';
        out += e.censored ? "1" : "0";
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON builders
// ---------------------------------------------------------------------------

inline nlohmann::json fit_report_json(const SweepResult& sw, const TestFunctionParams& tp,
                                      const ModelParams& m)
{
    auto [c_emp, spread] = lifespan_bound_constant(sw, tp, m);
    nlohmann::json j;
    j["slope_fit"] = sw.fit_available ? nlohmann::json(sw.slope_fit) : nlohmann::json();
    j["slope_theory"] = sw.slope_theory;
    j["C_emp"] = c_emp;
    j["residual"] = sw.fit_available ? nlohmann::json(sw.residual) : nlohmann::json();
    j["regime"] = sw.regime;
    j["intercept"] = sw.fit_available ? nlohmann::json(sw.intercept) : nlohmann::json();
    j["bound_constant_spread"] = spread;
    j["n_uncensored"] = sw.n_uncensored;
    return j;
}

inline nlohmann::json ledger_json(const std::vector<CheckResult>& ledger)
{
    nlohmann::json arr = nlohmann::json::array();
    for (const CheckResult& c : ledger) {
        nlohmann::json j;
        j["check_id"] = c.check_id;
        j["paper_anchor"] = c.anchor;
        j["status"] = to_string(c.status);
        j["margin"] = std::isfinite(c.margin) ? nlohmann::json(c.margin) : nlohmann::json();
        j["refinement_trend"] = to_string(c.refinement_trend);
        j["detail"] = c.detail;
        arr.push_back(std::move(j));
    }
    return arr;
}

} // namespace blowuplab::io
