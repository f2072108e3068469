#pragma once

// Lifespan measurement: epsilon sweeps with grid-refinement extrapolation
// of the detected blow-up time, a log-log fit of T against epsilon, and
// the side-by-side comparison of discriminant regimes.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "blowuplab/parallel.hpp"
#include "blowuplab/special_functions.hpp"
#include "blowuplab/wave_solver.hpp"

namespace blowuplab {

struct SweepEntry {
    double epsilon = 0.0;
    std::vector<double> T_levels;  ///< detected times at dx, dx/2, dx/4, ...
    double T_est = std::numeric_limits<double>::quiet_NaN();
    double uncertainty = std::numeric_limits<double>::quiet_NaN();
    bool censored = false;  ///< some level reached t_max without blowing up
    double cone_excess_cells = 0.0;  ///< worst support overshoot of t + R, in cells
};

struct SweepResult {
    std::vector<SweepEntry> entries;  ///< sorted by epsilon
    double slope_fit = std::numeric_limits<double>::quiet_NaN();
    double intercept = std::numeric_limits<double>::quiet_NaN();
    double residual = std::numeric_limits<double>::quiet_NaN();  ///< fit RMS
    double slope_theory = 0.0;  ///< -2(p-1)/(2-(n+d-1)(p-1))
    std::string regime;         ///< "delta<0" | "delta=0" | "delta>0"
    int refinements = 3;
    bool fit_available = false;
    int n_uncensored = 0;
};

inline std::string regime_tag(const ModelParams& m)
{
    const double delta = m.delta();
    if (delta < 0.0) return "delta<0";
    if (delta > 0.0) return "delta>0";
    return "delta=0";
}

/// Runs each epsilon at `refinements` grid levels (dx, dx/2, ...),
/// extrapolates the detected time, and fits log T against log eps over the
/// uncensored entries. Entries that reach t_max anywhere are censored and
/// excluded from the fit. Levels run concurrently; the result does not
/// depend on the schedule.
inline SweepResult sweep(const ModelParams& m, const TestFunctionParams& tp,
                         const InitialData& data_template, const SolverConfig& cfg,
                         std::vector<double> epsilons, int refinements = 3)
{
    if (epsilons.empty()) throw std::invalid_argument("sweep: need at least one epsilon");
    for (double e : epsilons)
        if (!(e > 0.0)) throw std::invalid_argument("sweep: epsilons must be positive");
    if (refinements < 1 || refinements > 4)
        throw std::invalid_argument("sweep: refinements must lie in [1, 4]");
    if (!(tp.theta > 0.0))
        throw std::invalid_argument("sweep: theta must be positive for the configured d");
    std::sort(epsilons.begin(), epsilons.end());

    SweepResult res;
    res.regime = regime_tag(m);
    res.refinements = refinements;
    res.slope_theory = -lifespan_exponent(m, tp.d);

    const std::size_t n_eps = epsilons.size();
    const std::size_t n_tasks = n_eps * std::size_t(refinements);
    std::vector<double> T(n_tasks, std::numeric_limits<double>::quiet_NaN());
    std::vector<double> cone(n_tasks, 0.0);
    std::vector<char> blew(n_tasks, 0);

    parallel_for(n_tasks, [&](std::size_t task) {
        const std::size_t ie = task / refinements;
        const int level = int(task % refinements);
        InitialData data = data_template;
        data.epsilon = epsilons[ie];
        SolverConfig c = cfg;
        c.dx = cfg.dx / double(1 << level);
        c.snapshot_count = 0;
        Trajectory tr = run(data, m, c);
        if (tr.outcome == Outcome::blew_up) {
            blew[task] = 1;
            T[task] = tr.T_detect;
        }
        double worst = 0.0;
        for (std::size_t s = 0; s < tr.times.size(); ++s)
            worst = std::max(worst,
                             (tr.support_radius[s] - tr.times[s] - data.R) / c.dx);
        cone[task] = worst;
    });

    res.entries.resize(n_eps);
    for (std::size_t ie = 0; ie < n_eps; ++ie) {
        SweepEntry& e = res.entries[ie];
        e.epsilon = epsilons[ie];
        bool all = true;
        for (int l = 0; l < refinements; ++l) {
            const std::size_t task = ie * refinements + std::size_t(l);
            e.T_levels.push_back(T[task]);
            all = all && blew[task];
            e.cone_excess_cells = std::max(e.cone_excess_cells, cone[task]);
        }
        e.censored = !all;
        if (e.censored) continue;
        if (refinements >= 3) {
            // extrapolate from the three finest levels
            const std::size_t last = e.T_levels.size() - 1;
            const auto ex = blowup_time_extrapolate(e.T_levels[last - 2], e.T_levels[last - 1],
                                                    e.T_levels[last]);
            e.T_est = ex.T_est;
            e.uncertainty = ex.uncertainty;
        } else if (refinements == 2) {
            e.T_est = 2.0 * e.T_levels[1] - e.T_levels[0];
            e.uncertainty = std::abs(e.T_levels[1] - e.T_levels[0]);
        } else {
            e.T_est = e.T_levels[0];
            e.uncertainty = 0.0;
        }
        ++res.n_uncensored;
    }

    // least squares of log T against log eps
    if (res.n_uncensored >= 3) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (const auto& e : res.entries) {
            if (e.censored || !(e.T_est > 0.0)) continue;
            const double x = std::log(e.epsilon), y = std::log(e.T_est);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++n;
        }
        const double det = n * sxx - sx * sx;
        if (n >= 3 && std::abs(det) > 1e-12) {
            res.slope_fit = (n * sxy - sx * sy) / det;
            res.intercept = (sy * sxx - sx * sxy) / det;
            double ss = 0.0;
            for (const auto& e : res.entries) {
                if (e.censored || !(e.T_est > 0.0)) continue;
                const double r = std::log(e.T_est)
                               - (res.intercept + res.slope_fit * std::log(e.epsilon));
                ss += r * r;
            }
            res.residual = std::sqrt(ss / n);
            res.fit_available = true;
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// Regime comparison
// ---------------------------------------------------------------------------

struct RegimeComparison {
    SweepResult neg;  ///< oscillatory side (delta < 0)
    SweepResult pos;  ///< non-oscillatory side (delta > 0)
    // bound-consistency constants eps^{-(p-1)} / ((1+T)^theta - 2^theta)
    double C_emp_neg = 0.0, C_emp_pos = 0.0;
    double spread_neg = 0.0, spread_pos = 0.0;
    bool neg_bound_ok = false, pos_bound_ok = false;
};

/// Empirical constant of the lifespan bound over a sweep: per-entry
/// c = eps^{-(p-1)} / ((1+T_est)^theta - 2^theta); returns {min c, max/min}.
/// Entries censored or with T_est <= 1 (denominator nonpositive) skipped.
inline std::pair<double, double> lifespan_bound_constant(const SweepResult& sw,
                                                         const TestFunctionParams& tp,
                                                         const ModelParams& m)
{
    double cmin = std::numeric_limits<double>::infinity();
    double cmax = 0.0;
    for (const auto& e : sw.entries) {
        if (e.censored || !(e.T_est > 1.0)) continue;
        const double denom = std::pow(1.0 + e.T_est, tp.theta) - std::pow(2.0, tp.theta);
        if (!(denom > 0.0)) continue;
        const double c = std::pow(e.epsilon, -(m.p - 1.0)) / denom;
        cmin = std::min(cmin, c);
        cmax = std::max(cmax, c);
    }
    if (!(cmax > 0.0)) return {0.0, std::numeric_limits<double>::infinity()};
    return {cmin, cmax / cmin};
}

/// Runs one sweep per regime and evaluates the bound consistency on each;
/// the blow-up machinery must work identically on both sides of delta = 0.
inline RegimeComparison compare_regimes(const ModelParams& m_neg, const TestFunctionParams& tp_neg,
                                        std::vector<double> eps_neg, const ModelParams& m_pos,
                                        const TestFunctionParams& tp_pos,
                                        std::vector<double> eps_pos,
                                        const InitialData& data_template, const SolverConfig& cfg,
                                        int refinements = 3)
{
    if (!(m_neg.delta() < 0.0) || !(m_pos.delta() > 0.0))
        throw std::invalid_argument(
            "compare_regimes: need discriminant(neg) < 0 < discriminant(pos)");
    if (m_neg.n != m_pos.n || m_neg.p != m_pos.p)
        throw std::invalid_argument("compare_regimes: models must share n and p");

    RegimeComparison rc;
    rc.neg = sweep(m_neg, tp_neg, data_template, cfg, std::move(eps_neg), refinements);
    rc.pos = sweep(m_pos, tp_pos, data_template, cfg, std::move(eps_pos), refinements);
    auto [cn, sn] = lifespan_bound_constant(rc.neg, tp_neg, m_neg);
    auto [cp, sp] = lifespan_bound_constant(rc.pos, tp_pos, m_pos);
    rc.C_emp_neg = cn;
    rc.spread_neg = sn;
    rc.C_emp_pos = cp;
    rc.spread_pos = sp;
    rc.neg_bound_ok = cn > 0.0 && sn < 10.0;
    rc.pos_bound_ok = cp > 0.0 && sp < 10.0;
    return rc;
}

} // namespace blowuplab
