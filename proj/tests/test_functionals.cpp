#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "blowuplab/functionals.hpp"

using namespace blowuplab;

namespace {

ModelParams scenario()
{
    return ModelParams{.n = 1, .mu = 0.5, .nu_sq = 0.25, .p = 2.0, .R = 1.0};
}

FunctionalTrace traced_run(double eps, double dx, double t_max,
                           ModelParams m, double d_shift = 1.0)
{
    auto tp = make_test_function_params(m, d_shift);
    InitialData data;
    data.epsilon = eps;
    data.R = m.R;
    SolverConfig cfg;
    cfg.dx = dx;
    cfg.t_max = t_max;
    cfg.snapshot_count = 0;
    Trajectory tr = run(data, m, cfg, &tp);
    return compute_trace(tr, tp, m);
}

} // namespace

TEST_CASE("data constants against an independent quadrature oracle", "[functionals]")
{
    ModelParams m = scenario();
    auto tp = make_test_function_params(m, 1.0, 4.0);
    InitialData data = make_initial_data(m, 1.0);

    const DataConstants dc = data_constants(data, tp, m);
    // oracle: 2 * int_0^1 2 (1-r^2)^3 (e^{4r} + e^{-4r}) dr, adaptive Simpson
    auto f = [&](double r) {
        const double bump = std::pow(1.0 - r * r, 3);
        return 2.0 * bump * (std::exp(4.0 * r) + std::exp(-4.0 * r));
    };
    const double oracle = 2.0 * quad::adaptive_simpson(f, 0.0, 1.0, 1e-13);
    CHECK(dc.C0 == Catch::Approx(oracle).epsilon(1e-10));
    CHECK(dc.C0 > 0.0);

    // g absent: C0 reduces to the f-integral
    InitialData fonly = data;
    fonly.amplitude_g = 0.0;
    const DataConstants dcf = data_constants(fonly, tp, m);
    CHECK(dcf.C0 == Catch::Approx(dcf.If).epsilon(1e-14));
    CHECK(dcf.Ig == Catch::Approx(0.0).margin(1e-300));

    // C1 - C0 = (eta + (2mu-d)/2 - 1) * If, nonnegative once eta >= d+2
    const double gap = (tp.eta + 0.5 * (2.0 * m.mu - tp.d) - 1.0) * dc.If;
    CHECK(dc.C1 - dc.C0 == Catch::Approx(gap).epsilon(1e-12));
    CHECK(dc.C1 >= dc.C0);
}

TEST_CASE("data integrals converge under quadrature refinement", "[functionals]")
{
    // the same integrals with doubled Gauss panel counts
    ModelParams m = scenario();
    auto tp = make_test_function_params(m, 1.0);
    InitialData data = make_initial_data(m, 1.0);
    const double area = sphere_area(m.n);
    auto with_panels = [&](int panels) {
        auto f = [&](double r) {
            return (data.f_profile(r) + data.g_profile(r)) * phi_eta(r, tp.eta, m.n);
        };
        return area * quad::gauss_panels(f, 0.0, data.R, panels, 32);
    };
    const double c64 = with_panels(64), c128 = with_panels(128);
    CHECK(std::abs(c128 - c64) <= 1e-8 * std::abs(c128));
}

TEST_CASE("zero-data trace is identically zero", "[functionals]")
{
    ModelParams m = scenario();
    auto tp = make_test_function_params(m, 1.0);
    InitialData data;
    data.epsilon = 0.0;
    SolverConfig cfg;
    cfg.dx = 0.02;
    cfg.t_max = 3.0;
    Trajectory tr = run(data, m, cfg, &tp);
    FunctionalTrace ft = compute_trace(tr, tp, m);
    for (std::size_t s = 0; s < ft.size(); ++s) {
        CHECK(ft.F[s] == 0.0);
        CHECK(ft.G[s] == 0.0);
        CHECK(ft.NL[s] == 0.0);
    }
    REQUIRE(ft.has_L);
    CHECK(ft.L.back() == 0.0); // C0 eps / 24 with eps = 0

    LowerBoundReport rep = check_lower_bounds(ft, tp, m);
    CHECK(rep.F_positive.vacuous);
    CHECK(rep.G_lower.vacuous);
    CHECK(rep.all_ok());
}

TEST_CASE("initial values of F and G match the data integrals", "[functionals]")
{
    ModelParams m = scenario();
    auto tp = make_test_function_params(m, 1.0);
    InitialData data;
    data.epsilon = 0.1;
    const DataConstants dc = data_constants(data, tp, m);
    FunctionalTrace ft = traced_run(0.1, 0.005, 2.0, m);
    // in-run trapezoid vs Gauss panels: agreement at the grid's order
    CHECK(ft.F[0] == Catch::Approx(0.1 * dc.If).epsilon(1e-5));
    CHECK(ft.G[0] == Catch::Approx(0.1 * dc.Ig).epsilon(1e-5));
    CHECK(ft.C0 == Catch::Approx(dc.C0).epsilon(1e-14));
}

TEST_CASE("NL is nonnegative and its time integrals are monotone", "[functionals]")
{
    ModelParams m = scenario();
    FunctionalTrace ft = traced_run(0.2, 0.01, 8.0, m);
    REQUIRE(ft.has_L);
    for (std::size_t s = 0; s < ft.size(); ++s) CHECK(ft.NL[s] >= 0.0);
    for (std::size_t s = 1; s < ft.size(); ++s) {
        CHECK(ft.NL_cum[s] >= ft.NL_cum[s - 1]);
        CHECK(ft.NL_cum0[s] >= ft.NL_cum0[s - 1]);
    }
    // L starts at C0 eps / 24 and never decreases
    const double L1 = ft.C0 * ft.epsilon / 24.0;
    CHECK(ft.L[ft.idx_t1] >= L1);
    CHECK(ft.L[ft.idx_t1] == Catch::Approx(L1).epsilon(1e-2));
    for (std::size_t s = ft.idx_t1 + 1; s < ft.size(); ++s) CHECK(ft.L[s] >= ft.L[s - 1]);
}

TEST_CASE("velocity functional equals the F-identity to discretization order", "[functionals]")
{
    ModelParams m = scenario();
    // compare on a fixed window [0.5, 6): the launch transient below it has
    // its own shrinking timescale and would blur the order measurement
    auto max_rel = [&](double dx) {
        FunctionalTrace ft = traced_run(0.1, dx, 6.0, m);
        double worst = 0.0;
        for (std::size_t s = 1; s + 1 < ft.n_resolved; ++s) {
            if (ft.times[s] < 0.5) continue;
            const double dF = series_derivative(ft.F, ft.times, s, ft.n_resolved);
            const double pred = dF + (ft.eta - ft.d / (2.0 * (1.0 + ft.times[s]))) * ft.F[s];
            worst = std::max(worst, std::abs(pred - ft.G[s]) / std::abs(ft.G[s]));
        }
        return worst;
    };
    const double coarse = max_rel(0.02), fine = max_rel(0.01);
    INFO("identity errors " << coarse << " -> " << fine);
    CHECK(fine < 2e-3);
    CHECK(coarse / fine >= 2.5);
    CHECK(coarse / fine <= 6.0);
}

TEST_CASE("Hoelder ratio: equality case and scaling invariance", "[functionals]")
{
    // constant velocity profile makes the comparison an equality
    const double c = 0.37, Ipsi = 4.2;
    const double p = 2.0;
    std::vector<double> NL{std::pow(c, p) * Ipsi}, G{c * Ipsi}, I{Ipsi};
    auto r = holder_ratio(NL, G, I, p);
    CHECK(r[0] == Catch::Approx(1.0).epsilon(1e-14));

    // scaling v -> 5v moves both sides by 5^p
    std::vector<double> NL2{std::pow(5.0 * c, p) * Ipsi}, G2{5.0 * c * Ipsi};
    auto r2 = holder_ratio(NL2, G2, I, p);
    CHECK(r2[0] == Catch::Approx(r[0]).epsilon(1e-14));

    // G <= 0 samples are skipped
    std::vector<double> G3{0.0};
    auto r3 = holder_ratio(NL, G3, I, p);
    CHECK(std::isnan(r3[0]));
}

TEST_CASE("Hoelder ratio stays above 1 along a real run", "[functionals]")
{
    ModelParams m = scenario();
    FunctionalTrace ft = traced_run(0.1, 0.01, 8.0, m);
    REQUIRE(ft.has_L);
    for (std::size_t s = ft.idx_t1; s < ft.n_resolved; ++s) {
        if (ft.G[s] > 0.0) CHECK(ft.holder_ratio[s] >= 1.0 - 1e-6);
    }
}

TEST_CASE("weak-form residual decays at second order under refinement", "[functionals]")
{
    ModelParams m = scenario();
    auto max_rel = [&](double dx) {
        FunctionalTrace ft = traced_run(0.1, dx, 6.0, m);
        double worst = 0.0;
        for (std::size_t s = 0; s < ft.n_resolved; ++s) {
            const double scale = std::abs(gamma_coeff(ft.times[s], ft.d, ft.eta, m.mu) * ft.F[s])
                               + ft.NL_cum0[s] + ft.epsilon * ft.C1;
            worst = std::max(worst, std::abs(ft.weak_residual[s]) / scale);
        }
        return worst;
    };
    const double coarse = max_rel(0.02), fine = max_rel(0.01);
    INFO("weak residual " << coarse << " -> " << fine);
    CHECK(coarse / fine >= 2.5);
    CHECK(coarse / fine <= 6.0);
}

TEST_CASE("lower bounds hold with margins roughly linear in epsilon", "[functionals]")
{
    ModelParams m = scenario();
    auto tp = make_test_function_params(m, 1.0);
    double margins_F[3], margins_G[3];
    int i = 0;
    for (double eps : {0.05, 0.1, 0.2}) {
        FunctionalTrace ft = traced_run(eps, 0.01, 10.0, m);
        LowerBoundReport rep = check_lower_bounds(ft, tp, m);
        CHECK(rep.all_ok());
        CHECK(!rep.F_lower.vacuous);
        CHECK(rep.F_positive.ok);
        CHECK(rep.F_lower.margin > 0.0);
        CHECK(rep.G_lower.margin > 0.0);
        margins_F[i] = rep.F_lower.margin;
        margins_G[i] = rep.G_lower.margin;
        ++i;
    }
    for (int k = 0; k + 1 < 3; ++k) {
        const double rF = margins_F[k + 1] / margins_F[k];
        const double rG = margins_G[k + 1] / margins_G[k];
        CHECK(rF >= 1.4);
        CHECK(rF <= 3.0);
        CHECK(rG >= 1.4);
        CHECK(rG <= 3.0);
    }
}

TEST_CASE("trace rejects mismatched or missing observables", "[functionals]")
{
    ModelParams m = scenario();
    auto tp = make_test_function_params(m, 1.0);
    InitialData data;
    data.epsilon = 0.1;
    SolverConfig cfg;
    cfg.dx = 0.02;
    cfg.t_max = 1.0;
    Trajectory bare = run(data, m, cfg);
    CHECK_THROWS_AS(compute_trace(bare, tp, m), std::invalid_argument);

    Trajectory obs = run(data, m, cfg, &tp);
    auto tp2 = make_test_function_params(m, 1.2);
    CHECK_THROWS_AS(compute_trace(obs, tp2, m), std::invalid_argument);
    CHECK_NOTHROW(compute_trace(obs, tp, m));
}

TEST_CASE("runs ending before t = 1 have no L or H", "[functionals]")
{
    ModelParams m = scenario();
    auto tp = make_test_function_params(m, 1.0);
    InitialData data;
    data.epsilon = 0.1;
    SolverConfig cfg;
    cfg.dx = 0.02;
    cfg.t_max = 0.5;
    Trajectory tr = run(data, m, cfg, &tp);
    FunctionalTrace ft = compute_trace(tr, tp, m);
    CHECK(!ft.has_L);
    for (double x : ft.L) CHECK(std::isnan(x));
}
