#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "blowuplab/verifier.hpp"

using namespace blowuplab;

namespace {
ModelParams scenario()
{
    return ModelParams{.n = 1, .mu = 0.5, .nu_sq = 0.25, .p = 2.0, .R = 1.0};
}
} // namespace

TEST_CASE("adjoint identity holds to machine precision", "[verifier]")
{
    CheckResult c = check_adjoint_identity();
    CHECK(c.status == CheckStatus::pass);
    CHECK(c.margin >= 0.0);
    CHECK(c.anchor == "r01");
}

TEST_CASE("FD application of the conjugate operator converges to the kernel product",
          "[verifier]")
{
    CheckResult c = check_conjugate_operator_fd();
    CHECK(c.status == CheckStatus::pass);
    CHECK(c.refinement_trend == Trend::improving);
}

TEST_CASE("static special-function checks all pass", "[verifier]")
{
    CHECK(check_eigenrelation().status == CheckStatus::pass);
    CHECK(check_temporal_factor().status == CheckStatus::pass);
    CHECK(check_xi_ode().status == CheckStatus::pass);
    CHECK(check_kernel_formula().status == CheckStatus::pass);
    CHECK(check_eta_tilde().status == CheckStatus::pass);
    CHECK(check_transform_invariance().status == CheckStatus::pass);
}

TEST_CASE("kernel sign check with tightness probes", "[verifier]")
{
    CheckResult c = check_kernel_sign();
    CHECK(c.status == CheckStatus::pass);
    CHECK(c.margin >= 0.0);
    CHECK(c.detail.find("tightness") != std::string::npos);
}

TEST_CASE("spatial-factor growth stays bounded", "[verifier]")
{
    ModelParams m = scenario();
    auto tp = make_test_function_params(m, 1.0, 2.0);
    CheckResult c = check_phi_growth(m, tp, 2.0);
    CHECK(c.status == CheckStatus::pass);

    ModelParams m3 = m;
    m3.n = 3;
    auto tp3 = make_test_function_params(m3, 1.0, 2.0);
    CheckResult c3 = check_phi_growth(m3, tp3, 2.0, 21, 12.0);
    CHECK(c3.status == CheckStatus::pass);

    CHECK_THROWS_AS(check_phi_growth(m, tp, 1.0), std::domain_error);
    CHECK_THROWS_AS(check_phi_growth(m, tp, 0.5), std::domain_error);
}

TEST_CASE("growth quotient matches the 1D closed form", "[verifier]")
{
    // int_0^{t+R} (e^{eta s} + e^{-eta s})^2 ds has an elementary form
    const double eta = 2.0, R = 1.0, t = 3.0;
    auto scaled = [&](double s) { return std::exp(2.0 * (log_phi_eta(s, eta, 1) - eta * t)); };
    const double quadrature = quad::gauss_panels(scaled, 0.0, t + R, 32, 32);
    const double b = t + R;
    const double exact = (std::exp(2.0 * eta * b) - 1.0) / (2.0 * eta)
                       - (std::exp(-2.0 * eta * b) - 1.0) / (2.0 * eta) + 2.0 * b;
    CHECK(quadrature == Catch::Approx(exact * std::exp(-2.0 * eta * t)).epsilon(1e-10));
}

TEST_CASE("scalar frozen-value checks", "[verifier]")
{
    ModelParams m = scenario();
    auto tp = make_test_function_params(m, 1.0);
    auto checks = check_scalar_functions(m, tp);
    CHECK(checks.size() == 8);
    for (const auto& c : checks) {
        INFO(c.check_id << ": " << c.detail);
        CHECK(c.status == CheckStatus::pass);
    }
}

TEST_CASE("data-constant checks", "[verifier]")
{
    ModelParams m = scenario();
    auto tp = make_test_function_params(m, 1.0);
    InitialData data = make_initial_data(m, 0.1);
    auto checks = check_data_constants(data, tp, m);
    REQUIRE(checks.size() == 2);
    CHECK(checks[0].status == CheckStatus::pass);
    CHECK(checks[1].status == CheckStatus::pass);
}

TEST_CASE("proof chain passes on a short scenario", "[verifier][chain]")
{
    ModelParams m = scenario();
    auto tp = make_test_function_params(m, 1.0);
    InitialData data = make_initial_data(m, 0.1);

    TraceCheckInputs in;
    in.tp = tp;
    in.model = m;
    for (double dx : {0.02, 0.01}) {
        SolverConfig cfg;
        cfg.dx = dx;
        cfg.t_max = 8.0;
        cfg.snapshot_count = 0;
        Trajectory tr = run(data, m, cfg, &tp);
        in.levels.push_back(compute_trace(tr, tp, m));
    }
    auto checks = check_proof_chain(in);
    std::set<std::string> anchors;
    for (const auto& c : checks) {
        INFO(c.check_id << " [" << c.anchor << "]: " << c.detail);
        CHECK(c.status != CheckStatus::fail);
        anchors.insert(c.anchor);
    }
    for (const char* a : {"eq6", "deriv2", "wF1def", "wF2def", "F1postive0", "F1postive",
                          "F2postive0", "F2postive", "eq6b", "wF1++", "v01", "G2+bis41", "L1",
                          "GG", "45", "vt09", "bl", "int6"})
        CHECK(anchors.count(a) == 1);
}

TEST_CASE("proof chain passes identically in the non-oscillatory regime", "[verifier][chain]")
{
    // same checks, same tolerances, positive discriminant
    ModelParams m{.n = 1, .mu = 3.0, .nu_sq = 0.5, .p = 1.5, .R = 1.0};
    REQUIRE(m.delta() > 0.0);
    auto tp = make_test_function_params(m, default_shift(m));
    InitialData data = make_initial_data(m, 0.3);

    TraceCheckInputs in;
    in.tp = tp;
    in.model = m;
    for (double dx : {0.02, 0.01}) {
        SolverConfig cfg;
        cfg.dx = dx;
        cfg.t_max = 8.0;
        cfg.snapshot_count = 0;
        Trajectory tr = run(data, m, cfg, &tp);
        in.levels.push_back(compute_trace(tr, tp, m));
    }
    for (const auto& c : check_proof_chain(in)) {
        INFO(c.check_id << " [" << c.anchor << "]: " << c.detail);
        CHECK(c.status != CheckStatus::fail);
    }
}

TEST_CASE("proof chain is vacuous on zero data", "[verifier][chain]")
{
    ModelParams m = scenario();
    auto tp = make_test_function_params(m, 1.0);
    InitialData data;
    data.epsilon = 0.0;

    TraceCheckInputs in;
    in.tp = tp;
    in.model = m;
    SolverConfig cfg;
    cfg.dx = 0.02;
    cfg.t_max = 3.0;
    Trajectory tr = run(data, m, cfg, &tp);
    in.levels.push_back(compute_trace(tr, tp, m));
    auto checks = check_proof_chain(in);
    for (const auto& c : checks) {
        INFO(c.check_id);
        CHECK(c.status == CheckStatus::vacuous);
    }
}

TEST_CASE("lifespan bound check on synthetic sweeps", "[verifier]")
{
    ModelParams m = scenario();
    auto tp = make_test_function_params(m, 1.0);
    SweepResult sw;
    // T = 2.3 eps^{-2} reproduces a constant bound ratio
    for (double eps : {0.05, 0.1, 0.2, 0.4}) {
        SweepEntry e;
        e.epsilon = eps;
        e.T_est = 2.3 * std::pow(eps, -2.0);
        e.censored = false;
        sw.entries.push_back(e);
    }
    CheckResult ok = check_lifespan_inequality(sw, tp, m);
    CHECK(ok.status == CheckStatus::pass);

    SweepResult small;
    small.entries.push_back(sw.entries[0]);
    CHECK(check_lifespan_inequality(small, tp, m).status == CheckStatus::vacuous);

    SweepResult censored = sw;
    for (auto& e : censored.entries) e.censored = true;
    CHECK(check_lifespan_inequality(censored, tp, m).status == CheckStatus::vacuous);
}

TEST_CASE("full ledger on a reduced scenario", "[verifier][ledger]")
{
    ModelParams m = scenario();
    auto tp = make_test_function_params(m, 1.0);
    InitialData data = make_initial_data(m, 0.1);
    SolverConfig solver;
    solver.dx = 0.01;

    VerifyOptions opt;
    opt.refinements = 2;
    opt.trace_t_max = 6.0;
    opt.with_sweep = true;
    opt.sweep_epsilons = {0.3, 0.45, 0.675};
    opt.sweep_t_max = 12.0;
    opt.sweep_dx_scale = 1.0;

    auto ledger = run_full_ledger(m, tp, data, solver, opt);
    CHECK(ledger.size() >= 12);
    CHECK(ledger_all_pass(ledger));
    for (std::size_t i = 1; i < ledger.size(); ++i)
        CHECK(ledger[i - 1].check_id <= ledger[i].check_id);

    std::set<std::string> anchors;
    for (const auto& c : ledger) anchors.insert(c.anchor);
    // one entry per statement of the construction, complete by table
    for (const char* a :
         {"cp", "test12", "lmabdaK", "lambda", "Kb", "tildeeta", "neg", "wF1def", "F1postive0",
          "F1postive", "C0fg", "gamma", "eq6", "Cfg", "wF1++", "wF2def", "F2postive0",
          "F2postive", "eta1", "gamma1", "sigma1-exp", "G2+bis41", "v01", "psi", "L1", "GG",
          "45", "vt09", "bl", "theta", "int6", "ep0"}) {
        INFO("anchor " << a);
        CHECK(anchors.count(a) == 1);
    }
}
