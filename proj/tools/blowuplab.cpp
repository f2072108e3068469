// Command-line laboratory: verification ledger, single simulations,
// lifespan sweeps, and direct evaluation of the special functions.

#include <clocale>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "blowuplab/config.hpp"
#include "blowuplab/functionals.hpp"
#include "blowuplab/io.hpp"
#include "blowuplab/lifespan.hpp"
#include "blowuplab/special_functions.hpp"
#include "blowuplab/verifier.hpp"
#include "blowuplab/wave_solver.hpp"

using namespace blowuplab;

namespace {

constexpr const char* kFooter =
    "Exit codes: 0 success, 1 verification failure, 2 configuration or domain error,\n"
    "            3 solver instability diagnostic, 4 sweep fully censored.\n"
    "BLOWUPLAB_THREADS caps the number of concurrent runs.";

int cmd_verify(const RunConfig& cfg)
{
    for (const std::string& w : cfg.validate(false)) std::cerr << "warning: " << w << "\n";
    const TestFunctionParams tp = cfg.test_params();
    VerifyOptions opt = cfg.verify_options();

    auto ledger = run_full_ledger(cfg.model, tp, cfg.data(), cfg.solver, opt);

    std::printf("%-28s %-12s %-8s %-13s %s\n", "check", "anchor", "status", "margin", "trend");
    for (const auto& c : ledger) {
        std::printf("%-28s %-12s %-8s %-13.4g %s\n", c.check_id.c_str(), c.anchor.c_str(),
                    to_string(c.status), c.margin, to_string(c.refinement_trend));
        if (c.status == CheckStatus::fail) std::printf("    ! %s\n", c.detail.c_str());
    }
    const std::filesystem::path out = std::filesystem::path(cfg.output_dir) / "ledger.json";
    io::atomic_write(out, io::ledger_json(ledger).dump(2) + "\n");
    std::printf("ledger written to %s\n", out.string().c_str());

    int fails = 0, vac = 0;
    for (const auto& c : ledger) {
        fails += c.status == CheckStatus::fail;
        vac += c.status == CheckStatus::vacuous;
    }
    std::printf("%zu checks: %d failed, %d vacuous\n", ledger.size(), fails, vac);
    return fails == 0 ? 0 : 1;
}

int cmd_simulate(const RunConfig& cfg)
{
    for (const std::string& w : cfg.validate(false)) std::cerr << "warning: " << w << "\n";
    const TestFunctionParams tp = cfg.test_params();
    Trajectory tr = run(cfg.data(), cfg.model, cfg.solver, &tp);
    FunctionalTrace ft = compute_trace(tr, tp, cfg.model, TraceOptions{cfg.resolve_guard});

    const std::filesystem::path dir(cfg.output_dir);
    io::atomic_write(dir / "trajectory.csv", io::trajectory_csv(tr, cfg.csv_r_stride));
    io::atomic_write(dir / "trace.csv", io::trace_csv(ft));

    if (tr.outcome == Outcome::blew_up)
        std::printf("blew_up T_detect = %.10g\n", tr.T_detect);
    else
        std::printf("completed t_end = %.10g\n", tr.t_end);
    std::printf("files: %s, %s\n", (dir / "trajectory.csv").string().c_str(),
                (dir / "trace.csv").string().c_str());
    return 0;
}

int cmd_sweep(const RunConfig& cfg)
{
    for (const std::string& w : cfg.validate(true)) std::cerr << "warning: " << w << "\n";
    const TestFunctionParams tp = cfg.test_params();
    SweepResult sw = sweep(cfg.model, tp, cfg.data(), cfg.solver, cfg.sweep_epsilons,
                           cfg.refinements);

    const std::filesystem::path dir(cfg.output_dir);
    io::atomic_write(dir / "sweep.csv", io::sweep_csv(sw));
    io::atomic_write(dir / "fit.json", io::fit_report_json(sw, tp, cfg.model).dump(2) + "\n");

    for (const auto& e : sw.entries) {
        if (e.censored)
            std::printf("eps = %-8.5g censored (no blow-up by t_max at some level)\n", e.epsilon);
        else
            std::printf("eps = %-8.5g T_est = %-10.6g +- %.2g\n", e.epsilon, e.T_est,
                        e.uncertainty);
    }
    if (sw.n_uncensored == 0) {
        std::printf("all entries censored; raise t_max or epsilon\n");
        return 4;
    }
    if (sw.fit_available)
        std::printf("slope_fit = %.6g vs slope_theory = %.6g (fit RMS %.2g)\n", sw.slope_fit,
                    sw.slope_theory, sw.residual);
    else
        std::printf("warning: fit unavailable (needs >= 3 uncensored entries); "
                    "slope_theory = %.6g\n",
                    sw.slope_theory);
    CheckResult bound = check_lifespan_inequality(sw, tp, cfg.model);
    std::printf("lifespan bound consistency: %s (%s)\n", to_string(bound.status),
                bound.detail.c_str());
    std::printf("files: %s, %s\n", (dir / "sweep.csv").string().c_str(),
                (dir / "fit.json").string().c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    std::setlocale(LC_ALL, "C");
    CLI::App app{"Numerical laboratory for the scale-invariant damped/massive wave equation\n"
                 "with derivative nonlinearity: identity and inequality verification,\n"
                 "blow-up simulation, and lifespan sweeps."};
    app.footer(kFooter);
    app.require_subcommand(0, 1);
    app.fallthrough(true);

    std::string config_path, output_dir;
    int refinements = 0;
    bool print_defaults = false;
    app.add_option("--config", config_path, "configuration file (key = value sections)");
    app.add_option("--output", output_dir, "output directory (overrides config)");
    app.add_option("--refinements", refinements, "grid refinement levels (overrides config)");
    app.add_flag("--print-defaults", print_defaults, "print the default configuration and exit");

    auto* verify = app.add_subcommand("verify", "run the full check ledger");
    auto* simulate = app.add_subcommand("simulate", "run one scenario, write trajectory and trace");
    auto* sweepcmd = app.add_subcommand("sweep", "run the epsilon sweep and the lifespan fit");
    auto* special = app.add_subcommand("special", "evaluate a special function");
    special->require_subcommand(1);

    // ---- special subcommands ------------------------------------------
    double a_r = 0.0, a_t = 0.0, a_eta = 1.0, a_d = 1.0, a_mu = 0.0, a_nu = 0.0, a_alpha = 0.5,
           a_p = 2.0, a_neff = 2.0;
    int a_n = 1;

    auto* sp_phi = special->add_subcommand("phi", "spatial factor phi(r)");
    sp_phi->add_option("--r", a_r)->required();
    sp_phi->add_option("--eta", a_eta)->required();
    sp_phi->add_option("--n", a_n)->required();

    auto* sp_rho = special->add_subcommand("rho", "temporal factor rho(t)");
    sp_rho->add_option("--t", a_t)->required();
    sp_rho->add_option("--d", a_d)->required();
    sp_rho->add_option("--eta", a_eta)->required();

    auto* sp_psi = special->add_subcommand("psi", "separated product psi(r, t)");
    sp_psi->add_option("--r", a_r)->required();
    sp_psi->add_option("--t", a_t)->required();
    sp_psi->add_option("--d", a_d)->required();
    sp_psi->add_option("--eta", a_eta)->required();
    sp_psi->add_option("--n", a_n)->required();

    auto* sp_ker = special->add_subcommand("kernel", "adjoint kernel K(t)");
    sp_ker->add_option("--t", a_t)->required();
    sp_ker->add_option("--d", a_d)->required();
    sp_ker->add_option("--eta", a_eta)->required();
    sp_ker->add_option("--mu", a_mu)->required();
    sp_ker->add_option("--nu-sq", a_nu)->required();

    auto* sp_bk = special->add_subcommand("besselk", "modified Bessel function K_alpha(t)");
    sp_bk->add_option("--alpha", a_alpha)->required();
    sp_bk->add_option("--t", a_t)->required();

    auto* sp_xi = special->add_subcommand("xi", "Bessel-based temporal profile (delta >= 0)");
    sp_xi->add_option("--t", a_t)->required();
    sp_xi->add_option("--eta", a_eta)->required();
    sp_xi->add_option("--mu", a_mu)->required();
    sp_xi->add_option("--nu-sq", a_nu)->required();

    auto* sp_gam = special->add_subcommand("gamma", "coefficients gamma, gamma_1, Gamma");
    sp_gam->add_option("--t", a_t)->required();
    sp_gam->add_option("--d", a_d)->required();
    sp_gam->add_option("--eta", a_eta)->required();
    sp_gam->add_option("--mu", a_mu)->required();

    auto* sp_lam = special->add_subcommand("lambda", "coefficient lambda(eta, t)");
    sp_lam->add_option("--t", a_t)->required();
    sp_lam->add_option("--d", a_d)->required();
    sp_lam->add_option("--eta", a_eta)->required();
    sp_lam->add_option("--mu", a_mu)->required();
    sp_lam->add_option("--nu-sq", a_nu)->required();

    auto* sp_thr = special->add_subcommand("thresholds", "eta thresholds and theta for (d, model)");
    sp_thr->add_option("--d", a_d)->required();
    sp_thr->add_option("--mu", a_mu)->required();
    sp_thr->add_option("--nu-sq", a_nu)->required();
    sp_thr->add_option("--n", a_n);
    sp_thr->add_option("--p", a_p);

    auto* sp_gla = special->add_subcommand("glassey", "critical power at a (shifted) dimension");
    sp_gla->add_option("--n-eff", a_neff)->required();

    auto* sp_del = special->add_subcommand("delta", "discriminant (mu-1)^2 - 4 nu^2");
    sp_del->add_option("--mu", a_mu)->required();
    sp_del->add_option("--nu-sq", a_nu)->required();

    auto* sp_tr = special->add_subcommand("transform", "coefficients after u -> (1+t)^alpha u");
    sp_tr->add_option("--mu", a_mu)->required();
    sp_tr->add_option("--nu-sq", a_nu)->required();
    sp_tr->add_option("--alpha", a_alpha)->required();

    auto* sp_life = special->add_subcommand("lifespan-exponent", "exponent of the lifespan bound");
    sp_life->add_option("--n", a_n)->required();
    sp_life->add_option("--mu", a_mu)->required();
    sp_life->add_option("--p", a_p)->required();
    sp_life->add_option("--d", a_d)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (print_defaults) {
            std::fputs(config_to_text(RunConfig{}).c_str(), stdout);
            return 0;
        }

        if (special->parsed()) {
            if (sp_phi->parsed()) std::printf("%.10g\n", phi_eta(a_r, a_eta, a_n));
            else if (sp_rho->parsed()) std::printf("%.10g\n", rho_d_eta(a_t, a_d, a_eta));
            else if (sp_psi->parsed()) {
                std::printf("%.10g\n", std::exp(log_rho_d_eta(a_t, a_d, a_eta)
                                                + log_phi_eta(a_r, a_eta, a_n)));
            } else if (sp_ker->parsed()) {
                ModelParams m{.n = 1, .mu = a_mu, .nu_sq = a_nu, .p = 2.0, .R = 1.0};
                std::printf("%.10g\n", kernel_K(a_t, a_d, a_eta, m));
            } else if (sp_bk->parsed()) {
                std::printf("%.10g\n", bessel_K(a_alpha, a_t));
            } else if (sp_xi->parsed()) {
                ModelParams m{.n = 1, .mu = a_mu, .nu_sq = a_nu, .p = 2.0, .R = 1.0};
                std::printf("%.10g\n", xi_eta(a_t, a_eta, m));
            } else if (sp_gam->parsed()) {
                std::printf("gamma = %.10g\ngamma_1 = %.10g\nGamma = %.10g\n",
                            gamma_coeff(a_t, a_d, a_eta, a_mu),
                            gamma1_coeff(a_t, a_d, a_eta, a_mu),
                            std::exp(log_big_gamma(a_t, a_d, a_eta, a_mu)));
            } else if (sp_lam->parsed()) {
                ModelParams m{.n = 1, .mu = a_mu, .nu_sq = a_nu, .p = 2.0, .R = 1.0};
                std::printf("%.10g\n", lambda_coeff(a_t, a_d, a_eta, m));
            } else if (sp_thr->parsed()) {
                std::printf("eta_tilde = %.10g\neta_0 = %.10g\neta_1 = %.10g\n",
                            eta_tilde(a_mu, a_nu, a_d), eta_zero(a_mu, a_nu, a_d),
                            eta_one(a_mu, a_nu, a_d));
                std::printf("eta_1 (statement) = %.10g\neta_1 (proof) = %.10g\n",
                            eta_one_statement(a_mu, a_nu, a_d), eta_one_proof(a_mu, a_nu, a_d));
                std::printf("theta = %.10g\n", lifespan_theta(a_n, a_d, a_p));
            } else if (sp_gla->parsed()) {
                std::printf("%.10g\n", glassey_exponent(a_neff));
            } else if (sp_del->parsed()) {
                std::printf("%.10g\n", discriminant(a_mu, a_nu));
            } else if (sp_tr->parsed()) {
                auto [mv, nv] = transform_coefficients(a_mu, a_nu, a_alpha);
                std::printf("mu = %.10g\nnu_sq = %.10g\ndelta = %.10g\n", mv, nv,
                            discriminant(mv, nv));
            } else if (sp_life->parsed()) {
                ModelParams m{.n = a_n, .mu = a_mu, .nu_sq = 0.0, .p = a_p, .R = 1.0};
                std::printf("%.10g\n", lifespan_exponent(m, a_d));
            }
            return 0;
        }

        RunConfig cfg;
        if (!config_path.empty()) cfg = parse_config_file(config_path);
        if (!output_dir.empty()) cfg.output_dir = output_dir;
        if (refinements > 0) cfg.refinements = refinements;

        if (verify->parsed()) return cmd_verify(cfg);
        if (simulate->parsed()) return cmd_simulate(cfg);
        if (sweepcmd->parsed()) return cmd_sweep(cfg);

        std::fputs(app.help().c_str(), stdout);
        return 0;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const instability_error& e) {
        std::cerr << "instability: " << e.what() << "\n";
        return 3;
    } catch (const unsupported_regime_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
