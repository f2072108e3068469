#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "blowuplab/special_functions.hpp"

using namespace blowuplab;

namespace {

// closed form K_{1/2}(t) = sqrt(pi/(2t)) e^{-t}
double bessel_k_half(double t) { return std::sqrt(M_PI / (2.0 * t)) * std::exp(-t); }

// FD first/second derivatives with one Richardson step
template <typename F>
double d1_richardson(F&& f, double t, double h)
{
    auto d1 = [&](double hh) { return (f(t + hh) - f(t - hh)) / (2.0 * hh); };
    return (4.0 * d1(0.5 * h) - d1(h)) / 3.0;
}
template <typename F>
double d2_richardson(F&& f, double t, double h)
{
    auto d2 = [&](double hh) { return (f(t + hh) - 2.0 * f(t) + f(t - hh)) / (hh * hh); };
    return (4.0 * d2(0.5 * h) - d2(h)) / 3.0;
}

// residual of xi'' - eta^2 xi - d/dt(mu/(1+t) xi) + nu^2/(1+t)^2 xi
double xi_ode_residual(double t, double eta, const ModelParams& m, double h)
{
    auto xi = [&](double s) { return xi_eta(s, eta, m); };
    const double v = xi(t);
    const double xp = d1_richardson(xi, t, h);
    const double xpp = d2_richardson(xi, t, h);
    const double s = 1.0 / (1.0 + t);
    return xpp - eta * eta * v - m.mu * (xp * s - v * s * s) + m.nu_sq * s * s * v;
}

} // namespace

TEST_CASE("critical power at integer and shifted dimensions", "[special]")
{
    CHECK(glassey_exponent(2.0) == Catch::Approx(3.0));
    CHECK(glassey_exponent(3.0) == Catch::Approx(2.0));
    CHECK(glassey_exponent(1.5) == Catch::Approx(5.0));
    CHECK_THROWS_AS(glassey_exponent(1.0), std::domain_error);
    CHECK_THROWS_AS(glassey_exponent(0.5), std::domain_error);
}

TEST_CASE("discriminant values", "[special]")
{
    CHECK(discriminant(1.0, 0.0) == Catch::Approx(0.0).margin(1e-15));
    CHECK(discriminant(0.5, 0.25) == Catch::Approx(-0.75));
    CHECK(discriminant(3.0, 1.0) == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("rescaling moves the coefficients but not the discriminant", "[special]")
{
    auto [mu0, nu0] = transform_coefficients(2.0, 0.5, 0.0);
    CHECK(mu0 == Catch::Approx(2.0));
    CHECK(nu0 == Catch::Approx(0.5));

    auto [mu1, nu1] = transform_coefficients(2.0, 0.0, 1.0);
    CHECK(mu1 == Catch::Approx(0.0).margin(1e-15));
    CHECK(nu1 == Catch::Approx(0.0).margin(1e-15));

    auto [mu2, nu2] = transform_coefficients(0.5, 0.25, 0.3);
    CHECK(mu2 == Catch::Approx(-0.1));
    CHECK(nu2 == Catch::Approx(0.49));
    CHECK(discriminant(mu2, nu2) == Catch::Approx(-0.75).margin(1e-14));

    std::mt19937 rng(20250811u);
    std::uniform_real_distribution<double> umu(0.0, 3.0), unu(0.0, 2.0), ual(-1.5, 1.5);
    for (int k = 0; k < 1000; ++k) {
        const double mu = umu(rng), nu_sq = unu(rng), al = ual(rng);
        auto [mv, nv] = transform_coefficients(mu, nu_sq, al);
        CHECK(std::abs(discriminant(mv, nv) - discriminant(mu, nu_sq)) <= 1e-13);
    }
}

TEST_CASE("spatial factor: closed forms in one and three dimensions", "[special]")
{
    CHECK(phi_eta(0.0, 1.0, 1) == Catch::Approx(2.0));
    CHECK(phi_eta(0.0, 7.3, 1) == Catch::Approx(2.0));
    CHECK(phi_eta(1.0, 2.0, 1) == Catch::Approx(std::exp(2.0) + std::exp(-2.0)).epsilon(1e-14));

    // n = 3: 4 pi sinh(eta r)/(eta r), limit 4 pi at r -> 0
    CHECK(phi_eta(0.0, 1.0, 3) == Catch::Approx(4.0 * M_PI).epsilon(1e-12));
    CHECK(phi_eta(1e-9, 1.0, 3) == Catch::Approx(4.0 * M_PI).epsilon(1e-9));
    CHECK(phi_eta(1.0, 1.0, 3) == Catch::Approx(4.0 * M_PI * std::sinh(1.0)).epsilon(1e-10));
    CHECK(phi_eta(2.5, 3.0, 3)
          == Catch::Approx(4.0 * M_PI * std::sinh(7.5) / 7.5).epsilon(1e-10));
}

TEST_CASE("spatial factor: two dimensions against the Bessel-I oracle", "[special]")
{
    for (double r : {0.0, 0.3, 1.0, 2.7}) {
        for (double eta : {0.5, 2.0, 5.0}) {
            const double oracle = 2.0 * M_PI * std::cyl_bessel_i(0.0, eta * r);
            CHECK(phi_eta(r, eta, 2) == Catch::Approx(oracle).epsilon(1e-10));
        }
    }
}

TEST_CASE("spatial factor: positivity, monotonicity, domain guards", "[special]")
{
    for (int n : {1, 2, 3, 4}) {
        double prev = 0.0;
        for (double r = 0.0; r <= 3.0; r += 0.25) {
            const double v = phi_eta(r, 1.5, n);
            CHECK(v > 0.0);
            CHECK(v >= prev);
            prev = v;
        }
    }
    CHECK_THROWS_AS(phi_eta(-0.1, 1.0, 1), std::domain_error);
    CHECK_THROWS_AS(phi_eta(1.0, 0.0, 1), std::domain_error);
    CHECK_THROWS_AS(phi_eta(1.0, -2.0, 3), std::domain_error);
    CHECK_THROWS_AS(phi_eta(1.0, 1.0, 0), std::domain_error);
}

TEST_CASE("log form of the spatial factor stays finite far outside double range", "[special]")
{
    // e^{eta r} alone would overflow; the log form must not
    const double lp = log_phi_eta(300.0, 6.0, 1);
    CHECK(lp == Catch::Approx(1800.0).margin(1e-9));
    const double lp3 = log_phi_eta(300.0, 6.0, 3);
    CHECK(std::isfinite(lp3));
    CHECK(lp3 < lp + std::log(4.0 * M_PI));
}

TEST_CASE("temporal factor values", "[special]")
{
    CHECK(rho_d_eta(0.0, 2.0, 1.0) == Catch::Approx(1.0));
    CHECK(rho_d_eta(0.0, -3.7, 9.0) == Catch::Approx(1.0));
    CHECK(rho_d_eta(1.0, 2.0, 1.0) == Catch::Approx(2.0 * std::exp(-1.0)).epsilon(1e-14));
    CHECK(rho_d_eta(3.0, 4.0, 2.0) == Catch::Approx(16.0 * std::exp(-6.0)).epsilon(1e-14));
    CHECK_THROWS_AS(rho_d_eta(-1.0, 2.0, 1.0), std::domain_error);
}

TEST_CASE("separated product psi", "[special]")
{
    ModelParams m{.n = 1, .mu = 0.5, .nu_sq = 0.25, .p = 2.0, .R = 1.0};
    auto tp = make_test_function_params(m, 2.0, 1.0);
    CHECK(psi_d_eta(0.0, 0.0, tp, 1) == Catch::Approx(2.0));
    CHECK(psi_d_eta(0.0, 1.0, tp, 1) == Catch::Approx(4.0 * std::exp(-1.0)).epsilon(1e-14));
    CHECK(psi_d_eta(0.0, 10.0, tp, 1) < psi_d_eta(0.0, 1.0, tp, 1));
    CHECK(psi_d_eta(0.5, 2.0, tp, 1) > 0.0);
}

TEST_CASE("adjoint kernel: values, sign threshold, asymptote", "[special]")
{
    ModelParams m{.n = 1, .mu = 1.0, .nu_sq = 1.0, .p = 2.0, .R = 1.0};
    CHECK(kernel_K(0.0, 2.0, 4.0, m) == Catch::Approx(-3.0));
    CHECK(kernel_K(0.0, 2.0, 1.0, m) == Catch::Approx(0.0).margin(1e-15));
    CHECK(threshold_ratio(1.0, 1.0, 2.0) == Catch::Approx(1.0));
    CHECK(eta_tilde(1.0, 1.0, 2.0) == Catch::Approx(2.0));

    // at eta = eta_tilde the kernel is non-positive for all t and tends to 0^-
    const double eta = eta_tilde(1.0, 1.0, 2.0);
    for (double t : {0.0, 0.1, 1.0, 10.0, 1e3, 1e6}) {
        CHECK(kernel_K(t, 2.0, eta, m) <= 0.0);
    }
    CHECK(kernel_K(1e6, 2.0, eta, m) < 0.0);
    CHECK(kernel_K(1e6, 2.0, eta, m) > -1e-5);
    CHECK(kernel_K_sup(2.0, eta, m) == 0.0);
}

TEST_CASE("adjoint kernel sign threshold is tight at t = 0", "[special]")
{
    // ratio = 8 > 2 here; just below it the kernel starts positive
    ModelParams m{.n = 1, .mu = 0.5, .nu_sq = 4.0, .p = 2.0, .R = 1.0};
    CHECK(threshold_ratio(0.5, 4.0, 1.0) == Catch::Approx(8.0));
    CHECK(kernel_K(0.0, 1.0, 7.9, m) == Catch::Approx(0.05).margin(1e-12));
    CHECK(kernel_K(0.0, 1.0, 7.9, m) > 0.0);
    CHECK(kernel_K(0.0, 1.0, 8.0, m) == Catch::Approx(0.0).margin(1e-12));

    std::mt19937 rng(77u);
    std::uniform_real_distribution<double> umu(0.0, 3.0), unu(0.0, 4.0), uoff(0.05, 5.0);
    for (int k = 0; k < 200; ++k) {
        const double mu = umu(rng), nu_sq = unu(rng), d = mu + uoff(rng);
        ModelParams mm{.n = 1, .mu = mu, .nu_sq = nu_sq, .p = 2.0, .R = 1.0};
        const double et = eta_tilde(mu, nu_sq, d) + uoff(rng);
        CHECK(kernel_K_sup(d, et, mm) <= 1e-15);
        for (double t : {0.0, 0.5, 3.0, 50.0, 1e4})
            CHECK(kernel_K(t, d, et, mm) <= 1e-15);
    }
}

TEST_CASE("Bessel K: closed form at half-integer order", "[special][bessel]")
{
    CHECK(bessel_K(0.5, 1.0) == Catch::Approx(bessel_k_half(1.0)).epsilon(1e-10));
    CHECK(bessel_K(0.5, 1.0) == Catch::Approx(0.46107).margin(5e-6));
    CHECK(bessel_K(0.5, 2.0) == Catch::Approx(bessel_k_half(2.0)).epsilon(1e-10));
    CHECK(bessel_K(0.5, 2.0) == Catch::Approx(0.11994).margin(5e-6));

    // 100 log-spaced points in [0.1, 50]
    for (int i = 0; i < 100; ++i) {
        const double t = 0.1 * std::pow(500.0, i / 99.0);
        const double rel = std::abs(bessel_K(0.5, t) - bessel_k_half(t)) / bessel_k_half(t);
        CHECK(rel <= 1e-8);
    }
}

TEST_CASE("Bessel K: symmetry in the order and library cross-check", "[special][bessel]")
{
    CHECK(bessel_K(0.3, 1.0) == Catch::Approx(bessel_K(-0.3, 1.0)).epsilon(1e-14));
    for (double a : {0.0, 0.7, 1.3, 2.5, 5.0}) {
        for (double t : {0.1, 1.0, 10.0, 50.0}) {
            const double ref = std::cyl_bessel_k(a, t);
            CHECK(bessel_K(a, t) == Catch::Approx(ref).epsilon(1e-8));
        }
    }
    CHECK_THROWS_AS(bessel_K(0.5, 0.0), std::domain_error);
    CHECK_THROWS_AS(bessel_K(0.5, -1.0), std::domain_error);
}

TEST_CASE("Bessel-based temporal profile xi", "[special][bessel]")
{
    ModelParams m{.n = 1, .mu = 2.0, .nu_sq = 0.0, .p = 2.0, .R = 1.0};
    REQUIRE(m.delta() == Catch::Approx(1.0));
    CHECK(xi_eta(0.0, 1.0, m) == Catch::Approx(std::sqrt(M_PI / 2.0) * std::exp(-1.0)).epsilon(1e-9));
    CHECK(xi_eta(0.0, 1.0, m) == Catch::Approx(0.46107).margin(5e-6));

    // closed form sqrt(pi/2) eta (1+t) e^{-eta(1+t)} when delta = 1
    for (double t : {0.0, 0.5, 2.0}) {
        for (double eta : {1.0, 3.0}) {
            const double z = eta * (1.0 + t);
            CHECK(xi_eta(t, eta, m)
                  == Catch::Approx(std::sqrt(M_PI / 2.0) * z * std::exp(-z)).epsilon(1e-9));
        }
    }

    ModelParams osc{.n = 1, .mu = 0.5, .nu_sq = 0.25, .p = 2.0, .R = 1.0};
    REQUIRE(osc.delta() == Catch::Approx(-0.75));
    CHECK_THROWS_AS(xi_eta(0.0, 1.0, osc), unsupported_regime_error);
}

TEST_CASE("xi solves its second-order equation (FD residual)", "[special][bessel]")
{
    ModelParams m1{.n = 1, .mu = 2.0, .nu_sq = 0.0, .p = 2.0, .R = 1.0}; // delta = 1
    ModelParams m4{.n = 1, .mu = 3.0, .nu_sq = 0.0, .p = 2.0, .R = 1.0}; // delta = 4
    for (const auto& m : {m1, m4}) {
        for (double eta : {1.0, 2.0}) {
            for (double t : {0.25, 0.5, 1.0, 2.0, 5.0}) {
                const double res = xi_ode_residual(t, eta, m, 1e-3);
                const double scale = eta * eta * xi_eta(t, eta, m);
                CHECK(std::abs(res) <= 1e-6 * scale);
            }
        }
    }
}

TEST_CASE("coefficient functions gamma, gamma_1, Gamma", "[special]")
{
    ModelParams m{.n = 1, .mu = 1.0, .nu_sq = 1.0, .p = 2.0, .R = 1.0};
    auto tp = make_test_function_params(m, 2.0, 4.0);
    auto g = gamma_coeffs(0.0, tp, m);
    CHECK(g.gamma == Catch::Approx(7.0));
    CHECK(g.gamma1 == Catch::Approx(4.0));
    CHECK(g.big_gamma == Catch::Approx(1.0));

    auto ginf = gamma_coeffs(1e9, tp, m);
    CHECK(ginf.gamma == Catch::Approx(8.0).margin(1e-6));
    CHECK(ginf.gamma1 == Catch::Approx(4.0).margin(1e-6));

    // for d >= mu and eta >= d: eta <= gamma(t) <= 2 eta for all t
    for (double t = 0.0; t <= 50.0; t += 0.5) {
        const double gam = gamma_coeff(t, 2.0, 4.0, 1.0);
        CHECK(gam >= 4.0);
        CHECK(gam <= 8.0);
    }
}

TEST_CASE("lambda coefficient and Sigma combination", "[special]")
{
    ModelParams m{.n = 1, .mu = 1.0, .nu_sq = 1.0, .p = 2.0, .R = 1.0};
    auto tp = make_test_function_params(m, 2.0, 4.0);
    auto ls = lambda_sigma(0.0, tp, m, 0.0, 0.0);
    CHECK(ls.lambda_val == Catch::Approx(10.0));
    CHECK(ls.sigma_val == Catch::Approx(0.0).margin(1e-15));

    CHECK(lambda_coeff(1e9, 2.0, 4.0, m) == Catch::Approx(8.0).margin(1e-6));

    // eta >= 2(d + nu + 1) keeps lambda above eta^2/4 on a t-grid
    for (double d : {1.0, 2.0, 3.0}) {
        const double eta = 2.0 * (d + m.nu() + 1.0);
        for (double t = 0.0; t <= 100.0; t += 0.25)
            CHECK(lambda_coeff(t, d, eta, m) >= 0.25 * eta * eta);
    }

    // Sigma sign: positive multiple of G + gamma_1 F once eta >= d + mu
    const double sig = sigma_value(0.5, 2.0, 4.0, m, 1.0, 2.0);
    CHECK(sig > 0.0);
}

TEST_CASE("threshold family and derived parameters", "[special]")
{
    ModelParams m{.n = 1, .mu = 0.5, .nu_sq = 0.25, .p = 2.0, .R = 1.0};
    auto tp = make_test_function_params(m, 1.0);
    CHECK(tp.eta_tilde == Catch::Approx(2.0));
    CHECK(tp.eta_0 == Catch::Approx(3.0));
    CHECK(tp.eta_1 == Catch::Approx(6.0)); // 2d + 2mu + 2nu + 2 dominates here
    CHECK(tp.eta == Catch::Approx(6.0));   // defaults to eta_1
    CHECK(tp.theta == Catch::Approx(0.5));
    CHECK(eta_one(m.mu, m.nu_sq, 1.0) >= eta_one_statement(m.mu, m.nu_sq, 1.0));
    CHECK(eta_one(m.mu, m.nu_sq, 1.0) >= eta_one_proof(m.mu, m.nu_sq, 1.0));
    CHECK(eta_one(m.mu, m.nu_sq, 1.0) >= eta_tilde(m.mu, m.nu_sq, 1.0));

    CHECK_THROWS_AS(make_test_function_params(m, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(make_test_function_params(m, 0.2), std::invalid_argument);
}

TEST_CASE("lifespan exponent", "[special]")
{
    ModelParams m{.n = 1, .mu = 0.5, .nu_sq = 0.25, .p = 2.0, .R = 1.0};
    CHECK(lifespan_exponent(m, 1.0) == Catch::Approx(2.0));
    CHECK(lifespan_theta(1, 1.0, 2.0) == Catch::Approx(0.5));
    // exponent diverges as d approaches the upper end (p+1)/(p-1) - n = 2
    CHECK(lifespan_exponent(m, 1.999) > 100.0);
    CHECK_THROWS_AS(lifespan_exponent(m, 0.4), std::domain_error);
    CHECK_THROWS_AS(lifespan_exponent(m, 2.0), std::domain_error);
    CHECK_THROWS_AS(lifespan_exponent(m, 2.5), std::domain_error);

    CHECK(default_shift(m) == Catch::Approx(0.65));
}

TEST_CASE("discrete radial Laplacian reproduces the eigenrelation", "[special][eigen]")
{
    // lap phi = eta^2 phi, checked with centered differences; second-order
    // convergence measured between h and h/2
    const double eta = 2.0;
    auto max_rel_err = [&](int n, double h) {
        double worst = 0.0;
        const int i_max = int(2.0 / h);
        std::vector<double> vals(i_max + 2);
        for (int i = 0; i <= i_max + 1; ++i) vals[i] = phi_eta(i * h, eta, n);
        for (int i = 1; i <= i_max; ++i) {
            const double r = i * h;
            double lap = (vals[i + 1] - 2.0 * vals[i] + vals[i - 1]) / (h * h);
            if (n > 1) lap += (n - 1) / r * (vals[i + 1] - vals[i - 1]) / (2.0 * h);
            worst = std::max(worst, std::abs(lap - eta * eta * vals[i]) / (eta * eta * vals[i]));
        }
        return worst;
    };
    for (int n : {1, 2, 3}) {
        const double e_coarse = max_rel_err(n, 4e-3);
        const double e_fine = max_rel_err(n, 2e-3);
        const double ratio = e_coarse / e_fine;
        INFO("n = " << n << " coarse " << e_coarse << " fine " << e_fine);
        CHECK(e_fine <= 1e-4);
        CHECK(ratio >= 3.0);
        CHECK(ratio <= 5.0);
    }
}
