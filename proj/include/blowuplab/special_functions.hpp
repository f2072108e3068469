#pragma once

// Explicit functions of the scale-invariant damped/massive wave model:
// the separated test-function family psi = rho * phi, the adjoint kernel
// K, modified Bessel functions of the second kind, the Bessel-based
// temporal profile xi (non-negative discriminant only), the coefficient
// functions gamma/gamma_1/Gamma/lambda/Sigma, parameter thresholds, and
// the lifespan exponent.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "blowuplab/quadrature.hpp"

namespace blowuplab {

// ---------------------------------------------------------------------------
// Scalar parameter functions
// ---------------------------------------------------------------------------

/// Critical power 1 + 2/(n_eff - 1) for derivative nonlinearities; n_eff
/// may be fractional (damping shifts the effective dimension).
inline double glassey_exponent(double n_eff)
{
    if (!(n_eff > 1.0))
        throw std::domain_error("glassey_exponent: requires n_eff > 1");
    return 1.0 + 2.0 / (n_eff - 1.0);
}

/// delta = (mu - 1)^2 - 4 nu^2; its sign separates the non-oscillatory
/// and oscillatory linear regimes.
inline double discriminant(double mu, double nu_sq)
{
    return (mu - 1.0) * (mu - 1.0) - 4.0 * nu_sq;
}

/// Coefficients seen by v = (1+t)^alpha u. The discriminant is invariant
/// under this family of rescalings.
inline std::pair<double, double> transform_coefficients(double mu, double nu_sq, double alpha)
{
    const double mu_v = mu - 2.0 * alpha;
    const double nu_sq_v = alpha * alpha - (mu - 1.0) * alpha + nu_sq;
    return {mu_v, nu_sq_v};
}

// ---------------------------------------------------------------------------
// Model parameters
// ---------------------------------------------------------------------------

struct ModelParams {
    int n = 1;           ///< spatial dimension
    double mu = 0.0;     ///< damping coefficient
    double nu_sq = 0.0;  ///< mass coefficient
    double p = 2.0;      ///< nonlinearity exponent
    double R = 1.0;      ///< initial-data support radius

    void validate() const
    {
        if (n < 1) throw std::invalid_argument("ModelParams: n must be >= 1");
        if (mu < 0.0) throw std::invalid_argument("ModelParams: mu must be >= 0");
        if (nu_sq < 0.0) throw std::invalid_argument("ModelParams: nu_sq must be >= 0");
        if (!(p > 1.0)) throw std::invalid_argument("ModelParams: p must be > 1");
        if (!(R > 0.0)) throw std::invalid_argument("ModelParams: R must be > 0");
    }

    double delta() const { return discriminant(mu, nu_sq); }
    double nu() const { return std::sqrt(nu_sq); }
    /// Critical power at the shifted dimension n + mu.
    double p_crit() const { return glassey_exponent(double(n) + mu); }
};

// ---------------------------------------------------------------------------
// Parameter thresholds for the test-function family
// ---------------------------------------------------------------------------

/// The ratio (4 nu^2 + (d-2mu)(d-2)) / (4(d-mu)); the t=0 sign threshold
/// of the kernel K.
inline double threshold_ratio(double mu, double nu_sq, double d)
{
    if (!(d > mu)) throw std::domain_error("threshold_ratio: requires d > mu");
    return (4.0 * nu_sq + (d - 2.0 * mu) * (d - 2.0)) / (4.0 * (d - mu));
}

inline double eta_tilde(double mu, double nu_sq, double d)
{
    return std::max(2.0, threshold_ratio(mu, nu_sq, d));
}

inline double eta_zero(double mu, double nu_sq, double d)
{
    return std::max(d + 2.0, threshold_ratio(mu, nu_sq, d));
}

/// Threshold for the velocity-functional bounds as stated: the larger of
/// 2d + 2mu + 2nu + 2 and the kernel ratio.
inline double eta_one_statement(double mu, double nu_sq, double d)
{
    return std::max(2.0 * d + 2.0 * mu + 2.0 * std::sqrt(nu_sq) + 2.0,
                    threshold_ratio(mu, nu_sq, d));
}

/// The same threshold as assembled step by step: max(eta_0, 2(d+nu+1), d+mu).
inline double eta_one_proof(double mu, double nu_sq, double d)
{
    const double nu = std::sqrt(nu_sq);
    return std::max({eta_zero(mu, nu_sq, d), 2.0 * (d + nu + 1.0), d + mu});
}

/// Conservative eta_1: the maximum of every threshold appearing in either
/// assembly. The two variants above agree in magnitude but not literally;
/// taking the max keeps every lower bound valid simultaneously.
inline double eta_one(double mu, double nu_sq, double d)
{
    return std::max(eta_one_statement(mu, nu_sq, d), eta_one_proof(mu, nu_sq, d));
}

/// theta = 1 - (n + d - 1)(p - 1)/2, the exponent driving the lifespan bound.
inline double lifespan_theta(int n, double d, double p)
{
    return 1.0 - (double(n) + d - 1.0) * (p - 1.0) / 2.0;
}

/// Admissible range for d is (mu, (p+1)/(p-1) - n); returns the exponent
/// 2(p-1) / (2 - (n+d-1)(p-1)) = (p-1)/theta of the lifespan upper bound.
inline double lifespan_exponent(const ModelParams& m, double d)
{
    const double d_sup = (m.p + 1.0) / (m.p - 1.0) - double(m.n);
    if (!(d > m.mu) || !(d < d_sup))
        throw std::domain_error("lifespan_exponent: d must lie in (mu, (p+1)/(p-1) - n)");
    return (m.p - 1.0) / lifespan_theta(m.n, d, m.p);
}

struct TestFunctionParams {
    double d = 1.0;
    double eta = 2.0;
    // derived
    double eta_tilde = 2.0;
    double eta_0 = 2.0;
    double eta_1 = 2.0;
    double theta = 0.0;
};

/// Derives the thresholds for a given shift d (> mu required); eta defaults
/// to eta_1 so that every functional bound is active.
inline TestFunctionParams make_test_function_params(const ModelParams& m, double d,
                                                    std::optional<double> eta = std::nullopt)
{
    if (!(d > m.mu))
        throw std::invalid_argument("make_test_function_params: requires d > mu");
    TestFunctionParams tp;
    tp.d = d;
    tp.eta_tilde = eta_tilde(m.mu, m.nu_sq, d);
    tp.eta_0 = eta_zero(m.mu, m.nu_sq, d);
    tp.eta_1 = eta_one(m.mu, m.nu_sq, d);
    tp.theta = lifespan_theta(m.n, d, m.p);
    tp.eta = eta.value_or(tp.eta_1);
    if (!(tp.eta > 0.0))
        throw std::invalid_argument("make_test_function_params: eta must be > 0");
    return tp;
}

/// Default d: just above the infimum of the admissible interval, where the
/// lifespan bound is tightest.
inline double default_shift(const ModelParams& m)
{
    const double d_sup = (m.p + 1.0) / (m.p - 1.0) - double(m.n);
    if (!(d_sup > m.mu))
        throw std::domain_error("default_shift: admissible d-interval is empty (p too large)");
    return m.mu + 0.1 * (d_sup - m.mu);
}

// ---------------------------------------------------------------------------
// Spatial factor phi
// ---------------------------------------------------------------------------

/// Surface area of the unit sphere S^{n-1} in R^n (n=1 gives 2 points).
inline double sphere_area(int n)
{
    if (n < 1) throw std::domain_error("sphere_area: n must be >= 1");
    return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

/// log of phi(r) = e^{eta r} + e^{-eta r}        (n = 1)
///              = int_{S^{n-1}} e^{eta r w_1} dw  (n >= 2)
/// The n >= 2 sphere integral reduces to |S^{n-2}| int_0^pi
/// e^{eta r cos(th)} sin^{n-2}(th) dth; factoring out the peak keeps the
/// quadrature in [0,1] so the log form never overflows.
inline double log_phi_eta(double r, double eta, int n)
{
    if (r < 0.0) throw std::domain_error("phi_eta: radial argument must be >= 0");
    if (!(eta > 0.0)) throw std::domain_error("phi_eta: eta must be > 0");
    if (n < 1) throw std::domain_error("phi_eta: n must be >= 1");
    const double a = eta * r;
    if (n == 1) return a + std::log1p(std::exp(-2.0 * a));
    auto f = [&](double th) {
        return std::exp(a * (std::cos(th) - 1.0)) * std::pow(std::sin(th), n - 2);
    };
    const double integral = quad::gauss_doubling(f, 0.0, M_PI, 1e-13, 64, 4096);
    return a + std::log(sphere_area(n - 1) * integral);
}

inline double phi_eta(double r, double eta, int n)
{
    return std::exp(log_phi_eta(r, eta, n));
}

// ---------------------------------------------------------------------------
// Temporal factor rho and the product psi
// ---------------------------------------------------------------------------

/// rho(t) = (1+t)^{d/2} e^{-eta t}; equals 1 at t = 0.
inline double rho_d_eta(double t, double d, double eta)
{
    if (t < 0.0) throw std::domain_error("rho_d_eta: t must be >= 0");
    return std::exp(0.5 * d * std::log1p(t) - eta * t);
}

inline double log_rho_d_eta(double t, double d, double eta)
{
    if (t < 0.0) throw std::domain_error("rho_d_eta: t must be >= 0");
    return 0.5 * d * std::log1p(t) - eta * t;
}

/// psi(r, t) = rho(t) phi(r); strictly positive. On the support cone
/// r <= t + R the log form stays O(eta R) even when the factors would
/// under/overflow separately.
inline double psi_d_eta(double r, double t, const TestFunctionParams& tp, int n)
{
    return std::exp(log_rho_d_eta(t, tp.d, tp.eta) + log_phi_eta(r, tp.eta, n));
}

// ---------------------------------------------------------------------------
// Adjoint kernel K
// ---------------------------------------------------------------------------

/// K(t) = (4 nu^2 + (d-2mu)(d-2)) / (4(1+t)^2) - eta (d-mu)/(1+t).
/// Non-positive for all t >= 0 once eta >= eta_tilde.
inline double kernel_K(double t, double d, double eta, const ModelParams& m)
{
    const double s = 1.0 / (1.0 + t);
    const double num = 4.0 * m.nu_sq + (d - 2.0 * m.mu) * (d - 2.0);
    return 0.25 * num * s * s - eta * (d - m.mu) * s;
}

/// Supremum of K over t >= 0. In s = 1/(1+t) the kernel is a parabola
/// (A/4)s^2 - B s on (0, 1]; for d > mu the supremum is max(0, K(0)),
/// approached at t -> infinity when K(0) < 0.
inline double kernel_K_sup(double d, double eta, const ModelParams& m)
{
    if (!(d > m.mu)) throw std::domain_error("kernel_K_sup: requires d > mu");
    return std::max(0.0, kernel_K(0.0, d, eta, m));
}

// ---------------------------------------------------------------------------
// Modified Bessel function of the second kind
// ---------------------------------------------------------------------------

namespace detail {
inline double log_cosh(double x)
{
    const double ax = std::abs(x);
    return ax + std::log1p(std::exp(-2.0 * ax)) - M_LN2;
}
} // namespace detail

/// K_alpha(t) = int_0^inf exp(-t cosh z) cosh(alpha z) dz, t > 0.
/// The integrand is evaluated in log form (the cosh factor can overflow
/// long before the exponential kills it) and truncated at Z where the
/// tail is below 1e-20 of the e^{-t} scale; composite Gauss-Legendre
/// panels are doubled until the value settles.
inline double bessel_K(double alpha, double t)
{
    if (!(t > 0.0)) throw std::domain_error("bessel_K: t must be > 0");
    alpha = std::abs(alpha); // K_{-a} = K_a
    double Z = 1.0;
    while (t * (std::cosh(Z) - 1.0) - alpha * Z < 50.0 && Z < 750.0) Z += 0.5;
    auto f = [&](double z) {
        const double lg = -t * std::cosh(z) + detail::log_cosh(alpha * z);
        return std::exp(lg);
    };
    // scale out e^{-t} so the panel sums stay O(1)
    auto fs = [&](double z) {
        const double lg = -t * (std::cosh(z) - 1.0) + detail::log_cosh(alpha * z);
        return lg < -745.0 ? 0.0 : std::exp(lg);
    };
    int panels = std::max(8, int(std::ceil(2.0 * Z)));
    double prev = quad::gauss_panels(fs, 0.0, Z, panels, 32);
    for (int it = 0; it < 6; ++it) {
        panels *= 2;
        const double cur = quad::gauss_panels(fs, 0.0, Z, panels, 32);
        if (std::abs(cur - prev) <= 1e-12 * std::abs(cur)) { prev = cur; break; }
        prev = cur;
    }
    (void)f;
    return std::exp(-t) * prev;
}

/// Raised when a construction that needs delta >= 0 meets an oscillatory
/// configuration.
struct unsupported_regime_error : std::domain_error {
    using std::domain_error::domain_error;
};

/// xi(t) = (eta(1+t))^{(mu+1)/2} K_{sqrt(delta)/2}(eta(1+t)); the
/// Bessel-based temporal profile, defined only for delta >= 0.
inline double xi_eta(double t, double eta, const ModelParams& m)
{
    if (t < 0.0) throw std::domain_error("xi_eta: t must be >= 0");
    if (!(eta > 0.0)) throw std::domain_error("xi_eta: eta must be > 0");
    const double delta = m.delta();
    if (delta < 0.0)
        throw unsupported_regime_error(
            "xi_eta: discriminant < 0; the Bessel-based profile does not exist in this regime");
    const double z = eta * (1.0 + t);
    return std::pow(z, 0.5 * (m.mu + 1.0)) * bessel_K(0.5 * std::sqrt(delta), z);
}

// ---------------------------------------------------------------------------
// Coefficient functions of the functional identities
// ---------------------------------------------------------------------------

/// gamma(t) = 2 eta + (mu - d)/(1+t).
inline double gamma_coeff(double t, double d, double eta, double mu)
{
    return 2.0 * eta + (mu - d) / (1.0 + t);
}

/// gamma_1(t) = eta + (2 mu - d)/(2(1+t)).
inline double gamma1_coeff(double t, double d, double eta, double mu)
{
    return eta + (2.0 * mu - d) / (2.0 * (1.0 + t));
}

/// log of the integrating factor Gamma(t) = e^{2 eta t} (1+t)^{mu-d}.
inline double log_big_gamma(double t, double d, double eta, double mu)
{
    return 2.0 * eta * t + (mu - d) * std::log1p(t);
}

struct GammaCoeffs {
    double gamma;
    double gamma1;
    double big_gamma; ///< overflows for large eta t; use log_big_gamma then
};

inline GammaCoeffs gamma_coeffs(double t, const TestFunctionParams& tp, const ModelParams& m)
{
    if (t < 0.0) throw std::domain_error("gamma_coeffs: t must be >= 0");
    return {gamma_coeff(t, tp.d, tp.eta, m.mu), gamma1_coeff(t, tp.d, tp.eta, m.mu),
            std::exp(log_big_gamma(t, tp.d, tp.eta, m.mu))};
}

/// lambda(eta, t) = eta^2/2 + (2d-mu) eta/(4(1+t)) - nu^2/(1+t)^2
///                + (d-2mu)(3d-mu-8)/(8(1+t)^2).
inline double lambda_coeff(double t, double d, double eta, const ModelParams& m)
{
    const double s = 1.0 / (1.0 + t);
    return 0.5 * eta * eta + 0.25 * (2.0 * d - m.mu) * eta * s - m.nu_sq * s * s
         + (d - 2.0 * m.mu) * (3.0 * d - m.mu - 8.0) * s * s / 8.0;
}

/// Sigma(t) = (eta/2 - (mu+d)/(4(1+t))) (G + gamma_1(t) F).
inline double sigma_value(double t, double d, double eta, const ModelParams& m, double F, double G)
{
    return (0.5 * eta - 0.25 * (m.mu + d) / (1.0 + t)) * (G + gamma1_coeff(t, d, eta, m.mu) * F);
}

struct LambdaSigma {
    double lambda_val;
    double sigma_val;
};

inline LambdaSigma lambda_sigma(double t, const TestFunctionParams& tp, const ModelParams& m,
                                double F, double G)
{
    if (t < 0.0) throw std::domain_error("lambda_sigma: t must be >= 0");
    return {lambda_coeff(t, tp.d, tp.eta, m), sigma_value(t, tp.d, tp.eta, m, F, G)};
}

} // namespace blowuplab
