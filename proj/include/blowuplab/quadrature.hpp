#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace blowuplab::quad {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Returns the n-point Gauss-Legendre rule, computed once and cached.
/// Nodes are found by Newton iteration on P_n starting from the Chebyshev
/// approximation; converges to machine precision in a handful of steps.
inline const GaussRule& gauss_legendre(int npts)
{
    if (npts < 2) throw std::invalid_argument("gauss_legendre: need at least 2 points");
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(npts);
    if (it != cache.end()) return it->second;

    GaussRule rule;
    rule.nodes.resize(npts);
    rule.weights.resize(npts);
    const int n = npts;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Legendre recurrence: (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}
            double p0 = 1.0, p1 = x;
            for (int k = 1; k < n; ++k) {
                double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return cache.emplace(npts, std::move(rule)).first->second;
}

/// Single Gauss-Legendre panel over [a, b].
template <typename F>
double gauss(F&& f, double a, double b, int npts = 64)
{
    const GaussRule& rule = gauss_legendre(npts);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

/// Composite Gauss-Legendre: npanels equal panels of npts each.
template <typename F>
double gauss_panels(F&& f, double a, double b, int npanels, int npts = 32)
{
    if (npanels < 1) throw std::invalid_argument("gauss_panels: need at least 1 panel");
    const double h = (b - a) / npanels;
    double sum = 0.0;
    for (int k = 0; k < npanels; ++k)
        sum += gauss(f, a + k * h, a + (k + 1) * h, npts);
    return sum;
}

/// Gauss-Legendre with node-count doubling until the value settles to
/// rel_tol (or npts hits the cap). Suited to smooth integrands whose
/// sharpness is not known in advance.
template <typename F>
double gauss_doubling(F&& f, double a, double b, double rel_tol = 1e-12,
                      int npts0 = 64, int npts_cap = 4096)
{
    double prev = gauss(f, a, b, npts0);
    for (int m = 2 * npts0; m <= npts_cap; m *= 2) {
        double cur = gauss(f, a, b, m);
        if (std::abs(cur - prev) <= rel_tol * std::abs(cur) + 1e-300) return cur;
        prev = cur;
    }
    return prev;
}

namespace detail {
template <typename F>
double adaptive_step(F& f, double a, double b, double fa, double fm, double fb,
                     double whole, double tol, int depth)
{
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (b - a) / 12.0 * (fa + 4.0 * flm + fm);
    const double right = (b - a) / 12.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
         + adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
} // namespace detail

/// Adaptive Simpson. Used as an independent oracle in tests; tol is an
/// absolute error target.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol = 1e-12, int max_depth = 48)
{
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

} // namespace blowuplab::quad
