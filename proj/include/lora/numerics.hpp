#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>

// Special functions and quadrature used by the closed-form error-rate
// expressions. Everything here is scalar double precision; accuracy targets
// are documented per function and exercised in the test suite.

namespace lora::num {

// Raised when an iterative routine fails to converge or a quadrature cannot
// meet its error target. Callers treat this as a hard error: silently
// returning an inaccurate value would poison downstream comparisons.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Gaussian right-tail probability Q(x) = P(Z > x) for standard normal Z.
double q_function(double x);

// Harmonic number H_n = sum_{k=1..n} 1/k, with H_0 = 0. n must be >= 0.
double harmonic(long n);

// log(I0(x)) and the exponentially scaled log(I0(x)) - |x|, where I0 is the
// modified Bessel function of the first kind, order zero. Stable for all
// x >= 0 including arguments far beyond the overflow point of I0 itself.
double log_i0(double x);
double log_i0_scaled(double x); // log(I0(x)) - |x|

// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a),
// a > 0, x >= 0. Series expansion for x < a+1, continued fraction otherwise.
double gamma_p(double a, double x);

// Rice distribution with unit Gaussian scale: the magnitude of a complex
// Gaussian with independent N(0,1) real/imaginary parts and a deterministic
// offset of magnitude v >= 0.
//   pdf(y)  = y * exp(-(y^2+v^2)/2) * I0(v*y)        for y > 0
//   cdf(y)  = P(|v + CN(0,2)| <= y)
// The cdf is evaluated through the noncentral-chi-square (2 dof) Poisson
// mixture, summed outward from the Poisson mode so it stays accurate for
// large v*y where direct series would overflow.
double rice_pdf(double y, double v);
double rice_cdf(double y, double v);

// Marcum Q-function of order 1: Q1(a, b) = 1 - rice_cdf(b, a).
// https://en.wikipedia.org/wiki/Marcum_Q-function
double marcum_q1(double a, double b);

namespace detail {

// A subdivision is accepted once the Richardson error estimate drops under
// the absolute share for this panel OR under a scaled relative target
// against the panel's own integral. The relative branch keeps refinement
// alive where the integrand is many orders below the global scale (so tiny
// integrals still come out relatively accurate), while the absolute share
// provides a floor that stops refinement chasing round-off in integrands
// assembled from cancellation-limited pieces. The 0.01 factor buys margin
// for the optimism of the extrapolated estimate.
template <typename F>
double simpson_rec(const F& f, double a, double m, double b, double fa, double fm, double fb,
                   double whole, double abs_share, double rel_accept, int depth,
                   double& worst_excess) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double h6 = (b - a) / 12.0;
    const double left = h6 * (fa + 4.0 * flm + fm);
    const double right = h6 * (fm + 4.0 * frm + fb);
    const double err = (left + right - whole) / 15.0;
    const double accept = std::max(abs_share, rel_accept * std::abs(left + right));
    if (std::abs(err) <= accept || depth >= 40) {
        if (depth >= 40 && std::abs(err) > accept)
            worst_excess = std::max(worst_excess, std::abs(err) - accept);
        return left + right + err; // Richardson extrapolation
    }
    return simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * abs_share, rel_accept, depth + 1,
                       worst_excess) +
           simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * abs_share, rel_accept, depth + 1,
                       worst_excess);
}

template <typename F>
double simpson_panel(const F& f, double a, double b, double abs_share, double rel_accept,
                     double& worst_excess) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, m, b, fa, fm, fb, whole, abs_share, rel_accept, 0, worst_excess);
}

} // namespace detail

// Adaptive Simpson quadrature of f over [a, b], intended for the smooth
// non-negative integrands of this project. The interval is first split into
// panels of width at most max_panel (so narrow features away from the
// endpoints are not missed), each refined adaptively under a mixed
// criterion: an absolute budget shared across panels, or a relative target
// against each panel's own value, whichever is looser (see simpson_rec).
// abs_tol = 0 requests purely relative refinement. Throws numerical_error
// if the recursion bottoms out with error estimates far beyond the target.
template <typename F>
double integrate(const F& f, double a, double b, double abs_tol = 1e-12, double rel_tol = 1e-10,
                 double max_panel = 1.0) {
    if (!(b >= a)) throw std::invalid_argument("integrate: b < a");
    if (a == b) return 0.0;
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / max_panel)));
    const double h = (b - a) / panels;
    const double abs_share = abs_tol / panels;
    const double rel_accept = 0.01 * rel_tol;

    double sum = 0.0, excess = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double x0 = a + i * h;
        const double x1 = (i + 1 == panels) ? b : x0 + h;
        sum += detail::simpson_panel(f, x0, x1, abs_share, rel_accept, excess);
    }
    if (excess > 100.0 * (abs_tol + rel_tol * std::abs(sum)))
        throw numerical_error("integrate: adaptive refinement exhausted before reaching "
                              "the requested tolerance");
    return sum;
}

} // namespace lora::num
