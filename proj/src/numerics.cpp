#include "lora/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lora::num {

double q_function(double x) {
    return 0.5 * std::erfc(x * M_SQRT1_2);
}

double harmonic(long n) {
    if (n < 0) throw std::invalid_argument("harmonic: n must be >= 0");
    double s = 0.0;
    for (long k = n; k >= 1; --k) s += 1.0 / static_cast<double>(k);
    return s;
}

double log_i0_scaled(double x) {
    x = std::abs(x);
    if (x < 20.0) {
        // Ascending series I0(x) = sum_k (x^2/4)^k / (k!)^2.
        const double q = 0.25 * x * x;
        double term = 1.0, sum = 1.0;
        for (int k = 1; k < 200; ++k) {
            term *= q / (static_cast<double>(k) * k);
            sum += term;
            if (term < sum * 1e-18) break;
        }
        return std::log(sum) - x;
    }
    // Asymptotic expansion I0(x) ~ e^x / sqrt(2 pi x) * sum_m a_m x^-m with
    // a_m / a_{m-1} = (2m-1)^2 / (8m). Truncate at the smallest term.
    double term = 1.0, sum = 1.0;
    for (int m = 1; m < 40; ++m) {
        const double c = static_cast<double>(2 * m - 1);
        const double next = term * (c * c) / (8.0 * m * x);
        if (next >= term) break; // divergent tail of the asymptotic series
        term = next;
        sum += term;
        if (term < sum * 1e-18) break;
    }
    return -0.5 * std::log(2.0 * M_PI * x) + std::log(sum);
}

double log_i0(double x) {
    return log_i0_scaled(x) + std::abs(x);
}

double gamma_p(double a, double x) {
    if (!(a > 0.0) || !(x >= 0.0)) throw std::invalid_argument("gamma_p: need a > 0, x >= 0");
    if (x == 0.0) return 0.0;
    const double lpre = -x + a * std::log(x) - std::lgamma(a);
    if (x < a + 1.0) {
        // Series: P(a,x) = x^a e^-x / Gamma(a) * sum_k x^k / (a (a+1) ... (a+k))
        double ap = a, del = 1.0 / a, sum = 1.0 / a;
        for (int i = 0; i < 1000; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-17)
                return std::min(1.0, sum * std::exp(lpre));
        }
        throw numerical_error("gamma_p: series did not converge");
    }
    // Continued fraction for Q(a,x), modified Lentz.
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delt = d * c;
        h *= delt;
        if (std::abs(delt - 1.0) < 1e-17) {
            const double q = std::exp(lpre) * h;
            return std::max(0.0, 1.0 - q);
        }
    }
    throw numerical_error("gamma_p: continued fraction did not converge");
}

double rice_pdf(double y, double v) {
    if (v < 0.0) throw std::invalid_argument("rice_pdf: v must be >= 0");
    if (y <= 0.0) return 0.0;
    const double d = y - v;
    const double l = std::log(y) - 0.5 * d * d + log_i0_scaled(v * y);
    return std::exp(l);
}

double rice_cdf(double y, double v) {
    if (v < 0.0) throw std::invalid_argument("rice_cdf: v must be >= 0");
    if (y <= 0.0) return 0.0;
    const double t = 0.5 * y * y; // chi-square coordinate (2 dof, unit scale)
    if (v == 0.0) return -std::expm1(-t); // Rayleigh
    const double h = 0.5 * v * v; // Poisson mixing mean

    // CDF = sum_{j>=0} Pois(j; h) * P(j+1, t). Sum two-sided from the Poisson
    // mode; every term is positive so no cancellation occurs. G_j = P(j+1, t)
    // obeys G_{j+1} = G_j - d_{j+1} and G_{j-1} = G_j + d_j with
    // d_j = t^j e^-t / j!.
    const long j0 = static_cast<long>(h);
    const double lw0 = -h + j0 * std::log(h) - std::lgamma(static_cast<double>(j0) + 1.0);
    const double ld0 = -t + j0 * std::log(t) - std::lgamma(static_cast<double>(j0) + 1.0);
    const double w0 = std::exp(lw0);
    const double d0 = std::exp(ld0);
    const double g0 = gamma_p(static_cast<double>(j0) + 1.0, t);

    double sum = w0 * g0;
    // Upward sweep.
    {
        double w = w0, g = g0, d = d0;
        for (long j = j0 + 1; j < j0 + 100000; ++j) {
            w *= h / static_cast<double>(j);
            if (w < 1e-300) break; // Poisson tail underflowed; nothing left to add
            d *= t / static_cast<double>(j);
            g -= d;
            if (g < 0.0) g = 0.0;
            const double term = w * g;
            sum += term;
            if (term < sum * 1e-17 && j > j0 + 4) break;
        }
    }
    // Downward sweep.
    {
        double w = w0, g = g0, d = d0;
        for (long j = j0 - 1; j >= 0; --j) {
            w *= static_cast<double>(j + 1) / h;
            g += d;
            if (g > 1.0) g = 1.0;
            d *= static_cast<double>(j + 1) / t;
            const double term = w * g;
            sum += term;
            if (term < sum * 1e-17 && j < j0 - 4) break;
        }
    }
    return std::min(1.0, sum);
}

double marcum_q1(double a, double b) {
    if (a < 0.0 || b < 0.0) throw std::invalid_argument("marcum_q1: need a, b >= 0");
    if (b == 0.0) return 1.0;
    if (a == 0.0) return std::exp(-0.5 * b * b);
    return std::max(0.0, 1.0 - rice_cdf(b, a));
}

} // namespace lora::num
