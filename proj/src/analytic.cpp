#include "lora/analytic.hpp"

#include <cmath>
#include <stdexcept>

#include "lora/numerics.hpp"

namespace lora::analytic {

namespace {

constexpr double kPiSqOver12 = M_PI * M_PI / 12.0;

// Core Q-function approximation of the argmax error for a pool of m bins
// (one aligned, m-1 noise-only). x = N * snr is the post-FFT SNR of the
// aligned bin. The mean/variance of the maximum of the m-1 Rayleigh
// magnitudes are moment-matched through harmonic numbers.
double ser_pool(double x, long m) {
    const double h1 = num::harmonic(m - 1);
    const double inner = h1 * h1 - kPiSqOver12;
    const double arg = (std::sqrt(x) - std::pow(inner, 0.25)) /
                       std::sqrt(h1 - std::sqrt(inner) + 0.5);
    return num::q_function(arg);
}

double snr_linear(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

} // namespace

double ser_awgn(double snr_db, const LoRaParams& p) {
    const long n = p.chips();
    return ser_pool(n * snr_linear(snr_db), n);
}

double ser_awgn_conditional(double snr_db, const LoRaParams& p, int stage) {
    if (stage < 1 || stage > p.sf)
        throw std::invalid_argument("ser_awgn_conditional: stage must be in [1, sf]");
    const long n = p.chips();
    const long pool = n >> (stage - 1);
    return ser_pool(n * snr_linear(snr_db), pool);
}

double ber_awgn(double snr_db, const LoRaParams& p) { return 0.5 * ser_awgn(snr_db, p); }

double ber_awgn_conditional(double snr_db, const LoRaParams& p, int stage) {
    return 0.5 * ser_awgn_conditional(snr_db, p, stage);
}

double codeword_error_rate(double pb, int n) {
    if (!(pb >= 0.0 && pb <= 1.0)) throw std::invalid_argument("codeword_error_rate: pb not in [0,1]");
    if (n < 2) throw std::invalid_argument("codeword_error_rate: n must be >= 2");
    if (pb == 0.0) return 0.0;
    if (pb == 1.0) return 1.0;
    // 1 - (1-pb)^n - n pb (1-pb)^(n-1)  ==  -expm1((n-1) log1p(-pb) + log1p((n-1) pb))
    return -std::expm1((n - 1) * std::log1p(-pb) + std::log1p((n - 1) * pb));
}

namespace {

double fer_from_codeword_rates(const std::vector<double>& pcw_per_block, double blocks) {
    double log_ok = 0.0;
    for (double pcw : pcw_per_block) log_ok += std::log1p(-pcw);
    return -std::expm1(blocks * log_ok);
}

} // namespace

double fer_flat(double snr_db, const LoRaParams& p, const CodeConfig& code,
                const FrameConfig& frame) {
    validate_frame(frame, code);
    const int n = code.code_bits();
    const double pcw = codeword_error_rate(ber_awgn(snr_db, p), n);
    const double codewords = static_cast<double>(frame.payload_symbols) * p.sf / n;
    return -std::expm1(codewords * std::log1p(-pcw));
}

double fer_stagewise(double snr_db, const LoRaParams& p, const CodeConfig& code,
                     const FrameConfig& frame) {
    validate_frame(frame, code);
    const int n = code.code_bits();
    std::vector<double> pcw(static_cast<std::size_t>(p.sf));
    for (int i = 1; i <= p.sf; ++i)
        pcw[static_cast<std::size_t>(i - 1)] =
            codeword_error_rate(ber_awgn_conditional(snr_db, p, i), n);
    const double blocks = static_cast<double>(frame.payload_symbols) / n;
    return fer_from_codeword_rates(pcw, blocks);
}

std::vector<cd> cfo_bins(Symbol s, double lambda, const LoRaParams& p) {
    const int n = p.chips();
    if (s >= static_cast<Symbol>(n)) throw std::invalid_argument("cfo_bins: symbol out of range");
    if (!(lambda >= -0.5 && lambda <= 0.5))
        throw std::invalid_argument("cfo_bins: lambda must lie in [-0.5, 0.5]");
    std::vector<cd> bins(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double d = static_cast<double>(static_cast<int>(s) - k) + lambda;
        double amp;
        if (d == 0.0) {
            amp = static_cast<double>(n);
        } else {
            // sin(pi d) via exact reduction d = m + r, |r| <= 1/2, so the
            // argument of the actual sine never exceeds pi/2.
            const double m = std::nearbyint(d);
            const double r = d - m;
            const double num_sin = (static_cast<long long>(m) % 2 == 0 ? 1.0 : -1.0) *
                                   std::sin(M_PI * r);
            const double den_sin = std::sin(M_PI * d / n);
            amp = num_sin / den_sin;
        }
        const double turns = std::fmod(0.5 * d * (n - 1) / n, 1.0); // theta / (2 pi)
        const double theta = 2.0 * M_PI * turns;
        bins[static_cast<std::size_t>(k)] = amp * cd(std::cos(theta), std::sin(theta));
    }
    return bins;
}

namespace {

// P(max of a competitor group exceeds the aligned bin), as an integral over
// the aligned bin's Rice density times the group's exceedance probability.
// All magnitudes are scaled to unit noise per component.
double exceedance_term(double vs, const std::vector<double>& group_v) {
    const double hi = vs + 12.0;
    auto integrand = [&](double y) {
        double log_all_below = 0.0;
        for (double v : group_v) {
            const double q = num::marcum_q1(v, y);
            log_all_below += std::log1p(-q);
            if (std::isinf(log_all_below)) break; // some competitor exceeds y surely
        }
        return num::rice_pdf(y, vs) * (-std::expm1(log_all_below));
    };
    // rel 1e-8: the exceedance product is cancellation-limited near 1e-14,
    // so tighter relative targets would chase round-off, not signal
    return num::integrate(integrand, 0.0, hi, 1e-12, 1e-8, 1.0);
}

} // namespace

double ber_cfo_conditional(double snr_db, double lambda, const LoRaParams& p, Symbol s) {
    const int n = p.chips();
    if (s >= static_cast<Symbol>(n))
        throw std::invalid_argument("ber_cfo_conditional: symbol out of range");
    const double snr = snr_linear(snr_db);
    const double scale = std::sqrt(2.0 * snr / n);

    const std::vector<cd> bins = cfo_bins(s, lambda, p);
    const double vs = std::abs(bins[s]) * scale;

    const Symbol left = static_cast<Symbol>((s + static_cast<Symbol>(n) - 1) % n);
    const Symbol right = static_cast<Symbol>((s + 1) % n);
    std::vector<double> neighbors = {std::abs(bins[left]) * scale, std::abs(bins[right]) * scale};
    std::vector<double> rest;
    rest.reserve(static_cast<std::size_t>(n) - 3);
    for (int k = 0; k < n; ++k) {
        const Symbol ks = static_cast<Symbol>(k);
        if (ks == s || ks == left || ks == right) continue;
        rest.push_back(std::abs(bins[static_cast<std::size_t>(k)]) * scale);
    }

    // A decision on a Gray neighbor flips exactly one of the sf label bits;
    // any other wrong decision flips half of them on average.
    const double p_neighbor = exceedance_term(vs, neighbors);
    const double p_rest = exceedance_term(vs, rest);
    return p_neighbor / p.sf + 0.5 * p_rest;
}

double ber_cfo(double snr_db, double lambda, const LoRaParams& p) {
    return ber_cfo_conditional(snr_db, lambda, p, static_cast<Symbol>(p.chips() / 2));
}

double fer_cfo(double snr_db, double lambda, const LoRaParams& p, const CodeConfig& code,
               const FrameConfig& frame) {
    validate_frame(frame, code);
    const int n = code.code_bits();
    const double pcw = codeword_error_rate(ber_cfo(snr_db, lambda, p), n);
    const double codewords = static_cast<double>(frame.payload_symbols) * p.sf / n;
    return -std::expm1(codewords * std::log1p(-pcw));
}

double crossing_snr_db(const std::function<double(double)>& rate, double level, double lo,
                       double hi, double tol_db) {
    if (!(lo < hi)) throw std::invalid_argument("crossing_snr_db: need lo < hi");
    double flo = rate(lo), fhi = rate(hi);
    if (!(flo >= level && level >= fhi))
        throw std::invalid_argument("crossing_snr_db: [lo, hi] does not bracket the level");
    while (hi - lo > tol_db) {
        const double mid = 0.5 * (lo + hi);
        if (rate(mid) >= level)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace lora::analytic
