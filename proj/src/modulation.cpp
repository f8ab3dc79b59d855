#include "lora/modulation.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace lora {

namespace {

// Phase of x_s[n] in units of full turns, times 2N: the exponent
//   n^2/(2N) + (s/N - 1/2) n  =  (n^2 + (2s - N) n) / (2N)
// is rational with denominator 2N, so the numerator can be reduced mod 2N
// in integers and the only floating-point step is one sin/cos evaluation.
inline cd chirp_phase(long long s, long long n, long long big_n) {
    const long long two_n = 2 * big_n;
    long long num = (n * n + (2 * s - big_n) * n) % two_n;
    if (num < 0) num += two_n;
    const double angle = 2.0 * M_PI * static_cast<double>(num) / static_cast<double>(two_n);
    return {std::cos(angle), std::sin(angle)};
}

} // namespace

cd chirp_sample(Symbol s, int n, int n_chips) {
    return chirp_phase(static_cast<long long>(s), n, n_chips);
}

void modulate_into(std::span<const Symbol> symbols, const LoRaParams& p, cd* out) {
    const int n_chips = p.chips();
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        const Symbol s = symbols[i];
        if (s >= static_cast<Symbol>(n_chips))
            throw std::invalid_argument("modulate: symbol out of range for spreading factor");
        cd* dst = out + i * static_cast<std::size_t>(n_chips);
        for (int n = 0; n < n_chips; ++n) dst[n] = chirp_phase(s, n, n_chips);
    }
}

std::vector<cd> modulate(std::span<const Symbol> symbols, const LoRaParams& p) {
    std::vector<cd> iq(symbols.size() * static_cast<std::size_t>(p.chips()));
    modulate_into(symbols, p, iq.data());
    return iq;
}

void fft_inplace(std::vector<cd>& x) {
    const std::size_t n = x.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft_inplace: length must be a nonzero power of two");
    // Bit-reversal permutation.
    const int log2n = std::countr_zero(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = 0, v = i;
        for (int b = 0; b < log2n; ++b) {
            r = (r << 1) | (v & 1);
            v >>= 1;
        }
        if (r > i) std::swap(x[i], x[r]);
    }
    // Butterflies with per-stage twiddles from a shared table.
    static thread_local std::vector<cd> table;
    static thread_local std::size_t table_n = 0;
    if (table_n != n) {
        table.resize(n / 2);
        for (std::size_t k = 0; k < n / 2; ++k) {
            const double a = -2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n);
            table[k] = {std::cos(a), std::sin(a)};
        }
        table_n = n;
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t base = 0; base < n; base += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cd w = table[k * stride];
                const cd u = x[base + k];
                const cd t = w * x[base + k + len / 2];
                x[base + k] = u + t;
                x[base + k + len / 2] = u - t;
            }
        }
    }
}

Demodulator::Demodulator(const LoRaParams& p)
    : n_(p.chips()), ref_conj_(n_), work_(n_), mags_(n_) {
    for (int n = 0; n < n_; ++n) ref_conj_[n] = std::conj(chirp_sample(0, n, n_));
}

Symbol Demodulator::demodulate_symbol(const cd* samples) {
    for (int i = 0; i < n_; ++i) work_[i] = samples[i] * ref_conj_[i];
    fft_inplace(work_);
    Symbol best = 0;
    double best_mag = -1.0;
    for (int k = 0; k < n_; ++k) {
        const double m = std::norm(work_[k]);
        mags_[k] = m;
        if (m > best_mag) { // strict: ties resolve to the lowest index
            best_mag = m;
            best = static_cast<Symbol>(k);
        }
    }
    for (int k = 0; k < n_; ++k) mags_[k] = std::sqrt(mags_[k]);
    return best;
}

std::vector<Symbol> demodulate(std::span<const cd> iq, const LoRaParams& p) {
    const std::size_t n_chips = static_cast<std::size_t>(p.chips());
    if (iq.size() % n_chips != 0)
        throw std::invalid_argument("demodulate: waveform length is not a whole number of symbols");
    Demodulator dm(p);
    std::vector<Symbol> out(iq.size() / n_chips);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = dm.demodulate_symbol(iq.data() + i * n_chips);
    return out;
}

Modulator::Modulator(const LoRaParams& p) : n_(p.chips()), ref_(n_), tone_(n_) {
    for (int n = 0; n < n_; ++n) {
        ref_[n] = chirp_sample(0, n, n_);
        const double a = 2.0 * M_PI * static_cast<double>(n) / static_cast<double>(n_);
        tone_[n] = {std::cos(a), std::sin(a)};
    }
}

void Modulator::write_symbol(Symbol s, cd* out) const {
    if (s >= static_cast<Symbol>(n_))
        throw std::invalid_argument("write_symbol: symbol out of range");
    const std::size_t mask = static_cast<std::size_t>(n_) - 1;
    std::size_t idx = 0;
    const std::size_t step = s;
    for (int n = 0; n < n_; ++n) {
        out[n] = ref_[n] * tone_[idx];
        idx = (idx + step) & mask;
    }
}

} // namespace lora
