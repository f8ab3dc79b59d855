#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "lora/params.hpp"

namespace lora {

using cd = std::complex<double>;

// Baseband chirp waveform for one symbol s in [0, N):
//   x_s[n] = exp(j 2 pi (n^2 / (2N) + (s/N - 1/2) n)),  n = 0 .. N-1
// Unit amplitude per sample, so signal power is exactly 1. The phase is
// reduced with exact integer arithmetic modulo 2N before the complex
// exponential is taken, which keeps sample values reproducible across
// platforms and symbol indices.
cd chirp_sample(Symbol s, int n, int n_chips);

// Modulate a symbol sequence into a contiguous baseband waveform
// (payload symbols back to back, N samples each).
std::vector<cd> modulate(std::span<const Symbol> symbols, const LoRaParams& p);
void modulate_into(std::span<const Symbol> symbols, const LoRaParams& p, cd* out);

// In-place radix-2 decimation-in-time FFT; x.size() must be a power of two.
void fft_inplace(std::vector<cd>& x);

// Noncoherent demodulator for one spreading factor. Each symbol is
// multiplied by the conjugate reference chirp (the s = 0 waveform) and
// transformed with an unnormalized N-point FFT; the decision is the index
// of the largest bin magnitude, with ties broken toward the lowest index.
// The instance owns its FFT workspace so repeated calls allocate nothing.
class Demodulator {
public:
    explicit Demodulator(const LoRaParams& p);

    Symbol demodulate_symbol(const cd* samples);
    // Bin magnitudes |Y_k| from the most recent demodulate_symbol call.
    const std::vector<double>& bin_magnitudes() const noexcept { return mags_; }
    // Complex FFT output from the most recent demodulate_symbol call.
    const std::vector<cd>& bins() const noexcept { return work_; }
    int n_chips() const noexcept { return n_; }

private:
    int n_;
    std::vector<cd> ref_conj_; // conjugate of the s = 0 chirp
    std::vector<cd> work_;
    std::vector<double> mags_;
};

// Demodulate a whole waveform (length must be a multiple of N).
std::vector<Symbol> demodulate(std::span<const cd> iq, const LoRaParams& p);

// Fast modulator used by the simulation engine: x_s[n] equals the s = 0
// chirp rotated by the tone exp(j 2 pi s n / N), so one table of N complex
// roots of unity plus the reference chirp reproduces every symbol exactly.
class Modulator {
public:
    explicit Modulator(const LoRaParams& p);
    void write_symbol(Symbol s, cd* out) const;
    int n_chips() const noexcept { return n_; }

private:
    int n_;
    std::vector<cd> ref_;  // s = 0 chirp
    std::vector<cd> tone_; // tone_[k] = exp(j 2 pi k / N)
};

} // namespace lora
