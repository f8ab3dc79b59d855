#pragma once

#include <cstdint>
#include <random>
#include <span>

#include "lora/modulation.hpp"
#include "lora/params.hpp"

namespace lora {

// Stateless 64-bit mix used to derive independent RNG streams from
// (master seed, sweep point, worker) coordinates.
std::uint64_t splitmix64(std::uint64_t x);

// One channel realization stream: owns the RNG and applies impairments.
//
// SNR convention: the transmit chirps have unit power per complex sample, so
// at per-sample SNR of snr_db the complex noise variance is
// N0 = 10^(-snr_db/10), i.e. N(0, N0/2) per real component. After the N-point
// demodulation FFT the aligned bin accumulates magnitude N while each bin's
// noise is complex Gaussian with variance N*N0, giving the familiar
// processing gain of 10*log10(N).
//
// CFO convention: a residual carrier offset of lambda fractional bins
// multiplies sample n (counted from the start of the waveform, so the phase
// ramp is continuous across symbol boundaries) by exp(j 2 pi lambda n / N).
class Channel {
public:
    Channel(ChannelConfig cfg, std::uint64_t seed);

    // Stream for one (sweep point, worker) cell of a simulation grid.
    static Channel for_point(ChannelConfig cfg, std::uint64_t master_seed,
                             std::uint64_t point_index, std::uint64_t worker_index);

    void apply_cfo(std::span<cd> iq, const LoRaParams& p) const;
    void add_awgn(std::span<cd> iq);

    // Complex noise variance per sample; 0 when snr_db is +infinity.
    double noise_variance() const noexcept { return n0_; }
    const ChannelConfig& config() const noexcept { return cfg_; }

    // Standard normal deviate (Box-Muller over explicitly constructed
    // uniforms, so sequences are identical across standard libraries).
    double gaussian();
    // Raw 64 random bits from the stream (also used for payload data).
    std::uint64_t random_bits() { return rng_(); }

private:
    ChannelConfig cfg_;
    double n0_;
    std::mt19937_64 rng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace lora
