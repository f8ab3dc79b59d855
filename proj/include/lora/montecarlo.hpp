#pragma once

#include <cstdint>
#include <vector>

#include "lora/channel.hpp"
#include "lora/coding.hpp"
#include "lora/modulation.hpp"
#include "lora/params.hpp"

namespace lora {

// Stopping rule for one operating point: simulate until min_errors error
// events have been observed or max_trials trials have been spent, whichever
// comes first. A trial is one frame for coded runs and one chirp symbol for
// uncoded runs; the error events counted are frame errors (coded) and symbol
// errors (uncoded) respectively.
struct StoppingRule {
    std::uint64_t min_errors = 100;
    std::uint64_t max_trials = 100000;
};

struct PointStats {
    double snr_db = 0.0;
    std::uint64_t frames = 0, frame_errors = 0;
    std::uint64_t codewords = 0, codeword_errors = 0;
    std::uint64_t symbols = 0, symbol_errors = 0;
    std::uint64_t label_bits = 0, label_bit_errors = 0; // Gray label bits before decoding

    double fer() const { return frames ? double(frame_errors) / double(frames) : 0.0; }
    double cwer() const { return codewords ? double(codeword_errors) / double(codewords) : 0.0; }
    double ser() const { return symbols ? double(symbol_errors) / double(symbols) : 0.0; }
    double ber() const { return label_bits ? double(label_bit_errors) / double(label_bits) : 0.0; }

    // 95% normal-approximation half-widths on the frame and symbol rates.
    double fer_ci95() const;
    double ser_ci95() const;

    void merge(const PointStats& other);
};

// A complete transmit/receive chain for one parameter set, with all buffers
// preallocated so a worker can run frames back to back without touching the
// allocator. For coded schemes a frame is: random nibbles -> Hamming encode
// -> diagonal interleave -> Gray map -> chirp modulate -> channel -> FFT
// demodulate -> Gray demap -> deinterleave -> decode. A frame error is any
// codeword whose decoder output differs from what was transmitted, whether
// the decoder flagged it or silently miscorrected. Uncoded frames skip the
// code and interleaver and score raw symbol/label-bit errors.
class FrameSimulator {
public:
    FrameSimulator(const LoRaParams& p, const CodeConfig& code, const FrameConfig& frame);

    void run_frame(Channel& ch, PointStats& acc);

    const LoRaParams& params() const noexcept { return p_; }

private:
    void run_frame_coded(Channel& ch, PointStats& acc);
    void run_frame_uncoded(Channel& ch, PointStats& acc);
    std::uint32_t draw_bits(Channel& ch, int k);

    LoRaParams p_;
    CodeConfig code_;
    FrameConfig frame_;
    Modulator mod_;
    Demodulator dm_;
    int nblocks_ = 0;
    std::vector<std::uint8_t> data_;  // transmitted nibbles, nblocks * sf
    std::vector<Symbol> tx_, rx_, txlab_, rxlab_;
    std::vector<cd> iq_;
    CodewordBlock blk_, ilv_;
    std::uint64_t bitpool_ = 0;
    int bitcount_ = 0;
};

// One sweep: a list of SNR points sharing every other parameter.
struct SweepConfig {
    LoRaParams params{7};
    CodeConfig code{};
    FrameConfig frame{};
    double cfo_lambda = 0.0;
    std::vector<double> snr_db;
    StoppingRule stop{};
    std::uint64_t seed = 1;
};

// Worker-count resolution: an explicit request wins, then the
// LORALAB_WORKERS environment variable, then the OpenMP thread limit
// (1 when built without OpenMP).
int resolve_workers(int requested);

// Simulate one grid point. workers == 1 runs the serial reference loop,
// which checks the stopping rule after every frame and is bit-reproducible
// for a fixed seed. workers > 1 runs the same per-worker chain under OpenMP
// with geometrically ramped batch sizes between stopping-rule checks;
// results are deterministic for a fixed (seed, workers) pair, and may
// overshoot the stopping rule by at most one round per worker.
PointStats simulate_point(const SweepConfig& cfg, std::size_t point_index, int workers);

std::vector<PointStats> simulate_sweep(const SweepConfig& cfg, int workers = 0);

} // namespace lora
