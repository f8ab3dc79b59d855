#pragma once

#include <functional>
#include <vector>

#include "lora/modulation.hpp"
#include "lora/params.hpp"

// Closed-form error-rate approximations for the noncoherent FFT demodulator,
// plus semi-analytic (single numerical integral) rates under a fractional
// carrier frequency offset. All rates are probabilities in [0, 1]; snr_db is
// the per-sample SNR defined in channel.hpp.

namespace lora::analytic {

// Symbol error rate over AWGN. Approximates P(argmax != s) for N = 2^sf
// Rician/Rayleigh FFT bins by a Gaussian moment match of the maximum of the
// N-1 noise-only bins (extreme-value style, expressed through harmonic
// numbers), evaluated with the Q-function.
double ser_awgn(double snr_db, const LoRaParams& p);

// Same expression with the competitor pool shrunk to M = N / 2^(i-1)
// candidates, i = 1..sf: the effective error rate seen by the bit of
// significance i in the Gray label (i = 1 is the full alphabet).
double ser_awgn_conditional(double snr_db, const LoRaParams& p, int stage);

// Bit error rate of the Gray-labeled symbol: half the symbol error rate
// (a symbol error flips half the label bits on average).
double ber_awgn(double snr_db, const LoRaParams& p);
double ber_awgn_conditional(double snr_db, const LoRaParams& p, int stage);

// Probability that an n-bit codeword of a single-error-correcting code is
// not recovered, given independent bit error probability pb: one minus the
// probability of zero or one bit errors. Evaluated with log1p/expm1 so tiny
// pb does not cancel.
double codeword_error_rate(double pb, int n);

// Frame error rate, flat approximation: every coded bit sees the full-
// alphabet bit error rate. A frame of payload_symbols chirps carries
// payload_symbols * sf / n codewords, each failing independently.
double fer_flat(double snr_db, const LoRaParams& p, const CodeConfig& code,
                const FrameConfig& frame);

// Frame error rate, stagewise approximation: an interleaved block is scored
// as sf codewords, one per bit-significance stage, each using that stage's
// conditional bit error rate. Always at or below the flat approximation
// (the stage rates average below the full-pool rate through the concave
// codeword map).
double fer_stagewise(double snr_db, const LoRaParams& p, const CodeConfig& code,
                     const FrameConfig& frame);

// --- Fractional carrier frequency offset ------------------------------------

// Noiseless demodulation FFT output for symbol s under offset lambda: energy
// leaks across bins with the Dirichlet kernel
//   Y_k = sin(pi d) / sin(pi d / N) * exp(j pi d (N-1) / N),  d = s - k + lambda
// (k = s, lambda = 0 degenerates to Y_s = N).
std::vector<cd> cfo_bins(Symbol s, double lambda, const LoRaParams& p);

// Bit error rate under offset lambda, conditioned on transmit symbol s.
// Rician decision statistics: scaled to unit noise, bin k has magnitude
// Rice(v_k) with v_k = |Y_k| * sqrt(2 snr / N). Decisions that land on the
// two neighbors of s flip one Gray-label bit; decisions elsewhere flip half
// the bits. Both terms are exceedance integrals of the winning bin against
// the maximum of its competitor group, evaluated by adaptive quadrature.
double ber_cfo_conditional(double snr_db, double lambda, const LoRaParams& p, Symbol s);

// Representative-symbol rate (s = N/2). The rate is invariant to s apart
// from index wraparound effects far below the accuracy of interest, so one
// evaluation stands in for the alphabet average.
double ber_cfo(double snr_db, double lambda, const LoRaParams& p);

// Frame error rate under offset lambda (flat construction on ber_cfo).
double fer_cfo(double snr_db, double lambda, const LoRaParams& p, const CodeConfig& code,
               const FrameConfig& frame);

// Smallest snr_db in [lo, hi] where the monotonically decreasing rate
// function crosses the given level, found by bisection to tol_db. Throws
// std::invalid_argument if [lo, hi] does not bracket the level.
double crossing_snr_db(const std::function<double(double)>& rate, double level, double lo,
                       double hi, double tol_db = 1e-6);

} // namespace lora::analytic
