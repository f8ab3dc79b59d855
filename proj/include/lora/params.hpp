#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lora {

using Symbol = std::uint32_t;

// Chirp-spread-spectrum parameter set. A spreading factor sf in [7, 12]
// defines symbols that carry sf bits each and span N = 2^sf chips, sampled
// at one complex sample per chip.
struct LoRaParams {
    int sf;

    explicit LoRaParams(int sf_) : sf(sf_) {
        if (sf < 7 || sf > 12)
            throw std::invalid_argument("spreading factor must be in [7, 12], got " +
                                        std::to_string(sf_));
    }

    // Chips (and complex samples) per symbol.
    int chips() const noexcept { return 1 << sf; }
};

// Forward error correction scheme applied to 4-bit data nibbles.
//   hamming47: single-error-correcting (4,7) block code
//   hamming48: (4,7) extended with an overall parity bit; corrects single
//              errors and detects (reports) double errors
//   uncoded:   raw symbols, no block code and no interleaver
enum class CodeScheme { hamming47, hamming48, uncoded };

struct CodeConfig {
    CodeScheme scheme = CodeScheme::hamming48;

    bool coded() const noexcept { return scheme != CodeScheme::uncoded; }
    int data_bits() const { return 4; }
    int code_bits() const {
        switch (scheme) {
            case CodeScheme::hamming47: return 7;
            case CodeScheme::hamming48: return 8;
            default:
                throw std::logic_error("code_bits() is meaningless for the uncoded scheme");
        }
    }
    std::string name() const {
        switch (scheme) {
            case CodeScheme::hamming47: return "hamming47";
            case CodeScheme::hamming48: return "hamming48";
            default: return "uncoded";
        }
    }
};

CodeScheme code_scheme_from_name(const std::string& name);

// Frame layout: payload_symbols chirp symbols per frame. For coded schemes
// the payload must split into whole interleaver blocks, i.e. payload_symbols
// must be a multiple of the codeword length.
struct FrameConfig {
    int payload_symbols = 32;
};

void validate_frame(const FrameConfig& frame, const CodeConfig& code);

// Channel condition for one operating point. snr_db is the per-sample
// signal-to-noise ratio in dB (signal power is 1 by construction, so the
// complex noise variance is 10^(-snr_db/10)). cfo_lambda is the carrier
// frequency offset as a fraction of the bin spacing, in [-0.5, 0.5].
struct ChannelConfig {
    double snr_db = 0.0;
    double cfo_lambda = 0.0;
};

void validate_channel(const ChannelConfig& cfg);

} // namespace lora
