#include "lora/coding.hpp"

#include <bit>
#include <stdexcept>

namespace lora {

CodeScheme code_scheme_from_name(const std::string& name) {
    if (name == "hamming47") return CodeScheme::hamming47;
    if (name == "hamming48") return CodeScheme::hamming48;
    if (name == "uncoded") return CodeScheme::uncoded;
    throw std::invalid_argument("unknown code scheme: " + name);
}

void validate_frame(const FrameConfig& frame, const CodeConfig& code) {
    if (frame.payload_symbols <= 0)
        throw std::invalid_argument("frame: payload_symbols must be positive");
    if (code.coded() && frame.payload_symbols % code.code_bits() != 0)
        throw std::invalid_argument("frame: payload_symbols must be a multiple of the codeword "
                                    "length for coded schemes");
}

namespace {

inline int bit(std::uint32_t w, int i) { return (w >> i) & 1u; }

// Syndrome bit s_k checks parity p_k against its data bits; the 3-bit value
// (s0 | s1<<1 | s2<<2) indexes the unique flipped position for weight-1
// errors. Position -> syndrome: d0:5 d1:7 d2:3 d3:6 p0:1 p1:2 p2:4.
constexpr int kSyndromeToPosition[8] = {-1, 4, 5, 2, 6, 0, 3, 1};

} // namespace

std::uint16_t hamming_encode(std::uint8_t nibble, const CodeConfig& code) {
    if (!code.coded()) throw std::invalid_argument("hamming_encode: scheme is uncoded");
    if (nibble > 0xF) throw std::invalid_argument("hamming_encode: nibble out of range");
    const int d0 = bit(nibble, 0), d1 = bit(nibble, 1), d2 = bit(nibble, 2), d3 = bit(nibble, 3);
    const int p0 = d0 ^ d1 ^ d2;
    const int p1 = d1 ^ d2 ^ d3;
    const int p2 = d0 ^ d1 ^ d3;
    std::uint16_t w = static_cast<std::uint16_t>(nibble | (p0 << 4) | (p1 << 5) | (p2 << 6));
    if (code.scheme == CodeScheme::hamming48) {
        const int p3 = std::popcount(static_cast<unsigned>(w)) & 1;
        w = static_cast<std::uint16_t>(w | (p3 << 7));
    }
    return w;
}

DecodeResult hamming_decode(std::uint16_t word, const CodeConfig& code) {
    if (!code.coded()) throw std::invalid_argument("hamming_decode: scheme is uncoded");
    const int n = code.code_bits();
    if (word >> n) throw std::invalid_argument("hamming_decode: word has bits beyond the code length");
    const int d0 = bit(word, 0), d1 = bit(word, 1), d2 = bit(word, 2), d3 = bit(word, 3);
    const int s0 = bit(word, 4) ^ d0 ^ d1 ^ d2;
    const int s1 = bit(word, 5) ^ d1 ^ d2 ^ d3;
    const int s2 = bit(word, 6) ^ d0 ^ d1 ^ d3;
    const int syndrome = s0 | (s1 << 1) | (s2 << 2);

    if (code.scheme == CodeScheme::hamming47) {
        if (syndrome == 0) return {static_cast<std::uint8_t>(word & 0xF), DecodeStatus::clean};
        const std::uint16_t fixed =
            static_cast<std::uint16_t>(word ^ (1u << kSyndromeToPosition[syndrome]));
        return {static_cast<std::uint8_t>(fixed & 0xF), DecodeStatus::corrected};
    }

    const bool parity_even = (std::popcount(static_cast<unsigned>(word)) & 1) == 0;
    if (syndrome == 0 && parity_even)
        return {static_cast<std::uint8_t>(word & 0xF), DecodeStatus::clean};
    if (!parity_even) {
        // Odd overall parity: a single error somewhere, locatable. Syndrome 0
        // means the overall parity bit itself flipped (data unaffected).
        std::uint16_t fixed = word;
        if (syndrome != 0) fixed ^= static_cast<std::uint16_t>(1u << kSyndromeToPosition[syndrome]);
        return {static_cast<std::uint8_t>(fixed & 0xF), DecodeStatus::corrected};
    }
    // Nonzero syndrome with even overall parity: an even number of errors,
    // beyond the code's correction radius.
    return {static_cast<std::uint8_t>(word & 0xF), DecodeStatus::failure};
}

int hamming_distance(std::uint16_t a, std::uint16_t b) {
    return std::popcount(static_cast<unsigned>(a ^ b));
}

CodewordBlock interleave(const CodewordBlock& in) {
    CodewordBlock out(in.sf, in.n);
    for (int j = 0; j < in.sf; ++j)
        for (int i = 0; i < in.n; ++i) out.at(j, i) = in.at((i + j) % in.sf, i);
    return out;
}

CodewordBlock deinterleave(const CodewordBlock& in) {
    CodewordBlock out(in.sf, in.n);
    for (int j = 0; j < in.sf; ++j)
        for (int i = 0; i < in.n; ++i) out.at((i + j) % in.sf, i) = in.at(j, i);
    return out;
}

std::vector<Symbol> block_to_labels(const CodewordBlock& block) {
    std::vector<Symbol> labels(static_cast<std::size_t>(block.n));
    for (int i = 0; i < block.n; ++i) {
        Symbol v = 0;
        for (int j = 0; j < block.sf; ++j) v = (v << 1) | block.at(j, i); // row 0 lands on the MSB
        labels[static_cast<std::size_t>(i)] = v;
    }
    return labels;
}

CodewordBlock labels_to_block(const std::vector<Symbol>& labels, int sf) {
    CodewordBlock block(sf, static_cast<int>(labels.size()));
    for (int i = 0; i < block.n; ++i) {
        const Symbol v = labels[static_cast<std::size_t>(i)];
        if (v >> sf) throw std::invalid_argument("labels_to_block: label wider than sf bits");
        for (int j = 0; j < sf; ++j)
            block.at(j, i) = static_cast<std::uint8_t>((v >> (sf - 1 - j)) & 1u);
    }
    return block;
}

Symbol gray_demap(Symbol symbol, int sf) {
    if (symbol >> sf) throw std::invalid_argument("gray_demap: symbol wider than sf bits");
    return symbol ^ (symbol >> 1);
}

Symbol gray_map(Symbol label, int sf) {
    if (label >> sf) throw std::invalid_argument("gray_map: label wider than sf bits");
    Symbol s = label;
    s ^= s >> 1;
    s ^= s >> 2;
    s ^= s >> 4;
    s ^= s >> 8;
    return s & ((Symbol{1} << sf) - 1);
}

} // namespace lora
