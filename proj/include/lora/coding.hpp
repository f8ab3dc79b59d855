#pragma once

#include <cstdint>
#include <vector>

#include "lora/params.hpp"

namespace lora {

// --- Block code -------------------------------------------------------------
//
// Systematic Hamming code on 4-bit nibbles. Bit i of a codeword word is the
// value at position i, LSB first:
//   positions 0..3  data bits d0..d3 (d_i = bit i of the nibble)
//   positions 4..6  parity bits p0 = d0^d1^d2, p1 = d1^d2^d3, p2 = d0^d1^d3
//   position  7     overall even parity over positions 0..6 (length-8 only)
//
// The length-7 code corrects any single bit error. The length-8 extension
// additionally recognizes double errors as uncorrectable and reports them
// as decode failures instead of miscorrecting.

enum class DecodeStatus {
    clean,     // syndrome zero: accepted as transmitted
    corrected, // single-bit error corrected
    failure    // detected but uncorrectable (length-8 double errors)
};

struct DecodeResult {
    std::uint8_t data;   // recovered nibble (received data bits when status == failure)
    DecodeStatus status;
};

std::uint16_t hamming_encode(std::uint8_t nibble, const CodeConfig& code);
DecodeResult hamming_decode(std::uint16_t word, const CodeConfig& code);
int hamming_distance(std::uint16_t a, std::uint16_t b);

// --- Interleaver ------------------------------------------------------------
//
// A block is an sf x n bit matrix: one n-bit codeword per row, n codewords'
// worth of column material -> n chirp symbols of sf bits each. The diagonal
// interleaver rotates column i downward by i rows:
//   out[j][i] = in[(i + j) mod sf][i]
// so the bits of one codeword spread across all n symbols and no two bits of
// a codeword share a symbol (for n >= sf).

struct CodewordBlock {
    int sf = 0;
    int n = 0;
    std::vector<std::uint8_t> bits; // row-major sf x n, values 0/1

    CodewordBlock() = default;
    CodewordBlock(int sf_, int n_) : sf(sf_), n(n_), bits(static_cast<std::size_t>(sf_) * n_, 0) {}
    std::uint8_t& at(int row, int col) { return bits[static_cast<std::size_t>(row) * n + col]; }
    std::uint8_t at(int row, int col) const { return bits[static_cast<std::size_t>(row) * n + col]; }
};

CodewordBlock interleave(const CodewordBlock& in);
CodewordBlock deinterleave(const CodewordBlock& in);

// Column i of a block read as an sf-bit label with row 0 the MSB.
std::vector<Symbol> block_to_labels(const CodewordBlock& block);
CodewordBlock labels_to_block(const std::vector<Symbol>& labels, int sf);

// --- Gray mapping -----------------------------------------------------------
//
// Binary-reflected Gray labels: adjacent symbol indices (the typical
// near-miss of the FFT demodulator) receive labels differing in one bit.
//   gray_demap(s) = s ^ (s >> 1)   symbol index -> bit label
//   gray_map(g)   = its inverse    bit label    -> symbol index

Symbol gray_map(Symbol label, int sf);
Symbol gray_demap(Symbol symbol, int sf);

} // namespace lora
