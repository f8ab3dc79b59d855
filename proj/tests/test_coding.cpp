// Block code, interleaver, and Gray mapping. The decoder is checked
// exhaustively against a brute-force nearest-codeword oracle over the full
// received-word space of both code lengths.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <bit>
#include <random>
#include <vector>

#include "lora/coding.hpp"

using namespace lora;

namespace {

const CodeConfig k47{CodeScheme::hamming47};
const CodeConfig k48{CodeScheme::hamming48};

std::vector<std::uint16_t> codebook(const CodeConfig& c) {
    std::vector<std::uint16_t> book;
    for (std::uint8_t nib = 0; nib < 16; ++nib) book.push_back(hamming_encode(nib, c));
    return book;
}

} // namespace

TEST_CASE("encoder: hand-checked words and parity structure") {
    CHECK(hamming_encode(0x0, k47) == 0x00);
    CHECK(hamming_encode(0xF, k47) == 0x7F); // all data ones -> all parities one
    CHECK(hamming_encode(0x1, k47) == 0x51); // d0 -> p0 and p2
    CHECK(hamming_encode(0x0, k48) == 0x00);
    CHECK(hamming_encode(0xF, k48) == 0xFF);
    CHECK(hamming_encode(0x1, k48) == 0xD1); // odd weight in the length-7 part
    // systematic: low nibble is the data
    for (std::uint16_t nib = 0; nib < 16; ++nib) {
        CHECK((hamming_encode(std::uint8_t(nib), k47) & 0xF) == nib);
        CHECK((hamming_encode(std::uint8_t(nib), k48) & 0xF) == nib);
        // extended word is the short word plus an overall parity bit
        const std::uint16_t w7 = hamming_encode(std::uint8_t(nib), k47);
        const std::uint16_t w8 = hamming_encode(std::uint8_t(nib), k48);
        CHECK((w8 & 0x7F) == w7);
        CHECK((std::popcount(unsigned(w8)) & 1) == 0);
    }
    CHECK_THROWS_AS(hamming_encode(16, k47), std::invalid_argument);
    CHECK_THROWS_AS(hamming_encode(0, CodeConfig{CodeScheme::uncoded}), std::invalid_argument);
}

TEST_CASE("minimum distances: 3 for the short code, 4 extended") {
    for (const CodeConfig& c : {k47, k48}) {
        const auto book = codebook(c);
        int dmin = 99;
        for (std::size_t a = 0; a < book.size(); ++a)
            for (std::size_t b = a + 1; b < book.size(); ++b)
                dmin = std::min(dmin, hamming_distance(book[a], book[b]));
        CHECK(dmin == (c.scheme == CodeScheme::hamming47 ? 3 : 4));
    }
}

TEST_CASE("decoder agrees with the brute-force nearest-codeword oracle, exhaustively") {
    for (const CodeConfig& c : {k47, k48}) {
        const auto book = codebook(c);
        const int n = c.code_bits();
        for (std::uint32_t word = 0; word < (1u << n); ++word) {
            int best = 99, second = 99;
            std::uint8_t best_data = 0;
            for (std::uint8_t nib = 0; nib < 16; ++nib) {
                const int d = hamming_distance(std::uint16_t(word), book[nib]);
                if (d < best) {
                    second = best;
                    best = d;
                    best_data = nib;
                } else if (d < second) {
                    second = d;
                }
            }
            const DecodeResult res = hamming_decode(std::uint16_t(word), c);
            if (best == 0) {
                CHECK(res.status == DecodeStatus::clean);
                CHECK(res.data == best_data);
            } else if (best == 1) {
                CHECK(res.status == DecodeStatus::corrected);
                CHECK(res.data == best_data);
            } else {
                // distance >= 2 from every codeword: only reachable for the
                // extended code, and it must refuse to decode
                CHECK(c.scheme == CodeScheme::hamming48);
                CHECK(best == 2);
                CHECK(second == 2); // never a unique nearest codeword out there
                CHECK(res.status == DecodeStatus::failure);
            }
        }
    }
}

TEST_CASE("error patterns: weight-1 corrected, weight-2 flagged or miscorrected") {
    for (const CodeConfig& c : {k47, k48}) {
        const int n = c.code_bits();
        for (std::uint8_t nib = 0; nib < 16; ++nib) {
            const std::uint16_t w = hamming_encode(nib, c);
            CHECK(hamming_decode(w, c).status == DecodeStatus::clean);
            for (int i = 0; i < n; ++i) {
                const DecodeResult r1 = hamming_decode(std::uint16_t(w ^ (1u << i)), c);
                CHECK(r1.status == DecodeStatus::corrected);
                CHECK(r1.data == nib);
                for (int j = i + 1; j < n; ++j) {
                    const DecodeResult r2 =
                        hamming_decode(std::uint16_t(w ^ (1u << i) ^ (1u << j)), c);
                    if (c.scheme == CodeScheme::hamming48) {
                        CHECK(r2.status == DecodeStatus::failure);
                    } else {
                        // distance-3 code: double errors always land on the
                        // wrong codeword
                        CHECK(r2.status == DecodeStatus::corrected);
                        CHECK(r2.data != nib);
                    }
                }
            }
        }
    }
}

TEST_CASE("interleaver: diagonal placement and exact inversion") {
    std::mt19937_64 rng(11);
    for (int sf : {7, 9, 12}) {
        for (int n : {7, 8}) {
            CodewordBlock in(sf, n);
            for (auto& b : in.bits) b = std::uint8_t(rng() & 1);
            const CodewordBlock out = interleave(in);
            for (int j = 0; j < sf; ++j)
                for (int i = 0; i < n; ++i) CHECK(out.at(j, i) == in.at((i + j) % sf, i));
            const CodewordBlock back = deinterleave(out);
            CHECK(back.bits == in.bits);
            // codeword r contributes exactly one bit to every symbol: its
            // bit i sits in column i at row (r - i) mod sf
            for (int r = 0; r < sf; ++r)
                for (int i = 0; i < n; ++i)
                    CHECK(out.at(((r - i) % sf + sf) % sf, i) == in.at(r, i));
        }
    }
}

TEST_CASE("labels: column packing with row zero as the top bit") {
    CodewordBlock blk(7, 8);
    blk.at(0, 3) = 1; // row 0 -> MSB of label 3
    blk.at(6, 5) = 1; // row sf-1 -> LSB of label 5
    const std::vector<Symbol> labels = block_to_labels(blk);
    CHECK(labels[3] == Symbol{1u << 6});
    CHECK(labels[5] == Symbol{1});
    CHECK(labels[0] == Symbol{0});
    const CodewordBlock back = labels_to_block(labels, 7);
    CHECK(back.bits == blk.bits);
    CHECK_THROWS_AS(labels_to_block({Symbol{128}}, 7), std::invalid_argument);
}

TEST_CASE("Gray labels: bijective, one bit between neighbors, closed form") {
    for (int sf : {7, 8, 9, 10, 11, 12}) {
        const Symbol n = Symbol(1) << sf;
        std::vector<bool> seen(n, false);
        for (Symbol s = 0; s < n; ++s) {
            const Symbol g = gray_demap(s, sf);
            CHECK(g == (s ^ (s >> 1)));
            CHECK(gray_map(g, sf) == s);
            CHECK_FALSE(seen[g]);
            seen[g] = true;
            const Symbol next = Symbol((s + 1) % n);
            CHECK(std::popcount(gray_demap(s, sf) ^ gray_demap(next, sf)) == 1);
        }
    }
    CHECK_THROWS_AS(gray_demap(Symbol{128}, 7), std::invalid_argument);
    CHECK_THROWS_AS(gray_map(Symbol{4096}, 7), std::invalid_argument);
}

TEST_CASE("mean label distance over all symbol pairs matches sf*N/(2(N-1))") {
    const int sf = 7;
    const Symbol n = 128;
    double total = 0.0;
    for (Symbol a = 0; a < n; ++a)
        for (Symbol b = 0; b < n; ++b)
            if (a != b) total += std::popcount(gray_demap(a, sf) ^ gray_demap(b, sf));
    const double mean = total / (double(n) * (n - 1));
    CHECK(mean == doctest::Approx(double(sf) * n / (2.0 * (n - 1))).epsilon(1e-12));
}
