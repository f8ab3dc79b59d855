#include "lora/montecarlo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#ifdef LORA_HAVE_OPENMP
#include <omp.h>
#endif

namespace lora {

namespace {

double ci95(std::uint64_t errors, std::uint64_t trials) {
    if (trials == 0) return 0.0;
    const double p = double(errors) / double(trials);
    return 1.96 * std::sqrt(p * (1.0 - p) / double(trials));
}

} // namespace

double PointStats::fer_ci95() const { return ci95(frame_errors, frames); }
double PointStats::ser_ci95() const { return ci95(symbol_errors, symbols); }

void PointStats::merge(const PointStats& o) {
    frames += o.frames;
    frame_errors += o.frame_errors;
    codewords += o.codewords;
    codeword_errors += o.codeword_errors;
    symbols += o.symbols;
    symbol_errors += o.symbol_errors;
    label_bits += o.label_bits;
    label_bit_errors += o.label_bit_errors;
}

FrameSimulator::FrameSimulator(const LoRaParams& p, const CodeConfig& code,
                               const FrameConfig& frame)
    : p_(p), code_(code), frame_(frame), mod_(p), dm_(p) {
    validate_frame(frame_, code_);
    const int npl = frame_.payload_symbols;
    tx_.resize(npl);
    rx_.resize(npl);
    txlab_.resize(npl);
    rxlab_.resize(npl);
    iq_.resize(static_cast<std::size_t>(npl) * p_.chips());
    if (code_.coded()) {
        const int n = code_.code_bits();
        nblocks_ = npl / n;
        data_.resize(static_cast<std::size_t>(nblocks_) * p_.sf);
        blk_ = CodewordBlock(p_.sf, n);
        ilv_ = CodewordBlock(p_.sf, n);
    }
}

std::uint32_t FrameSimulator::draw_bits(Channel& ch, int k) {
    if (bitcount_ < k) {
        bitpool_ = ch.random_bits();
        bitcount_ = 64;
    }
    const std::uint32_t v = static_cast<std::uint32_t>(bitpool_ & ((1ull << k) - 1));
    bitpool_ >>= k;
    bitcount_ -= k;
    return v;
}

void FrameSimulator::run_frame(Channel& ch, PointStats& acc) {
    if (code_.coded())
        run_frame_coded(ch, acc);
    else
        run_frame_uncoded(ch, acc);
}

void FrameSimulator::run_frame_coded(Channel& ch, PointStats& acc) {
    const int n = code_.code_bits();
    const int sf = p_.sf;
    const int n_chips = p_.chips();

    // Encode and interleave block by block, collecting the payload symbols.
    for (int b = 0; b < nblocks_; ++b) {
        for (int r = 0; r < sf; ++r) {
            const std::uint8_t nib = static_cast<std::uint8_t>(draw_bits(ch, 4));
            data_[static_cast<std::size_t>(b) * sf + r] = nib;
            const std::uint16_t w = hamming_encode(nib, code_);
            for (int i = 0; i < n; ++i) blk_.at(r, i) = static_cast<std::uint8_t>((w >> i) & 1u);
        }
        ilv_ = interleave(blk_);
        const std::vector<Symbol> labels = block_to_labels(ilv_);
        for (int i = 0; i < n; ++i) {
            const std::size_t idx = static_cast<std::size_t>(b) * n + i;
            txlab_[idx] = labels[static_cast<std::size_t>(i)];
            tx_[idx] = gray_map(labels[static_cast<std::size_t>(i)], sf);
        }
    }
    for (std::size_t i = 0; i < tx_.size(); ++i)
        mod_.write_symbol(tx_[i], iq_.data() + i * static_cast<std::size_t>(n_chips));

    ch.apply_cfo(iq_, p_);
    ch.add_awgn(iq_);

    for (std::size_t i = 0; i < rx_.size(); ++i) {
        rx_[i] = dm_.demodulate_symbol(iq_.data() + i * static_cast<std::size_t>(n_chips));
        rxlab_[i] = gray_demap(rx_[i], sf);
        if (rx_[i] != tx_[i]) ++acc.symbol_errors;
        acc.label_bit_errors += std::popcount(txlab_[i] ^ rxlab_[i]);
    }
    acc.symbols += tx_.size();
    acc.label_bits += tx_.size() * static_cast<std::size_t>(sf);

    bool frame_error = false;
    for (int b = 0; b < nblocks_; ++b) {
        const std::vector<Symbol> labels(rxlab_.begin() + static_cast<std::ptrdiff_t>(b) * n,
                                         rxlab_.begin() + static_cast<std::ptrdiff_t>(b + 1) * n);
        const CodewordBlock deint = deinterleave(labels_to_block(labels, sf));
        for (int r = 0; r < sf; ++r) {
            std::uint16_t w = 0;
            for (int i = 0; i < n; ++i)
                w = static_cast<std::uint16_t>(w | (static_cast<std::uint16_t>(deint.at(r, i)) << i));
            const DecodeResult res = hamming_decode(w, code_);
            const bool bad = res.status == DecodeStatus::failure ||
                             res.data != data_[static_cast<std::size_t>(b) * sf + r];
            if (bad) {
                ++acc.codeword_errors;
                frame_error = true;
            }
        }
    }
    acc.codewords += static_cast<std::uint64_t>(nblocks_) * sf;
    ++acc.frames;
    if (frame_error) ++acc.frame_errors;
}

void FrameSimulator::run_frame_uncoded(Channel& ch, PointStats& acc) {
    const int sf = p_.sf;
    const int n_chips = p_.chips();
    for (std::size_t i = 0; i < tx_.size(); ++i) {
        tx_[i] = draw_bits(ch, sf);
        txlab_[i] = gray_demap(tx_[i], sf);
        mod_.write_symbol(tx_[i], iq_.data() + i * static_cast<std::size_t>(n_chips));
    }
    ch.apply_cfo(iq_, p_);
    ch.add_awgn(iq_);
    bool frame_error = false;
    for (std::size_t i = 0; i < rx_.size(); ++i) {
        rx_[i] = dm_.demodulate_symbol(iq_.data() + i * static_cast<std::size_t>(n_chips));
        rxlab_[i] = gray_demap(rx_[i], sf);
        if (rx_[i] != tx_[i]) {
            ++acc.symbol_errors;
            frame_error = true;
        }
        acc.label_bit_errors += std::popcount(txlab_[i] ^ rxlab_[i]);
    }
    acc.symbols += tx_.size();
    acc.label_bits += tx_.size() * static_cast<std::size_t>(sf);
    ++acc.frames;
    if (frame_error) ++acc.frame_errors;
}

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* e = std::getenv("LORALAB_WORKERS")) {
        const int v = std::atoi(e);
        if (v > 0) return v;
    }
#ifdef LORA_HAVE_OPENMP
    return std::max(1, omp_get_max_threads());
#else
    return 1;
#endif
}

namespace {

struct StopView {
    bool coded;
    const StoppingRule& rule;
    bool done(const PointStats& s) const {
        const std::uint64_t trials = coded ? s.frames : s.symbols;
        const std::uint64_t errors = coded ? s.frame_errors : s.symbol_errors;
        return errors >= rule.min_errors || trials >= rule.max_trials;
    }
};

} // namespace

PointStats simulate_point(const SweepConfig& cfg, std::size_t point_index, int workers) {
    if (point_index >= cfg.snr_db.size())
        throw std::invalid_argument("simulate_point: point index out of range");
    const double snr = cfg.snr_db[point_index];
    const ChannelConfig ch_cfg{snr, cfg.cfo_lambda};
    const StopView stop{cfg.code.coded(), cfg.stop};
    const int w = std::max(1, workers);

    if (w == 1) {
        // Serial reference: exact stopping, one RNG stream.
        Channel ch = Channel::for_point(ch_cfg, cfg.seed, point_index, 0);
        FrameSimulator sim(cfg.params, cfg.code, cfg.frame);
        PointStats acc;
        acc.snr_db = snr;
        while (!stop.done(acc)) sim.run_frame(ch, acc);
        return acc;
    }

    struct WorkerState {
        Channel ch;
        FrameSimulator sim;
        PointStats local;
    };
    std::vector<WorkerState> ws;
    ws.reserve(static_cast<std::size_t>(w));
    for (int k = 0; k < w; ++k)
        ws.push_back({Channel::for_point(ch_cfg, cfg.seed, point_index, static_cast<std::uint64_t>(k)),
                      FrameSimulator(cfg.params, cfg.code, cfg.frame),
                      PointStats{}});

    PointStats total;
    total.snr_db = snr;
    std::uint64_t batch = 1; // frames per worker per round, ramped up geometrically
    while (!stop.done(total)) {
#ifdef LORA_HAVE_OPENMP
#pragma omp parallel for num_threads(w) schedule(static)
#endif
        for (int k = 0; k < w; ++k) {
            WorkerState& st = ws[static_cast<std::size_t>(k)];
            for (std::uint64_t b = 0; b < batch; ++b) st.sim.run_frame(st.ch, st.local);
        }
        total = PointStats{};
        total.snr_db = snr;
        for (const WorkerState& st : ws) total.merge(st.local);
        batch = std::min<std::uint64_t>(batch * 2, 64);
    }
    return total;
}

std::vector<PointStats> simulate_sweep(const SweepConfig& cfg, int workers) {
    const int w = resolve_workers(workers);
    std::vector<PointStats> out;
    out.reserve(cfg.snr_db.size());
    for (std::size_t i = 0; i < cfg.snr_db.size(); ++i) out.push_back(simulate_point(cfg, i, w));
    return out;
}

} // namespace lora
