#include "lora/channel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lora {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

void validate_channel(const ChannelConfig& cfg) {
    if (std::isnan(cfg.snr_db)) throw std::invalid_argument("channel: snr_db is NaN");
    if (!(cfg.cfo_lambda >= -0.5 && cfg.cfo_lambda <= 0.5))
        throw std::invalid_argument("channel: cfo_lambda must lie in [-0.5, 0.5]");
}

Channel::Channel(ChannelConfig cfg, std::uint64_t seed) : cfg_(cfg), rng_(seed) {
    validate_channel(cfg_);
    n0_ = std::isinf(cfg_.snr_db) && cfg_.snr_db > 0
              ? 0.0
              : std::pow(10.0, -cfg_.snr_db / 10.0);
}

Channel Channel::for_point(ChannelConfig cfg, std::uint64_t master_seed,
                           std::uint64_t point_index, std::uint64_t worker_index) {
    std::uint64_t s = splitmix64(master_seed ^ 0x243f6a8885a308d3ull);
    s = splitmix64(s ^ point_index);
    s = splitmix64(s ^ (worker_index * 0x9e3779b97f4a7c15ull + 1));
    return Channel(cfg, s);
}

double Channel::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // Uniforms built directly from the top 53 bits: u1 in (0, 1], u2 in [0, 1).
    const double u1 =
        (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

void Channel::add_awgn(std::span<cd> iq) {
    if (n0_ == 0.0) return;
    const double sigma = std::sqrt(0.5 * n0_); // per real component
    for (cd& v : iq) v += cd(sigma * gaussian(), sigma * gaussian());
}

void Channel::apply_cfo(std::span<cd> iq, const LoRaParams& p) const {
    const double lambda = cfg_.cfo_lambda;
    if (lambda == 0.0) return;
    const double n_chips = static_cast<double>(p.chips());
    for (std::size_t n = 0; n < iq.size(); ++n) {
        // Phase in turns, reduced before the trig call to preserve accuracy
        // over long frames.
        const double turns = std::fmod(static_cast<double>(n) * lambda / n_chips, 1.0);
        const double a = 2.0 * M_PI * turns;
        iq[n] *= cd(std::cos(a), std::sin(a));
    }
}

} // namespace lora
