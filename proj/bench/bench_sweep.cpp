// Benchmark: serial reference simulation loop vs. the OpenMP-parallel point
// runner, on one fixed-size workload. Prints frames per second and speedup.

#include <chrono>
#include <cstdio>

#include <CLI11.hpp>

#include "lora/montecarlo.hpp"

namespace {

double run_once(const lora::SweepConfig& cfg, int workers, lora::PointStats& out) {
    const auto t0 = std::chrono::steady_clock::now();
    out = lora::simulate_point(cfg, 0, workers);
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Throughput benchmark: serial reference vs parallel simulation"};
    int sf = 9;
    double snr = -14.0;
    long long frames = 4000;
    int workers = 0;
    app.add_option("--sf", sf, "spreading factor (default 9)");
    app.add_option("--snr", snr, "operating point in dB (default -14)");
    app.add_option("--frames", frames, "frames to simulate (default 4000)");
    app.add_option("--workers", workers, "parallel workers (default: auto)");
    CLI11_PARSE(app, argc, argv);

    lora::SweepConfig cfg;
    cfg.params = lora::LoRaParams{sf};
    cfg.code = lora::CodeConfig{lora::CodeScheme::hamming48};
    cfg.frame = lora::FrameConfig{32};
    cfg.snr_db = {snr};
    cfg.stop.min_errors = ~0ull; // run to the frame budget
    cfg.stop.max_trials = static_cast<std::uint64_t>(frames);
    cfg.seed = 1;

    const int w = lora::resolve_workers(workers);
    std::printf("sf=%d snr=%g dB frames=%lld workers=%d\n", sf, snr, frames, w);

    lora::PointStats serial_stats, parallel_stats;
    const double t_serial = run_once(cfg, 1, serial_stats);
    std::printf("serial:   %8.2f s  %10.1f frames/s  (fer %.4g)\n", t_serial,
                serial_stats.frames / t_serial, serial_stats.fer());

    if (w > 1) {
        const double t_par = run_once(cfg, w, parallel_stats);
        std::printf("parallel: %8.2f s  %10.1f frames/s  (fer %.4g)\n", t_par,
                    parallel_stats.frames / t_par, parallel_stats.fer());
        std::printf("speedup:  %.2fx with %d workers\n", t_serial / t_par, w);
    } else {
        std::printf("parallel: skipped (single worker resolved)\n");
    }
    return 0;
}
