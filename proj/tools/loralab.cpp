// loralab: error-rate laboratory for chirp spread spectrum links.
//
//   loralab analytic  --preset analytic-awgn --out results/
//   loralab simulate  --config my-run.cfg --workers 8
//   loralab compare   --baseline mc.csv --candidate model.csv --level 1e-2 --max-gap-db 0.5
//   loralab presets
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "config.hpp"
#include "lora/analytic.hpp"
#include "lora/csv.hpp"
#include "lora/montecarlo.hpp"
#include "lora/numerics.hpp"

namespace {

using nlohmann::json;

constexpr const char* kVersion = "1.0.0";

std::string utc_now() {
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string fmt_g(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string cell_filename(const loralab::RunConfig& cfg, int sf, double cfo) {
    std::string name = cfg.name + "-sf" + std::to_string(sf);
    if (cfg.cfos.size() > 1 || cfo != 0.0) name += "-cfo" + fmt_g(cfo);
    return name + ".csv";
}

double evaluate_estimator(const std::string& est, double snr, int sf, double cfo,
                          const loralab::RunConfig& cfg) {
    const lora::LoRaParams p{sf};
    const lora::FrameConfig frame{cfg.payload_symbols};
    using namespace lora::analytic;
    if (est == "ser") return ser_awgn(snr, p);
    if (est == "ber") return ber_awgn(snr, p);
    if (est == "cwer") return codeword_error_rate(ber_awgn(snr, p), cfg.code.code_bits());
    if (est == "fer_flat") return fer_flat(snr, p, cfg.code, frame);
    if (est == "fer_stagewise") return fer_stagewise(snr, p, cfg.code, frame);
    if (est == "ber_cfo") return ber_cfo(snr, cfo, p);
    if (est == "fer_cfo") return fer_cfo(snr, cfo, p, cfg.code, frame);
    throw std::invalid_argument("unknown estimator: " + est);
}

struct OutputRecord {
    std::string file;
    std::size_t rows = 0;
};

void write_manifest(const std::filesystem::path& out_dir, const loralab::RunConfig& cfg,
                    const std::string& command, std::uint64_t seed, int workers,
                    const std::vector<OutputRecord>& outputs) {
    json j;
    j["schema_version"] = 1;
    j["tool"] = "loralab";
    j["tool_version"] = kVersion;
    j["created_utc"] = utc_now();
    j["command"] = command;
    j["seed"] = seed;
    j["workers"] = workers;
    json cfg_json = json::object();
    for (const auto& [k, v] : loralab::config_entries(cfg)) cfg_json[k] = v;
    j["config"] = cfg_json;
    json outs = json::array();
    for (const OutputRecord& o : outputs) outs.push_back({{"file", o.file}, {"rows", o.rows}});
    j["outputs"] = outs;

    const std::filesystem::path path = out_dir / (cfg.name + "-manifest.json");
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << j.dump(2) << '\n';
    std::cout << "wrote " << path.string() << '\n';
}

loralab::RunConfig config_from_manifest(const std::string& path, std::string& command,
                                        std::uint64_t& seed) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open manifest " + path);
    json j;
    f >> j;
    if (!j.contains("config") || !j["config"].is_object())
        throw std::runtime_error("manifest " + path + " has no config object");
    std::string text;
    for (const auto& [k, v] : j["config"].items())
        text += k + " = " + v.get<std::string>() + "\n";
    loralab::RunConfig cfg = loralab::parse_config_text(text);
    if (j.contains("command")) command = j["command"].get<std::string>();
    if (j.contains("seed")) seed = j["seed"].get<std::uint64_t>();
    return cfg;
}

int run_analytic(const loralab::RunConfig& cfg, const std::filesystem::path& out_dir) {
    std::vector<OutputRecord> outputs;
    for (int sf : cfg.sfs) {
        for (double cfo : cfg.cfos) {
            const std::vector<std::string> ests = loralab::default_estimators(cfg, cfo);
            loralab::validate_estimators(ests, cfg, cfo);
            const std::vector<double> grid = loralab::resolve_snr_grid(cfg, sf, cfo);

            const std::string fname = cell_filename(cfg, sf, cfo);
            const std::filesystem::path path = out_dir / fname;
            std::ofstream f(path);
            if (!f) throw std::runtime_error("cannot write " + path.string());
            f << "snr_db";
            for (const std::string& e : ests) f << ',' << e;
            f << '\n';
            std::size_t rows = 0;
            for (double snr : grid) {
                std::vector<double> row{snr};
                for (const std::string& e : ests)
                    row.push_back(evaluate_estimator(e, snr, sf, cfo, cfg));
                f << lora::csv::format_row(row) << '\n';
                f.flush(); // rows land as they are computed
                ++rows;
            }
            outputs.push_back({fname, rows});
            std::cout << "wrote " << path.string() << " (" << rows << " points)\n";
        }
    }
    write_manifest(out_dir, cfg, "analytic", cfg.seed, 0, outputs);
    return 0;
}

int run_simulate(const loralab::RunConfig& cfg, const std::filesystem::path& out_dir, int workers) {
    const int w = lora::resolve_workers(workers);
    std::vector<OutputRecord> outputs;
    for (int sf : cfg.sfs) {
        for (double cfo : cfg.cfos) {
            lora::SweepConfig sweep;
            sweep.params = lora::LoRaParams{sf};
            sweep.code = cfg.code;
            sweep.frame = lora::FrameConfig{cfg.payload_symbols};
            sweep.cfo_lambda = cfo;
            sweep.snr_db = loralab::resolve_snr_grid(cfg, sf, cfo);
            sweep.stop = cfg.stop;
            sweep.seed = cfg.seed;

            const std::string fname = cell_filename(cfg, sf, cfo);
            const std::filesystem::path path = out_dir / fname;
            std::ofstream f(path);
            if (!f) throw std::runtime_error("cannot write " + path.string());
            const bool coded = cfg.code.coded();
            f << (coded ? "snr_db,frames,frame_errors,fer,ci_low,ci_high"
                        : "snr_db,symbols,symbol_errors,ser,ber,ci_low,ci_high")
              << '\n';
            std::size_t rows = 0;
            for (std::size_t i = 0; i < sweep.snr_db.size(); ++i) {
                const lora::PointStats st = lora::simulate_point(sweep, i, w);
                std::vector<double> row;
                if (coded) {
                    const double hw = st.fer_ci95();
                    row = {st.snr_db, double(st.frames), double(st.frame_errors), st.fer(),
                           std::max(0.0, st.fer() - hw), std::min(1.0, st.fer() + hw)};
                } else {
                    const double hw = st.ser_ci95();
                    row = {st.snr_db, double(st.symbols), double(st.symbol_errors), st.ser(),
                           st.ber(), std::max(0.0, st.ser() - hw), std::min(1.0, st.ser() + hw)};
                }
                f << lora::csv::format_row(row) << '\n';
                f.flush(); // point-by-point progress survives interruption
                ++rows;
                std::cout << fname << ": snr " << st.snr_db << " dB done (" << (i + 1) << '/'
                          << sweep.snr_db.size() << ")\n";
            }
            outputs.push_back({fname, rows});
            std::cout << "wrote " << path.string() << " (" << rows << " points)\n";
        }
    }
    write_manifest(out_dir, cfg, "simulate", cfg.seed, w, outputs);
    return 0;
}

std::vector<lora::csv::CurvePoint> load_curve(const std::string& path, const std::string& col) {
    const lora::csv::Table t = lora::csv::read(path);
    if (t.column_index("snr_db") < 0)
        throw std::runtime_error(path + " has no snr_db column");
    if (t.column_index(col) < 0)
        throw std::runtime_error(path + " has no " + col + " column (available: " +
                                 [&] {
                                     std::string s;
                                     for (const auto& c : t.columns) s += c + " ";
                                     return s;
                                 }());
    const std::vector<double> x = t.column("snr_db");
    const std::vector<double> y = t.column(col);
    std::vector<lora::csv::CurvePoint> out;
    for (std::size_t i = 0; i < x.size(); ++i) out.push_back({x[i], y[i]});
    return out;
}

int run_compare(const std::string& baseline, const std::string& candidate,
                const std::string& base_col, const std::string& cand_col, double level,
                double max_gap_db, double max_vertical) {
    const auto a = load_curve(baseline, base_col);
    const auto b = load_curve(candidate, cand_col);

    bool ok = true;
    if (level > 0.0) {
        const double xa = lora::csv::crossing_snr_db(a, level);
        const double xb = lora::csv::crossing_snr_db(b, level);
        const double gap = std::abs(xa - xb);
        std::cout << "crossing at rate " << level << ": baseline " << xa << " dB, candidate " << xb
                  << " dB, gap " << gap << " dB\n";
        if (max_gap_db > 0.0 && gap > max_gap_db) {
            std::cout << "FAIL: crossing gap " << gap << " dB exceeds limit " << max_gap_db
                      << " dB\n";
            ok = false;
        }
    }
    const double vgap = lora::csv::max_log10_gap(a, b);
    std::cout << "largest vertical offset: " << vgap << " decades\n";
    if (max_vertical > 0.0 && vgap > max_vertical) {
        std::cout << "FAIL: vertical offset " << vgap << " decades exceeds limit " << max_vertical
                  << "\n";
        ok = false;
    }
    if (ok) std::cout << "curves agree within the requested limits\n";
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chirp-spread-spectrum error-rate laboratory"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // --- analytic / simulate (shared options) ---
    std::string config_path, preset_name, manifest_path, out_dir = ".";
    long long seed_override = -1;
    int workers = 0;

    auto add_run_options = [&](CLI::App* sub) {
        auto* c = sub->add_option("--config", config_path, "configuration file (key = value lines)");
        auto* p = sub->add_option("--preset", preset_name, "built-in preset name");
        auto* m = sub->add_option("--from-manifest", manifest_path,
                                  "re-run the configuration recorded in a manifest");
        c->excludes(p)->excludes(m);
        p->excludes(m);
        sub->add_option("--out", out_dir, "output directory (default: current)");
        sub->add_option("--seed", seed_override, "override the configured seed");
    };

    CLI::App* analytic = app.add_subcommand("analytic", "evaluate closed-form error-rate curves");
    add_run_options(analytic);
    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo error-rate sweeps");
    add_run_options(simulate);
    simulate->add_option("--workers", workers,
                         "parallel workers (default: LORALAB_WORKERS or all cores)");

    // --- compare ---
    std::string baseline, candidate, base_col = "fer", cand_col;
    double level = 1e-2, max_gap_db = 0.0, max_vertical = 0.0;
    CLI::App* compare = app.add_subcommand("compare", "compare two error-rate curves");
    compare->add_option("--baseline", baseline, "baseline CSV")->required();
    compare->add_option("--candidate", candidate, "candidate CSV")->required();
    compare->add_option("--rate-column", base_col, "rate column in the baseline (default fer)");
    compare->add_option("--candidate-column", cand_col,
                        "rate column in the candidate (default: same as --rate-column)");
    compare->add_option("--level", level, "rate level for the crossing comparison (0 disables)");
    compare->add_option("--max-gap-db", max_gap_db, "fail if crossings differ by more (dB)");
    compare->add_option("--max-vertical", max_vertical,
                        "fail if curves are further apart (decades)");

    CLI::App* presets = app.add_subcommand("presets", "list built-in presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (presets->parsed()) {
            for (const auto& [name, text] : loralab::builtin_presets()) {
                std::string first_line = text.substr(0, text.find('\n'));
                if (!first_line.empty() && first_line[0] == '#')
                    first_line = first_line.substr(1);
                std::cout << name << " —" << first_line << '\n';
            }
            return 0;
        }

        if (compare->parsed())
            return run_compare(baseline, candidate, base_col,
                               cand_col.empty() ? base_col : cand_col, level, max_gap_db,
                               max_vertical);

        const bool is_analytic = analytic->parsed();
        std::string command = is_analytic ? "analytic" : "simulate";

        loralab::RunConfig cfg;
        if (!manifest_path.empty()) {
            std::uint64_t seed = cfg.seed;
            cfg = config_from_manifest(manifest_path, command, seed);
            cfg.seed = seed;
            if (command != (is_analytic ? "analytic" : "simulate"))
                std::cout << "note: manifest records a " << command << " run; honoring the "
                          << (is_analytic ? "analytic" : "simulate") << " subcommand\n";
            command = is_analytic ? "analytic" : "simulate";
        } else if (!preset_name.empty()) {
            cfg = loralab::parse_config_text(loralab::preset_text(preset_name));
        } else if (!config_path.empty()) {
            cfg = loralab::load_config_file(config_path);
        } else {
            std::cerr << "error: one of --config, --preset, --from-manifest is required\n";
            return 2;
        }
        if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);

        std::filesystem::path out{out_dir};
        std::filesystem::create_directories(out);

        if (is_analytic) return run_analytic(cfg, out);
        return run_simulate(cfg, out, workers);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
