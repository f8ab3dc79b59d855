#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "lora/analytic.hpp"

namespace loralab {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& s, const std::string& what) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: " + what + ": not a number: " + s);
    }
    if (pos != s.size()) throw std::invalid_argument("config: " + what + ": trailing text in " + s);
    return v;
}

long long parse_int(const std::string& s, const std::string& what) {
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: " + what + ": not an integer: " + s);
    }
    if (pos != s.size()) throw std::invalid_argument("config: " + what + ": trailing text in " + s);
    return v;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string fmt_g(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

} // namespace

std::vector<double> parse_grid(const std::string& spec) {
    const auto c1 = spec.find(':');
    if (c1 != std::string::npos) {
        const auto c2 = spec.find(':', c1 + 1);
        if (c2 == std::string::npos)
            throw std::invalid_argument("config: grid must be start:step:stop, got " + spec);
        const double start = parse_double(trim(spec.substr(0, c1)), "grid start");
        const double step = parse_double(trim(spec.substr(c1 + 1, c2 - c1 - 1)), "grid step");
        const double stop = parse_double(trim(spec.substr(c2 + 1)), "grid stop");
        if (!(step > 0.0)) throw std::invalid_argument("config: grid step must be positive");
        if (stop < start) throw std::invalid_argument("config: grid stop is below start");
        std::vector<double> out;
        const long count = std::lround((stop - start) / step);
        for (long i = 0; i <= count; ++i) {
            const double v = start + step * static_cast<double>(i);
            if (v <= stop + 1e-9) out.push_back(v);
        }
        return out;
    }
    std::vector<double> out;
    for (const std::string& item : split_list(spec)) out.push_back(parse_double(item, "grid value"));
    if (out.empty()) throw std::invalid_argument("config: empty grid: " + spec);
    return out;
}

std::vector<int> parse_int_list(const std::string& spec) {
    std::vector<int> out;
    for (const std::string& item : split_list(spec))
        out.push_back(static_cast<int>(parse_int(item, "integer list")));
    if (out.empty()) throw std::invalid_argument("config: empty integer list: " + spec);
    return out;
}

std::vector<double> parse_double_list(const std::string& spec) {
    std::vector<double> out;
    for (const std::string& item : split_list(spec)) out.push_back(parse_double(item, "list value"));
    if (out.empty()) throw std::invalid_argument("config: empty list: " + spec);
    return out;
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    bool saw_estimators = false;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty())
            throw std::invalid_argument("config: line " + std::to_string(lineno) + ": empty value for " + key);

        if (key == "mode") {
            if (value != "simulate" && value != "analytic")
                throw std::invalid_argument("config: mode must be simulate or analytic");
            cfg.mode = value;
        } else if (key == "name") {
            cfg.name = value;
        } else if (key == "sf") {
            cfg.sfs = parse_int_list(value);
            for (int sf : cfg.sfs) (void)lora::LoRaParams{sf}; // validates range
        } else if (key == "code") {
            cfg.code.scheme = lora::code_scheme_from_name(value);
        } else if (key == "payload_symbols") {
            cfg.payload_symbols = static_cast<int>(parse_int(value, key));
        } else if (key == "cfo") {
            cfg.cfos = parse_double_list(value);
            for (double l : cfg.cfos)
                lora::validate_channel(lora::ChannelConfig{0.0, l});
        } else if (key == "snr_db") {
            if (value != "auto") (void)parse_grid(value); // validate eagerly
            cfg.snr_spec = value;
        } else if (key == "estimators") {
            cfg.estimators = split_list(value);
            saw_estimators = true;
        } else if (key == "min_errors") {
            const long long v = parse_int(value, key);
            if (v < 1) throw std::invalid_argument("config: min_errors must be >= 1");
            cfg.stop.min_errors = static_cast<std::uint64_t>(v);
        } else if (key == "max_trials") {
            const long long v = parse_int(value, key);
            if (v < 1) throw std::invalid_argument("config: max_trials must be >= 1");
            cfg.stop.max_trials = static_cast<std::uint64_t>(v);
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(parse_int(value, key));
        } else {
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        ": unknown key: " + key);
        }
    }
    if (saw_estimators && cfg.estimators.empty())
        throw std::invalid_argument("config: estimators list is empty");
    lora::validate_frame(lora::FrameConfig{cfg.payload_symbols}, cfg.code);
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("config: cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> out;
    out.emplace_back("mode", cfg.mode);
    out.emplace_back("name", cfg.name);
    {
        std::string v;
        for (std::size_t i = 0; i < cfg.sfs.size(); ++i)
            v += (i ? "," : "") + std::to_string(cfg.sfs[i]);
        out.emplace_back("sf", v);
    }
    out.emplace_back("code", cfg.code.name());
    out.emplace_back("payload_symbols", std::to_string(cfg.payload_symbols));
    {
        std::string v;
        for (std::size_t i = 0; i < cfg.cfos.size(); ++i) v += (i ? "," : "") + fmt_g(cfg.cfos[i]);
        out.emplace_back("cfo", v);
    }
    out.emplace_back("snr_db", cfg.snr_spec);
    if (!cfg.estimators.empty()) {
        std::string v;
        for (std::size_t i = 0; i < cfg.estimators.size(); ++i)
            v += (i ? "," : "") + cfg.estimators[i];
        out.emplace_back("estimators", v);
    }
    out.emplace_back("min_errors", std::to_string(cfg.stop.min_errors));
    out.emplace_back("max_trials", std::to_string(cfg.stop.max_trials));
    out.emplace_back("seed", std::to_string(cfg.seed));
    return out;
}

std::vector<double> resolve_snr_grid(const RunConfig& cfg, int sf, double cfo) {
    if (cfg.snr_spec != "auto") return parse_grid(cfg.snr_spec);

    const lora::LoRaParams p{sf};
    const double step = 0.25;
    double hi_level = 0.3, lo_level = 1.5e-3;
    std::function<double(double)> rate;
    if (cfg.code.coded()) {
        const lora::FrameConfig frame{cfg.payload_symbols};
        if (cfo == 0.0)
            rate = [&, p, frame](double s) { return lora::analytic::fer_stagewise(s, p, cfg.code, frame); };
        else
            rate = [&, p, frame, cfo](double s) { return lora::analytic::fer_cfo(s, cfo, p, cfg.code, frame); };
    } else {
        lo_level = 1e-4;
        if (cfo == 0.0)
            rate = [p](double s) { return lora::analytic::ser_awgn(s, p); };
        else
            rate = [p, cfo](double s) { return 2.0 * lora::analytic::ber_cfo(s, cfo, p); };
    }
    const double lo_db = lora::analytic::crossing_snr_db(rate, hi_level, -40.0, 20.0, 1e-3);
    const double hi_db = lora::analytic::crossing_snr_db(rate, lo_level, -40.0, 20.0, 1e-3);
    const double start = std::floor((lo_db - step) / step) * step;
    const double stop = std::ceil((hi_db + step) / step) * step;
    std::vector<double> grid;
    for (double v = start; v <= stop + 1e-9; v += step) grid.push_back(v);
    return grid;
}

std::vector<std::string> default_estimators(const RunConfig& cfg, double cfo) {
    if (!cfg.estimators.empty()) return cfg.estimators;
    if (cfg.code.coded()) {
        if (cfo == 0.0) return {"fer_flat", "fer_stagewise"};
        return {"fer_cfo"};
    }
    if (cfo == 0.0) return {"ser", "ber"};
    return {"ber_cfo"};
}

void validate_estimators(const std::vector<std::string>& names, const RunConfig& cfg, double cfo) {
    for (const std::string& e : names) {
        const bool awgn_only = (e == "ser" || e == "ber" || e == "cwer" || e == "fer_flat" ||
                                e == "fer_stagewise");
        const bool offset_aware = (e == "ber_cfo" || e == "fer_cfo");
        if (!awgn_only && !offset_aware)
            throw std::invalid_argument("config: unknown estimator: " + e);
        if (awgn_only && cfo != 0.0)
            throw std::invalid_argument("config: estimator " + e +
                                        " has no frequency-offset form; use it with cfo = 0");
        const bool needs_code = (e == "cwer" || e == "fer_flat" || e == "fer_stagewise" || e == "fer_cfo");
        if (needs_code && !cfg.code.coded())
            throw std::invalid_argument("config: estimator " + e + " requires a coded scheme");
    }
}

const std::vector<std::pair<std::string, std::string>>& builtin_presets() {
    static const std::vector<std::pair<std::string, std::string>> presets = {
        {"awgn-fer",
         "# Coded frame error rate over AWGN, quick look at three spreading factors\n"
         "mode = simulate\n"
         "name = awgn-fer\n"
         "sf = 7,9,12\n"
         "code = hamming48\n"
         "payload_symbols = 32\n"
         "cfo = 0\n"
         "snr_db = auto\n"
         "min_errors = 100\n"
         "max_trials = 30000\n"
         "seed = 1\n"},
        {"awgn-ser",
         "# Uncoded symbol and bit error rates over AWGN\n"
         "mode = simulate\n"
         "name = awgn-ser\n"
         "sf = 7\n"
         "code = uncoded\n"
         "payload_symbols = 32\n"
         "cfo = 0\n"
         "snr_db = -14:0.5:-5\n"
         "min_errors = 200\n"
         "max_trials = 2000000\n"
         "seed = 1\n"},
        {"cfo-fer",
         "# Coded frame error rate under residual carrier frequency offsets\n"
         "mode = simulate\n"
         "name = cfo-fer\n"
         "sf = 7\n"
         "code = hamming48\n"
         "payload_symbols = 32\n"
         "cfo = 0,0.2,0.3,0.4\n"
         "snr_db = auto\n"
         "min_errors = 100\n"
         "max_trials = 50000\n"
         "seed = 1\n"},
        {"analytic-awgn",
         "# Closed-form AWGN curves: symbol, bit, and frame error rates\n"
         "mode = analytic\n"
         "name = analytic-awgn\n"
         "sf = 7,9,12\n"
         "code = hamming48\n"
         "payload_symbols = 32\n"
         "cfo = 0\n"
         "snr_db = auto\n"
         "estimators = ser,ber,cwer,fer_flat,fer_stagewise\n"},
        {"analytic-cfo",
         "# Frequency-offset frame error rate curves (semi-analytic integrals)\n"
         "mode = analytic\n"
         "name = analytic-cfo\n"
         "sf = 7\n"
         "code = hamming48\n"
         "payload_symbols = 32\n"
         "cfo = 0,0.2,0.3,0.4\n"
         "snr_db = auto\n"
         "estimators = fer_cfo\n"},
    };
    return presets;
}

std::string preset_text(const std::string& name) {
    for (const auto& [n, text] : builtin_presets())
        if (n == name) return text;
    throw std::invalid_argument("unknown preset: " + name +
                                " (run `loralab presets` for the list)");
}

} // namespace loralab
