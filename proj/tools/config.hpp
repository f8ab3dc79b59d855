#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lora/montecarlo.hpp"
#include "lora/params.hpp"

// Run configuration for the loralab command-line tool. Configurations are
// flat key = value text (one pair per line, '#' starts a comment); the same
// schema is embedded in built-in presets and echoed into run manifests.

namespace loralab {

struct RunConfig {
    std::string mode = "simulate"; // "simulate" or "analytic"
    std::string name = "run";      // output file prefix
    std::vector<int> sfs{7};
    lora::CodeConfig code{};
    int payload_symbols = 32;
    std::vector<double> cfos{0.0};
    std::string snr_spec = "auto"; // "auto", "start:step:stop", or comma list
    std::vector<std::string> estimators; // analytic mode; empty = mode default
    lora::StoppingRule stop{};
    std::uint64_t seed = 1;
};

// Parse configuration text. Unknown keys, malformed values, and semantic
// violations (bad sf, bad scheme, empty grids, ...) throw
// std::invalid_argument with a line reference.
RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);

// Canonical key = value echo of a resolved configuration (stable key order).
std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& cfg);

// The SNR grid for one (sf, cfo) cell. "auto" derives a window from the
// matching closed-form curve: coded runs span frame error rates from 0.3
// down to 1.5e-3 (offset runs use the offset-aware curve), uncoded runs span
// symbol error rates from 0.3 down to 1e-4; both use a 0.25 dB step with one
// step of margin on each side.
std::vector<double> resolve_snr_grid(const RunConfig& cfg, int sf, double cfo);

// Estimator names valid for a cell, and the defaults applied when the
// configuration does not pin them.
std::vector<std::string> default_estimators(const RunConfig& cfg, double cfo);
void validate_estimators(const std::vector<std::string>& names, const RunConfig& cfg, double cfo);

// Built-in presets: name -> configuration text.
const std::vector<std::pair<std::string, std::string>>& builtin_presets();
std::string preset_text(const std::string& name); // throws on unknown name

// Grid helpers shared with tests.
std::vector<double> parse_grid(const std::string& spec); // "a:b:c" or comma list
std::vector<int> parse_int_list(const std::string& spec);
std::vector<double> parse_double_list(const std::string& spec);

} // namespace loralab
