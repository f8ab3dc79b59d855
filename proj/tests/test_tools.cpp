// Command-line layer: configuration parsing, grid resolution, CSV round
// trips, curve comparison helpers, and end-to-end subprocess runs of the
// loralab binary (path injected by the build as LORALAB_BIN).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "config.hpp"
#include "lora/csv.hpp"

namespace fs = std::filesystem;
using namespace loralab;

namespace {

fs::path scratch_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("loralab_test_" + std::to_string(getpid()));
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(LORALAB_BIN) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    REQUIRE(WIFEXITED(rc));
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    REQUIRE(bool(f));
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream f(p);
    REQUIRE(bool(f));
    f << text;
}

} // namespace

TEST_CASE("grid parsing: ranges, lists, and malformed input") {
    const std::vector<double> r = parse_grid("-14:0.5:-5");
    REQUIRE(r.size() == 19);
    CHECK(r.front() == doctest::Approx(-14.0));
    CHECK(r.back() == doctest::Approx(-5.0));
    CHECK(r[1] - r[0] == doctest::Approx(0.5));

    const std::vector<double> l = parse_grid("1, 2,3.5");
    REQUIRE(l.size() == 3);
    CHECK(l[2] == doctest::Approx(3.5));

    CHECK_THROWS_AS(parse_grid("1:0:-5"), std::invalid_argument);   // bad step
    CHECK_THROWS_AS(parse_grid("5:1:1"), std::invalid_argument);    // stop below start
    CHECK_THROWS_AS(parse_grid("1:2"), std::invalid_argument);      // missing stop
    CHECK_THROWS_AS(parse_grid(""), std::invalid_argument);         // empty
    CHECK_THROWS_AS(parse_grid("a,b"), std::invalid_argument);      // garbage
    CHECK_THROWS_AS(parse_grid("1,2x"), std::invalid_argument);     // trailing text
}

TEST_CASE("configuration text: full parse, comments, defaults") {
    const std::string text =
        "# a comment line\n"
        "mode = simulate\n"
        "name = demo   # trailing comment\n"
        "sf = 7, 9\n"
        "code = hamming48\n"
        "payload_symbols = 16\n"
        "cfo = 0, 0.25\n"
        "snr_db = -12:1:-6\n"
        "min_errors = 10\n"
        "max_trials = 500\n"
        "seed = 77\n";
    const RunConfig cfg = parse_config_text(text);
    CHECK(cfg.mode == "simulate");
    CHECK(cfg.name == "demo");
    REQUIRE(cfg.sfs.size() == 2);
    CHECK(cfg.sfs[1] == 9);
    CHECK(cfg.code.scheme == lora::CodeScheme::hamming48);
    CHECK(cfg.payload_symbols == 16);
    REQUIRE(cfg.cfos.size() == 2);
    CHECK(cfg.cfos[1] == doctest::Approx(0.25));
    CHECK(cfg.snr_spec == "-12:1:-6");
    CHECK(cfg.stop.min_errors == 10);
    CHECK(cfg.stop.max_trials == 500);
    CHECK(cfg.seed == 77);

    const RunConfig defaults = parse_config_text("");
    CHECK(defaults.mode == "simulate");
    CHECK(defaults.snr_spec == "auto");
    CHECK(defaults.seed == 1);
}

TEST_CASE("configuration text: rejected inputs") {
    CHECK_THROWS_AS(parse_config_text("mode = banana\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("nonsense_key = 3\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("sf = 6\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("sf = 13\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("code = hamming\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("cfo = 0.7\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("snr_db = 1:-1:5\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("min_errors = 0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("mode\n"), std::invalid_argument);   // no '='
    CHECK_THROWS_AS(parse_config_text("seed =\n"), std::invalid_argument); // empty value
    // payload must divide into whole codewords
    CHECK_THROWS_AS(parse_config_text("code = hamming48\npayload_symbols = 30\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("payload_symbols = 0\n"), std::invalid_argument);
}

TEST_CASE("configuration echo round-trips through the parser") {
    const std::string text =
        "mode = analytic\nname = rt\nsf = 7,12\ncode = hamming47\npayload_symbols = 14\n"
        "cfo = 0.1\nsnr_db = -10,-9\nestimators = fer_cfo\nmin_errors = 33\nmax_trials = 999\n"
        "seed = 5\n";
    const RunConfig cfg = parse_config_text(text);
    std::string echoed;
    for (const auto& [k, v] : config_entries(cfg)) echoed += k + " = " + v + "\n";
    const RunConfig again = parse_config_text(echoed);
    CHECK(config_entries(again) == config_entries(cfg));
}

TEST_CASE("snr grid resolution: explicit grids pass through, auto spans the waterfall") {
    RunConfig cfg;
    cfg.snr_spec = "-9,-8";
    CHECK(resolve_snr_grid(cfg, 7, 0.0) == std::vector<double>{-9.0, -8.0});

    cfg.snr_spec = "auto";
    cfg.code = lora::CodeConfig{lora::CodeScheme::hamming48};
    cfg.payload_symbols = 32;
    const std::vector<double> grid = resolve_snr_grid(cfg, 7, 0.0);
    REQUIRE(grid.size() >= 8);
    // the 1e-2 waterfall sits near -9.1 dB for this cell; the window must
    // bracket it with the curve's shallow side reaching past the knee
    CHECK(grid.front() < -9.5);
    CHECK(grid.back() >= -8.5);
    CHECK(grid.front() <= -9.25);
    CHECK(grid.back() >= -8.75 + 0.25); // at least one step above the knee
    for (std::size_t i = 1; i < grid.size(); ++i)
        CHECK(grid[i] - grid[i - 1] == doctest::Approx(0.25));
}

TEST_CASE("estimator defaults and validation") {
    RunConfig coded;
    coded.code = lora::CodeConfig{lora::CodeScheme::hamming48};
    CHECK(default_estimators(coded, 0.0) == std::vector<std::string>{"fer_flat", "fer_stagewise"});
    CHECK(default_estimators(coded, 0.2) == std::vector<std::string>{"fer_cfo"});
    RunConfig uncoded;
    uncoded.code = lora::CodeConfig{lora::CodeScheme::uncoded};
    CHECK(default_estimators(uncoded, 0.0) == std::vector<std::string>{"ser", "ber"});
    CHECK(default_estimators(uncoded, 0.3) == std::vector<std::string>{"ber_cfo"});

    CHECK_THROWS_AS(validate_estimators({"fer_flat"}, coded, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(validate_estimators({"fer_cfo"}, uncoded, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(validate_estimators({"wat"}, coded, 0.0), std::invalid_argument);
    CHECK_NOTHROW(validate_estimators({"ser", "ber", "cwer"}, coded, 0.0));
    CHECK_NOTHROW(validate_estimators({"ber_cfo", "fer_cfo"}, coded, 0.4));
}

TEST_CASE("every built-in preset parses cleanly") {
    for (const auto& [name, text] : builtin_presets()) {
        CAPTURE(name);
        CHECK_NOTHROW((void)parse_config_text(text));
    }
    CHECK_NOTHROW((void)preset_text("awgn-fer"));
    CHECK_THROWS_AS((void)preset_text("no-such-preset"), std::invalid_argument);
}

TEST_CASE("csv: write/read round trip and quoted input") {
    const fs::path p = scratch_dir() / "roundtrip.csv";
    lora::csv::Table t;
    t.columns = {"snr_db", "fer"};
    t.rows = {{-9.25, 0.03125}, {-8.0, 1.5e-3}, {-7.75, 9.872654321098e-05}};
    lora::csv::write(p.string(), t);
    const lora::csv::Table r = lora::csv::read(p.string());
    REQUIRE(r.columns == t.columns);
    REQUIRE(r.rows.size() == t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        for (std::size_t j = 0; j < t.rows[i].size(); ++j)
            CHECK(r.rows[i][j] == doctest::Approx(t.rows[i][j]).epsilon(1e-12));
    CHECK(r.column_index("fer") == 1);
    CHECK(r.column_index("nope") == -1);
    CHECK_THROWS_AS((void)r.column("nope"), std::invalid_argument);

    const fs::path q = scratch_dir() / "quoted.csv";
    spit(q, "\"snr_db\",\"fer\"\r\n\"-9.5\",0.25\n\n-8,0.125\r\n");
    const lora::csv::Table rq = lora::csv::read(q.string());
    REQUIRE(rq.columns == std::vector<std::string>{"snr_db", "fer"});
    REQUIRE(rq.rows.size() == 2);
    CHECK(rq.rows[0][0] == doctest::Approx(-9.5));
    CHECK(rq.rows[1][1] == doctest::Approx(0.125));

    const fs::path bad = scratch_dir() / "bad.csv";
    spit(bad, "snr_db,fer\n-9,zebra\n");
    CHECK_THROWS_AS((void)lora::csv::read(bad.string()), std::runtime_error);
    CHECK_THROWS_AS((void)lora::csv::read((scratch_dir() / "missing.csv").string()),
                    std::runtime_error);
}

TEST_CASE("csv curve tools: crossings and vertical gaps") {
    // exact log-linear curve: log10 y = -2 (x + 10) -> y = 1e-2 at x = -9
    std::vector<lora::csv::CurvePoint> a;
    for (double x = -10.0; x <= -7.0 + 1e-9; x += 0.5)
        a.push_back({x, std::pow(10.0, -2.0 * (x + 10.0))});
    CHECK(lora::csv::crossing_snr_db(a, 1e-2) == doctest::Approx(-9.0).epsilon(1e-12));
    CHECK(lora::csv::crossing_snr_db(a, 1e-3) == doctest::Approx(-8.5).epsilon(1e-12));
    CHECK_THROWS_AS((void)lora::csv::crossing_snr_db(a, 1e-9), std::invalid_argument);

    // same slope shifted 0.3 dB to the right -> 0.6 decades of vertical gap
    std::vector<lora::csv::CurvePoint> b;
    for (double x = -10.0; x <= -7.0 + 1e-9; x += 0.5)
        b.push_back({x, std::pow(10.0, -2.0 * (x + 10.0 - 0.3))});
    CHECK(lora::csv::max_log10_gap(a, b) == doctest::Approx(0.6).epsilon(1e-9));
    CHECK(lora::csv::max_log10_gap(a, a) == doctest::Approx(0.0));
}

TEST_CASE("cli: presets listing and usage errors") {
    CHECK(run_cli("presets") == 0);
    CHECK(run_cli("") == 2);                  // a subcommand is required
    CHECK(run_cli("--bogus-flag") == 2);
    CHECK(run_cli("simulate") == 2);          // no configuration source
    CHECK(run_cli("analytic --preset no-such-preset") == 2);
    CHECK(run_cli("compare --baseline missing.csv --candidate missing.csv") == 1);
}

TEST_CASE("cli: analytic preset produces per-cell curves and a manifest") {
    const fs::path out = scratch_dir() / "analytic";
    REQUIRE(run_cli("analytic --preset analytic-awgn --out " + out.string()) == 0);
    for (int sf : {7, 9, 12}) CHECK(fs::exists(out / ("analytic-awgn-sf" + std::to_string(sf) + ".csv")));
    CHECK(fs::exists(out / "analytic-awgn-manifest.json"));

    const lora::csv::Table t = lora::csv::read((out / "analytic-awgn-sf7.csv").string());
    CHECK(t.columns == std::vector<std::string>{"snr_db", "ser", "ber", "cwer", "fer_flat",
                                                "fer_stagewise"});
    REQUIRE(t.rows.size() >= 8);
    const int iflat = t.column_index("fer_flat");
    const int istage = t.column_index("fer_stagewise");
    for (const auto& row : t.rows)
        CHECK(row[size_t(istage)] <= row[size_t(iflat)] * (1.0 + 1e-9) + 1e-300);
}

TEST_CASE("cli: simulate run, manifest replay, and curve comparison") {
    const fs::path cfgp = scratch_dir() / "tiny.cfg";
    spit(cfgp,
         "mode = simulate\nname = tiny\nsf = 7\ncode = hamming48\npayload_symbols = 16\n"
         "cfo = 0\nsnr_db = -40,-39\nmin_errors = 5\nmax_trials = 50\nseed = 42\n");
    const fs::path out1 = scratch_dir() / "run1";
    REQUIRE(run_cli("simulate --config " + cfgp.string() + " --out " + out1.string() +
                    " --workers 2") == 0);
    const fs::path csv1 = out1 / "tiny-sf7.csv";
    REQUIRE(fs::exists(csv1));
    const lora::csv::Table t = lora::csv::read(csv1.string());
    CHECK(t.columns == std::vector<std::string>{"snr_db", "frames", "frame_errors", "fer",
                                                "ci_low", "ci_high"});
    REQUIRE(t.rows.size() == 2);
    // at -40 dB every frame fails, so the stopping rule trips at 5 errors
    CHECK(t.rows[0][3] == doctest::Approx(1.0));

    // replaying the manifest reproduces the run byte for byte
    const fs::path out2 = scratch_dir() / "run2";
    REQUIRE(run_cli("simulate --from-manifest " + (out1 / "tiny-manifest.json").string() +
                    " --out " + out2.string() + " --workers 2") == 0);
    CHECK(slurp(out2 / "tiny-sf7.csv") == slurp(csv1));

    // compare the two analytic frame-error approximations against each other:
    // crossings at 1e-2 sit 0.46 dB apart, so 0.2 dB fails and 0.5 dB passes
    const fs::path acsv = scratch_dir() / "analytic" / "analytic-awgn-sf7.csv";
    if (!fs::exists(acsv))
        REQUIRE(run_cli("analytic --preset analytic-awgn --out " +
                        (scratch_dir() / "analytic").string()) == 0);
    const std::string base = " --baseline " + acsv.string() + " --candidate " + acsv.string() +
                             " --rate-column fer_flat --candidate-column fer_stagewise";
    CHECK(run_cli("compare" + base) == 0);
    CHECK(run_cli("compare" + base + " --max-gap-db 0.5") == 0);
    CHECK(run_cli("compare" + base + " --max-gap-db 0.2") == 1);
}
