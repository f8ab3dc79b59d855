#pragma once

#include <string>
#include <vector>

namespace lora::csv {

// Minimal CSV surface for the result tables this project emits and consumes:
// a header row of column names followed by numeric data rows. Fields are
// comma-separated; quoting per RFC 4180 is honored on input and never needed
// on output (column names and numbers contain no commas).

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    int column_index(const std::string& name) const; // -1 when absent
    std::vector<double> column(const std::string& name) const;
};

std::string format_row(const std::vector<double>& values);
void write(const std::string& path, const Table& table);
Table read(const std::string& path);

// --- Curve tools -------------------------------------------------------------

struct CurvePoint {
    double x; // snr_db
    double y; // error rate
};

// SNR where a sampled, decreasing error-rate curve crosses the given level,
// interpolating linearly in (x, log10 y) between the bracketing samples.
// Points with y <= 0 are ignored (log-domain). Throws std::invalid_argument
// when no adjacent pair brackets the level.
double crossing_snr_db(const std::vector<CurvePoint>& curve, double level);

// Largest |log10(ya) - log10(yb)| between two curves over the overlap of
// their x ranges, comparing curve a's samples against curve b interpolated
// in log10. Sample pairs where either value is <= 0 are skipped.
double max_log10_gap(const std::vector<CurvePoint>& a, const std::vector<CurvePoint>& b);

} // namespace lora::csv
