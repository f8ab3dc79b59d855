#include "lora/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lora::csv {

int Table::column_index(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    return it == columns.end() ? -1 : static_cast<int>(it - columns.begin());
}

std::vector<double> Table::column(const std::string& name) const {
    const int idx = column_index(name);
    if (idx < 0) throw std::invalid_argument("csv: no column named " + name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.at(static_cast<std::size_t>(idx)));
    return out;
}

std::string format_row(const std::vector<double>& values) {
    std::string line;
    char buf[64];
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) line += ',';
        std::snprintf(buf, sizeof buf, "%.12g", values[i]);
        line += buf;
    }
    return line;
}

void write(const std::string& path, const Table& table) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("csv: cannot open " + path + " for writing");
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) f << ',';
        f << table.columns[i];
    }
    f << '\n';
    for (const auto& r : table.rows) {
        if (r.size() != table.columns.size())
            throw std::invalid_argument("csv: row width does not match header");
        f << format_row(r) << '\n';
    }
    if (!f) throw std::runtime_error("csv: write to " + path + " failed");
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

Table read(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("csv: cannot open " + path);
    Table t;
    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error("csv: " + path + " is empty");
    t.columns = split_fields(line);
    std::size_t lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> fields = split_fields(line);
        if (fields.size() != t.columns.size())
            throw std::runtime_error("csv: " + path + ": line " + std::to_string(lineno) +
                                     " has " + std::to_string(fields.size()) + " fields, expected " +
                                     std::to_string(t.columns.size()));
        std::vector<double> row;
        row.reserve(fields.size());
        for (const std::string& s : fields) {
            std::size_t pos = 0;
            double v = 0.0;
            try {
                v = std::stod(s, &pos);
            } catch (const std::exception&) {
                throw std::runtime_error("csv: " + path + ": line " + std::to_string(lineno) +
                                         ": not a number: " + s);
            }
            if (pos != s.size())
                throw std::runtime_error("csv: " + path + ": line " + std::to_string(lineno) +
                                         ": trailing characters in field: " + s);
            row.push_back(v);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

double crossing_snr_db(const std::vector<CurvePoint>& curve, double level) {
    if (!(level > 0.0)) throw std::invalid_argument("crossing_snr_db: level must be positive");
    std::vector<CurvePoint> pts;
    for (const CurvePoint& p : curve)
        if (p.y > 0.0) pts.push_back(p);
    std::sort(pts.begin(), pts.end(), [](const CurvePoint& a, const CurvePoint& b) { return a.x < b.x; });
    const double ll = std::log10(level);
    // Scan from the right so the reported crossing is the one adjacent to the
    // low-error-rate region even if sampling noise makes the curve wiggle.
    for (std::size_t i = pts.size(); i-- > 1;) {
        const double ya = std::log10(pts[i - 1].y);
        const double yb = std::log10(pts[i].y);
        if ((ya - ll) * (yb - ll) <= 0.0 && ya != yb) {
            const double t = (ll - ya) / (yb - ya);
            return pts[i - 1].x + t * (pts[i].x - pts[i - 1].x);
        }
    }
    throw std::invalid_argument("crossing_snr_db: no adjacent samples bracket the level");
}

double max_log10_gap(const std::vector<CurvePoint>& a, const std::vector<CurvePoint>& b) {
    std::vector<CurvePoint> bb;
    for (const CurvePoint& p : b)
        if (p.y > 0.0) bb.push_back(p);
    std::sort(bb.begin(), bb.end(), [](const CurvePoint& u, const CurvePoint& v) { return u.x < v.x; });
    if (bb.size() < 2) throw std::invalid_argument("max_log10_gap: reference curve too short");
    double worst = 0.0;
    bool any = false;
    for (const CurvePoint& p : a) {
        if (p.y <= 0.0 || p.x < bb.front().x || p.x > bb.back().x) continue;
        auto it = std::lower_bound(bb.begin(), bb.end(), p.x,
                                   [](const CurvePoint& u, double x) { return u.x < x; });
        std::size_t j = static_cast<std::size_t>(it - bb.begin());
        if (j == 0) j = 1;
        if (j >= bb.size()) j = bb.size() - 1;
        const CurvePoint& p0 = bb[j - 1];
        const CurvePoint& p1 = bb[j];
        const double t = (p1.x == p0.x) ? 0.0 : (p.x - p0.x) / (p1.x - p0.x);
        const double ly = std::log10(p0.y) + t * (std::log10(p1.y) - std::log10(p0.y));
        worst = std::max(worst, std::abs(std::log10(p.y) - ly));
        any = true;
    }
    if (!any) throw std::invalid_argument("max_log10_gap: curves do not overlap");
    return worst;
}

} // namespace lora::csv
