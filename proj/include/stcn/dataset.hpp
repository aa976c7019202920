#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace stcn {

using Vec = std::vector<double>;
using Mat = std::vector<std::vector<double>>;

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A zero-variance column: unusable as a regression predictor and not
// normalizable into sigmoid space.
struct DegenerateColumn : DataError {
    using DataError::DataError;
};

// Column-wise [lower, upper] intervals in original units; the invertible part
// of the sigmoid-space transform.
struct Bounds {
    Vec lower;
    Vec upper;
    std::size_t size() const { return lower.size(); }
};

// margin keeping normalized data away from {0,1}, where the inverse sigmoid
// is undefined or unbounded
constexpr double kSigmoidMargin = 0.01;

struct Dataset {
    std::string name;
    std::vector<std::string> columns;
    Mat rows;  // rows[k][i]

    std::size_t instance_count() const { return rows.size(); }
    std::size_t variable_count() const { return columns.size(); }
};

namespace detail {
inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}
}  // namespace detail

// CSV with a header row; all modeling cells numeric. class_column (if >= 0)
// is dropped after parsing.
inline Dataset load_csv(const std::string& path, int class_column = -1) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    Dataset d;
    {
        auto slash = path.find_last_of('/');
        auto base = slash == std::string::npos ? path : path.substr(slash + 1);
        auto dot = base.find_last_of('.');
        d.name = dot == std::string::npos ? base : base.substr(0, dot);
    }
    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty file");
    d.columns = detail::split_csv_line(line);
    std::size_t row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (line.empty()) continue;
        auto cells = detail::split_csv_line(line);
        if (cells.size() != d.columns.size())
            throw DataError(path + ": row " + std::to_string(row_no) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(d.columns.size()));
        Vec row;
        row.reserve(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c) {
            try {
                std::size_t pos = 0;
                double val = std::stod(cells[c], &pos);
                if (pos != cells[c].size()) throw std::invalid_argument("trailing");
                row.push_back(val);
            } catch (const std::exception&) {
                throw DataError(path + ": non-numeric cell at row " + std::to_string(row_no) +
                                ", column " + std::to_string(c + 1) + " ('" + cells[c] + "')");
            }
        }
        d.rows.push_back(std::move(row));
    }
    if (d.rows.empty()) throw DataError(path + ": no data rows");
    if (class_column >= 0) {
        if (static_cast<std::size_t>(class_column) >= d.columns.size())
            throw DataError(path + ": class column out of range");
        d.columns.erase(d.columns.begin() + class_column);
        for (auto& r : d.rows) r.erase(r.begin() + class_column);
    }
    return d;
}

inline std::string format_double(double x, int precision = 17) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, x);
    return buf;
}

inline void save_csv(const Dataset& d, const std::string& path, int precision = 17) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    for (std::size_t c = 0; c < d.columns.size(); ++c)
        out << (c ? "," : "") << d.columns[c];
    out << "\n";
    for (const auto& row : d.rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            out << (c ? "," : "") << format_double(row[c], precision);
        out << "\n";
    }
}

// Bounds of each column, computed from the given rows (training fold only in
// cross-validation).
inline Bounds compute_bounds(const Mat& rows) {
    if (rows.empty()) throw DataError("compute_bounds: empty data");
    const std::size_t m = rows[0].size();
    Bounds b;
    b.lower.assign(m, std::numeric_limits<double>::infinity());
    b.upper.assign(m, -std::numeric_limits<double>::infinity());
    for (const auto& r : rows)
        for (std::size_t i = 0; i < m; ++i) {
            b.lower[i] = std::min(b.lower[i], r[i]);
            b.upper[i] = std::max(b.upper[i], r[i]);
        }
    for (std::size_t i = 0; i < m; ++i)
        if (!(b.upper[i] > b.lower[i]))
            throw DegenerateColumn("degenerate (constant) column " + std::to_string(i + 1));
    return b;
}

// Min-max map of [L_i, U_i] onto [margin, 1-margin]; values outside the
// bounds (possible for test folds) are clamped into the margin.
inline double normalize_value(double x, double lo, double hi) {
    double z = kSigmoidMargin + (1.0 - 2.0 * kSigmoidMargin) * (x - lo) / (hi - lo);
    return std::clamp(z, kSigmoidMargin, 1.0 - kSigmoidMargin);
}

inline double denormalize_value(double z, double lo, double hi) {
    double x = lo + (z - kSigmoidMargin) * (hi - lo) / (1.0 - 2.0 * kSigmoidMargin);
    return std::clamp(x, lo, hi);
}

inline Mat normalize_rows(const Mat& rows, const Bounds& b) {
    Mat out = rows;
    for (auto& r : out)
        for (std::size_t i = 0; i < r.size(); ++i)
            r[i] = normalize_value(r[i], b.lower[i], b.upper[i]);
    return out;
}

// Transform a dataset into sigmoid space; returns the normalized rows and the
// bounds needed to invert the map.
inline std::pair<Mat, Bounds> to_sigmoid_space(const Mat& rows) {
    Bounds b = compute_bounds(rows);
    return {normalize_rows(rows, b), b};
}

inline Vec to_original_units(const Vec& normalized, const Bounds& b) {
    Vec out(normalized.size());
    for (std::size_t i = 0; i < normalized.size(); ++i)
        out[i] = denormalize_value(normalized[i], b.lower[i], b.upper[i]);
    return out;
}

// Canonical row order: lexicographic by value. Benchmarks sort before the
// seeded shuffle so reports do not depend on on-disk row order.
inline void canonical_sort(Mat& rows) {
    std::sort(rows.begin(), rows.end());
}

}  // namespace stcn
