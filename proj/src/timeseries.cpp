#include "adpaad/timeseries.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace adpaad {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(trim(cur));
    return out;
}

bool parse_number(const std::string& field, double& out) {
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last && !field.empty();
}

[[noreturn]] void fail_row(const std::string& origin, size_t row, const std::string& what) {
    throw std::runtime_error(origin + ": row " + std::to_string(row) + ": " + what);
}

}  // namespace

TimeSeries parse_series(std::istream& in, const std::string& column,
                        const std::string& origin) {
    TimeSeries ts;
    std::string line;
    size_t row = 0;
    size_t col_index = 0;
    bool header_resolved = false;

    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        std::vector<std::string> fields = split_fields(line);

        if (!header_resolved) {
            header_resolved = true;
            if (!column.empty()) {
                bool found = false;
                for (size_t c = 0; c < fields.size(); ++c) {
                    if (fields[c] == column) {
                        col_index = c;
                        found = true;
                        break;
                    }
                }
                if (!found) fail_row(origin, row, "no column named '" + column + "' in header");
                continue;
            }
            double v;
            if (fields.size() == 1 && !parse_number(fields[0], v)) {
                continue;  // single non-numeric first line: header, skip
            }
            // fall through: first line already carries data
        }

        if (col_index >= fields.size()) {
            fail_row(origin, row, "expected at least " + std::to_string(col_index + 1) +
                                      " fields, got " + std::to_string(fields.size()));
        }
        if (column.empty() && fields.size() != 1) {
            fail_row(origin, row, "expected a single column, got " +
                                      std::to_string(fields.size()) +
                                      " fields (use a column selector)");
        }
        const std::string& cell = fields[col_index];
        if (cell.empty()) fail_row(origin, row, "empty value");
        double v;
        if (!parse_number(cell, v)) fail_row(origin, row, "non-numeric value '" + cell + "'");
        if (!std::isfinite(v)) fail_row(origin, row, "non-finite value '" + cell + "'");
        ts.samples.push_back(v);
    }

    if (ts.samples.empty()) {
        throw std::runtime_error(origin + ": no samples");
    }
    return ts;
}

TimeSeries load_series(const std::string& path, const std::string& column) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open input file: " + path);
    }
    return parse_series(in, column, path);
}

std::vector<std::span<const double>> subsequences(const TimeSeries& ts, WindowPlan plan) {
    const int m = static_cast<int>(ts.samples.size());
    if (plan.length < 1) throw std::invalid_argument("window length must be >= 1");
    if (plan.stride < 1) throw std::invalid_argument("stride must be >= 1");
    if (plan.length > m) {
        throw std::invalid_argument("window length " + std::to_string(plan.length) +
                                    " exceeds series length " + std::to_string(m));
    }
    const int K = (m - plan.length) / plan.stride + 1;
    std::vector<std::span<const double>> views;
    views.reserve(static_cast<size_t>(K));
    for (int k = 0; k < K; ++k) {
        views.emplace_back(ts.samples.data() + static_cast<size_t>(k) * plan.stride,
                           static_cast<size_t>(plan.length));
    }
    return views;
}

AmplitudeDomain amplitude_domain(std::span<const double> window) {
    if (window.empty()) throw std::invalid_argument("amplitude_domain of empty window");
    AmplitudeDomain dom{window[0], window[0]};
    for (double v : window) {
        if (v < dom.lo) dom.lo = v;
        if (v > dom.hi) dom.hi = v;
    }
    return dom;
}

std::vector<double> subsection_bounds(AmplitudeDomain dom, int q) {
    if (q < 1) throw std::invalid_argument("subsection count must be >= 1");
    if (!(dom.lo <= dom.hi)) throw std::invalid_argument("amplitude domain inverted");
    std::vector<double> bounds(static_cast<size_t>(q) + 1);
    bounds[0] = dom.lo;
    bounds[static_cast<size_t>(q)] = dom.hi;  // pinned: the max sample stays covered
    const double width = dom.hi - dom.lo;
    for (int t = 1; t < q; ++t) {
        bounds[static_cast<size_t>(t)] = dom.lo + (static_cast<double>(t) * width) / q;
    }
    if (dom.lo < dom.hi) {
        for (int t = 1; t <= q; ++t) {
            if (!(bounds[static_cast<size_t>(t)] > bounds[static_cast<size_t>(t) - 1])) {
                throw std::runtime_error("subsection bounds collapsed; range too small for q");
            }
        }
    }
    return bounds;
}

int assign_subsection(double x, const std::vector<double>& bounds) {
    const int q = static_cast<int>(bounds.size()) - 1;
    if (q < 1) throw std::invalid_argument("assign_subsection: bad bounds");
    if (bounds.front() == bounds.back()) return q;  // degenerate domain
    if (!(x >= bounds.front() && x <= bounds.back())) {
        throw std::invalid_argument("assign_subsection: value outside amplitude domain");
    }
    for (int t = 1; t < q; ++t) {
        if (x < bounds[static_cast<size_t>(t)]) return t;
    }
    return q;
}

}  // namespace adpaad
