#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace adpaad {

struct TimeSeries {
    std::vector<double> samples;
};

// CSV with one numeric column, '.' decimal separator, optional single header
// line. A nonempty column name selects that column from a headed multi-column
// file. Parse errors report 1-based row numbers.
TimeSeries load_series(const std::string& path, const std::string& column = "");
TimeSeries parse_series(std::istream& in, const std::string& column = "",
                        const std::string& origin = "<stream>");

struct WindowPlan {
    int length = 0;  // n >= 1
    int stride = 1;  // >= 1
};

// K = floor((m - n)/stride) + 1 sliding views into the series; requires n <= m.
std::vector<std::span<const double>> subsequences(const TimeSeries& ts, WindowPlan plan);

struct AmplitudeDomain {
    double lo = 0.0;
    double hi = 0.0;
};

AmplitudeDomain amplitude_domain(std::span<const double> window);

// q + 1 ascending bounds over the domain. End bounds are pinned to lo and hi
// exactly; interior bounds split the range into q equal widths.
std::vector<double> subsection_bounds(AmplitudeDomain dom, int q);

// 1-based subsection index for x under bounds: [a_{t-1}, a_t) half-open with
// the last subsection closed above. A degenerate domain (lo == hi) maps every
// element to q. Requires bounds.front() <= x <= bounds.back().
int assign_subsection(double x, const std::vector<double>& bounds);

}  // namespace adpaad
