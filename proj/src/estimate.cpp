#include "wastefactor/estimate.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

#include "wastefactor/units.hpp"

namespace wastefactor {

WasteFit fit_waste_factor(std::span<const PowerSample> samples) {
    if (samples.size() < 2) {
        throw std::invalid_argument(fmt::format("fit needs at least 2 samples, got {}", samples.size()));
    }
    const double n = static_cast<double>(samples.size());
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (const auto& s : samples) {
        mean_x += s.p_signal_w;
        mean_y += s.p_total_w;
    }
    mean_x /= n;
    mean_y /= n;

    // Centered sums keep exact data exact.
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (const auto& s : samples) {
        const double dx = s.p_signal_w - mean_x;
        const double dy = s.p_total_w - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0.0) {
        throw std::invalid_argument("fit is degenerate: all samples share the same signal power");
    }
    WasteFit fit;
    fit.w = sxy / sxx;
    fit.p_non_path_w = mean_y - fit.w * mean_x;
    fit.n_samples = static_cast<int>(samples.size());

    double ss_res = 0.0;
    for (const auto& s : samples) {
        const double r = s.p_total_w - (fit.w * s.p_signal_w + fit.p_non_path_w);
        ss_res += r * r;
    }
    if (syy <= 0.0) {
        fit.r_squared = 1.0;  // flat data, perfectly explained by a zero slope
    } else {
        fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    }
    fit.physical = fit.w >= 1.0 && fit.p_non_path_w >= 0.0;
    return fit;
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return cells;
}

double parse_number(const std::string& cell, const std::string& where) {
    double v = 0.0;
    const char* first = cell.data();
    const char* last = first + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (cell.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
        throw std::runtime_error(fmt::format("{}: '{}' is not a number", where, cell));
    }
    return v;
}

struct Column {
    std::size_t index = 0;
    bool dbm = false;
};

}  // namespace

std::vector<PowerSample> parse_power_log(std::istream& in, const std::string& source_name) {
    std::optional<Column> signal_col;
    std::optional<Column> total_col;
    std::size_t n_header = 0;
    bool have_header = false;
    std::vector<PowerSample> out;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto cells = split_commas(t);
        if (!have_header) {
            have_header = true;
            n_header = cells.size();
            for (std::size_t i = 0; i < cells.size(); ++i) {
                const std::string& name = cells[i];
                auto set = [&](std::optional<Column>& col, bool dbm) {
                    if (col) {
                        throw std::runtime_error(
                            fmt::format("{}:{}: duplicate column for '{}'", source_name, line_no, name));
                    }
                    col = Column{i, dbm};
                };
                if (name == "p_signal_w") set(signal_col, false);
                else if (name == "p_signal_dbm") set(signal_col, true);
                else if (name == "p_total_w") set(total_col, false);
                else if (name == "p_total_dbm") set(total_col, true);
            }
            if (!signal_col) {
                throw std::runtime_error(
                    fmt::format("{}:{}: header lacks p_signal_w or p_signal_dbm", source_name, line_no));
            }
            if (!total_col) {
                throw std::runtime_error(
                    fmt::format("{}:{}: header lacks p_total_w or p_total_dbm", source_name, line_no));
            }
            continue;
        }
        if (cells.size() != n_header) {
            throw std::runtime_error(fmt::format("{}:{}: expected {} columns, found {}", source_name, line_no,
                                                 n_header, cells.size()));
        }
        auto read = [&](const Column& col) {
            const std::string where = fmt::format("{}:{} column {}", source_name, line_no, col.index + 1);
            const double v = parse_number(cells[col.index], where);
            if (col.dbm) return dbm_to_watts(v);
            if (v < 0.0) throw std::runtime_error(fmt::format("{}: negative power {}", where, v));
            return v;
        };
        out.push_back(PowerSample{read(*signal_col), read(*total_col)});
    }
    if (!have_header) {
        throw std::runtime_error(fmt::format("{}: empty file, no header row", source_name));
    }
    return out;
}

std::vector<PowerSample> load_power_log(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error(fmt::format("cannot open power log '{}'", path.string()));
    }
    return parse_power_log(in, path.string());
}

}  // namespace wastefactor
