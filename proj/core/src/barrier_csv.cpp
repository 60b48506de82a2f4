// SPDX-License-Identifier: MIT
#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "skorokhod/barrier.hpp"
#include "skorokhod/errors.hpp"

namespace skorokhod {

std::string format_number(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (std::isnan(value)) return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

double parse_number(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
    if (text == "inf" || text == "+inf") return kInf;
    if (text == "-inf") return -kInf;
    double value = 0.0;
    const auto* first = text.data();
    if (!text.empty() && text.front() == '+') ++first;
    const auto res = std::from_chars(first, text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw InvalidArgument("cannot parse number '" + std::string(text) + "'");
    return value;
}

void write_barrier_csv(std::ostream& out, const Barrier& r, std::span<const std::string> comments) {
    for (const auto& c : comments) out << "# " << c << '\n';
    out << "# t_cap=" << format_number(r.t_cap()) << '\n';
    out << "x,r\n";
    const auto& grid = r.grid();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out << format_number(grid[i]) << ',' << format_number(r.points()[i]) << '\n';
        if (i + 1 < grid.size()) {
            out << format_number(0.5 * (grid[i] + grid[i + 1])) << ',' << format_number(r.cells()[i]) << '\n';
        }
    }
}

Barrier read_barrier_csv(std::istream& in) {
    std::string line;
    std::optional<double> t_cap;
    bool header = false;
    std::vector<std::pair<double, double>> rows;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            const auto pos = line.find("t_cap=");
            if (pos != std::string::npos) {
                auto rest = std::string_view(line).substr(pos + 6);
                rest = rest.substr(0, rest.find_first_of(" ,;"));
                t_cap = parse_number(rest);
            }
            continue;
        }
        if (!header) {
            if (line != "x,r") throw InvalidArgument("barrier csv: expected header 'x,r' at line " + std::to_string(line_no));
            header = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw InvalidArgument("barrier csv: missing ',' at line " + std::to_string(line_no));
        try {
            rows.emplace_back(parse_number(std::string_view(line).substr(0, comma)),
                              parse_number(std::string_view(line).substr(comma + 1)));
        } catch (const InvalidArgument& e) {
            throw InvalidArgument("barrier csv: line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!header) throw InvalidArgument("barrier csv: missing header");
    if (rows.size() < 3 || rows.size() % 2 == 0)
        throw InvalidArgument("barrier csv: need an odd number (>= 3) of rows alternating points and cells");

    std::vector<double> grid;
    std::vector<double> points;
    std::vector<double> cells;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i % 2 == 0) {
            grid.push_back(rows[i].first);
            points.push_back(rows[i].second);
        } else {
            cells.push_back(rows[i].second);
        }
    }
    for (std::size_t i = 1; i < rows.size(); i += 2) {
        if (!(rows[i].first > rows[i - 1].first && rows[i].first < rows[i + 1].first))
            throw InvalidArgument("barrier csv: cell row " + std::to_string(i + 1) + " not inside its cell");
    }
    if (!t_cap) {
        double m = 0.0;
        for (double v : cells) {
            if (std::isfinite(v)) m = std::max(m, v);
        }
        for (double v : points) {
            if (std::isfinite(v)) m = std::max(m, v);
        }
        t_cap = m;
    }
    return Barrier(std::move(grid), std::move(cells), std::move(points), *t_cap);
}

}  // namespace skorokhod
