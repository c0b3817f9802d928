#include "springlink/csv_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <unistd.h>

namespace springlink::io {

std::string format_number(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (std::isnan(value)) return "nan";
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

double parse_number(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
        text.remove_suffix(1);
    }
    const std::string owned(text);
    if (owned.empty()) throw DataError("empty numeric field");
    char* end = nullptr;
    errno = 0;
    const double value = std::strtod(owned.c_str(), &end);
    if (end != owned.c_str() + owned.size() || errno == ERANGE) {
        throw DataError("not a number: '" + owned + "'");
    }
    return value;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot open " + tmp.string() + " for writing");
        out << contents;
        out.flush();
        if (!out) throw DataError("failed writing " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw DataError("cannot move output into place at " + path.string() + ": " + ec.message());
    }
}

std::string to_csv(const CsvTable& table) {
    std::string out;
    auto emit = [&](const std::vector<std::string>& cells) {
        for (std::size_t k = 0; k < cells.size(); ++k) {
            if (k) out += ',';
            out += cells[k];
        }
        out += '\n';
    };
    emit(table.header);
    for (const auto& row : table.rows) emit(row);
    return out;
}

CsvTable parse_csv(std::string_view text) {
    CsvTable table;
    bool first = true;
    while (!text.empty()) {
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t start = 0;
        for (;;) {
            const auto comma = line.find(',', start);
            cells.emplace_back(line.substr(start, comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (first) {
            table.header = std::move(cells);
            first = false;
        } else {
            if (cells.size() != table.header.size()) throw DataError("ragged CSV row");
            table.rows.push_back(std::move(cells));
        }
    }
    return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_csv(buffer.str());
}

Axis parse_axis(std::string_view spec, std::string name) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        const auto colon = spec.find(':', start);
        parts.emplace_back(spec.substr(start, colon - start));
        if (colon == std::string_view::npos) break;
        start = colon + 1;
    }
    const std::string where = "axis '" + name + "' (" + std::string(spec) + ")";
    if (parts.size() != 3) throw ConfigError(where + ": expected min:max:count");
    Axis axis;
    axis.name = std::move(name);
    try {
        axis.min = parse_number(parts[0]);
        axis.max = parse_number(parts[1]);
        const double count = parse_number(parts[2]);
        if (count != std::floor(count) || count < 0) throw DataError("count");
        axis.count = static_cast<std::size_t>(count);
    } catch (const DataError&) {
        throw ConfigError(where + ": malformed number");
    }
    if (!std::isfinite(axis.min) || !std::isfinite(axis.max) || axis.min > axis.max) {
        throw ConfigError(where + ": need finite min <= max");
    }
    if (axis.count < 2) throw ConfigError(where + ": count must be at least 2");
    return axis;
}

std::vector<double> parse_list(std::string_view spec) {
    std::vector<double> values;
    std::size_t start = 0;
    for (;;) {
        const auto comma = spec.find(',', start);
        try {
            values.push_back(parse_number(spec.substr(start, comma - start)));
        } catch (const DataError&) {
            throw ConfigError("malformed number list '" + std::string(spec) + "'");
        }
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return values;
}

CsvTable torque_table(const TorqueProfile& p) {
    CsvTable t;
    t.header = {"theta_rad", "theta_deg", "T_kin", "T_spring", "T_total", "spring_length"};
    for (std::size_t i = 0; i < p.theta.size(); ++i) {
        t.rows.push_back({format_number(p.theta[i]), format_number(p.theta[i] * 180.0 / kPi),
                          format_number(p.kinematic[i]), format_number(p.spring[i]),
                          format_number(p.total[i]), format_number(p.length[i])});
    }
    return t;
}

CsvTable sweep_table(const SweepGrid& grid) {
    CsvTable t;
    t.header = {"l_over_a", "beta_rad", "ratio", "feasible"};
    for (std::size_t i = 0; i < grid.x.count; ++i) {
        for (std::size_t j = 0; j < grid.y.count; ++j) {
            const std::size_t k = grid.index(i, j);
            t.rows.push_back({format_number(grid.x.value(i)), format_number(grid.y.value(j)),
                              format_number(grid.ratio[k]), grid.feasible[k] ? "1" : "0"});
        }
    }
    return t;
}

CsvTable family_summary_table(const std::vector<FamilyMember>& family) {
    CsvTable t;
    t.header = {"b_over_a",   "feasible_cells", "feasible_area", "beta_extent",
                "best_ratio", "best_l_over_a",  "best_beta"};
    for (const auto& m : family) {
        t.rows.push_back({format_number(m.b_over_a), std::to_string(m.feasible_cells),
                          format_number(m.feasible_area), format_number(m.beta_extent),
                          format_number(m.best_ratio), format_number(m.best_l_over_a),
                          format_number(m.best_beta)});
    }
    return t;
}

CsvTable family_grid_table(const std::vector<FamilyMember>& family) {
    CsvTable t;
    t.header = {"b_over_a", "l_over_a", "beta_rad", "ratio", "feasible"};
    for (const auto& m : family) {
        for (auto row : sweep_table(m.grid).rows) {
            row.insert(row.begin(), format_number(m.b_over_a));
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

CsvTable solution_space_table(const SolutionSpace& s) {
    CsvTable t;
    t.header = {"b_over_a", "d_over_a", "grashof_ok", "best_ratio", "feasible"};
    for (std::size_t i = 0; i < s.b_over_a.count; ++i) {
        for (std::size_t j = 0; j < s.d_over_a.count; ++j) {
            const std::size_t k = s.index(i, j);
            t.rows.push_back({format_number(s.b_over_a.value(i)), format_number(s.d_over_a.value(j)),
                              s.grashof_ok[k] ? "1" : "0", format_number(s.best_ratio[k]),
                              s.feasible[k] ? "1" : "0"});
        }
    }
    return t;
}

CsvTable boundary_table(const SolutionSpace& s) {
    CsvTable t;
    t.header = {"line", "point", "b_over_a", "d_over_a"};
    for (const auto& line : s.boundaries) {
        for (std::size_t k = 0; k < line.points.size(); ++k) {
            t.rows.push_back({line.label, std::to_string(k), format_number(line.points[k].x),
                              format_number(line.points[k].y)});
        }
    }
    return t;
}

}  // namespace springlink::io
