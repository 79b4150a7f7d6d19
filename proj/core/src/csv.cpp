#include "memkern/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "memkern/errors.hpp"

namespace memk {

namespace {

namespace fs = std::filesystem;

void atomic_write(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open for writing: " + tmp.string());
        out << content;
        if (!out) throw IoError("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw IoError("rename failed: " + path.string() + " (" + ec.message() + ")");
}

std::vector<std::vector<double>> read_rows(const fs::path& path, std::size_t n_cols) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty file: " + path.string());
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != n_cols)
            throw IoError("bad column count in " + path.string() + ": " + line);
        rows.push_back(std::move(row));
    }
    return rows;
}

// Recover a uniform grid from a sorted list of unique sample coordinates.
void check_uniform(const std::vector<double>& v, const char* what) {
    if (v.size() < 2) throw IoError(std::string(what) + ": too few nodes");
    const double h = v[1] - v[0];
    for (std::size_t i = 1; i < v.size(); ++i) {
        const double d = v[i] - v[i - 1];
        if (std::abs(d - h) > 1e-9 * std::max(1.0, std::abs(h)))
            throw IoError(std::string(what) + ": nodes are not uniformly spaced");
    }
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_space_time_csv(const std::filesystem::path& path, const SpaceTimeField& f) {
    std::string out = "t,r,value\n";
    for (std::size_t i = 0; i < f.tgrid.size(); ++i)
        for (std::size_t j = 0; j < f.rgrid.size(); ++j) {
            out += format_double(f.tgrid.node(i));
            out += ',';
            out += format_double(f.rgrid.node(j));
            out += ',';
            out += format_double(f.at(i, j));
            out += '\n';
        }
    atomic_write(path, out);
}

SpaceTimeField read_space_time_csv(const std::filesystem::path& path) {
    const auto rows = read_rows(path, 3);
    if (rows.empty()) throw IoError("no data rows: " + path.string());
    std::vector<double> ts, rs;
    for (const auto& row : rows) {
        if (ts.empty() || row[0] > ts.back() + 1e-15) ts.push_back(row[0]);
    }
    for (const auto& row : rows) {
        if (row[0] != rows[0][0]) break;
        rs.push_back(row[1]);
    }
    if (ts.size() * rs.size() != rows.size())
        throw IoError("field is not a dense time x radius table: " + path.string());
    check_uniform(ts, "time grid");
    check_uniform(rs, "radial grid");
    TimeGrid tg(ts.back(), ts.size() - 1);
    RadialGrid rg(rs.front(), rs.back(), rs.size());
    SpaceTimeField f(tg, rg);
    for (std::size_t i = 0; i < ts.size(); ++i)
        for (std::size_t j = 0; j < rs.size(); ++j) f.at(i, j) = rows[i * rs.size() + j][2];
    return f;
}

void write_time_profile_csv(const std::filesystem::path& path, const TimeGrid& tg,
                            const std::vector<double>& values) {
    if (values.size() != tg.size()) throw ShapeError("write_time_profile_csv: size mismatch");
    std::string out = "t,value\n";
    for (std::size_t i = 0; i < tg.size(); ++i) {
        out += format_double(tg.node(i));
        out += ',';
        out += format_double(values[i]);
        out += '\n';
    }
    atomic_write(path, out);
}

std::pair<TimeGrid, std::vector<double>> read_time_profile_csv(
    const std::filesystem::path& path) {
    const auto rows = read_rows(path, 2);
    std::vector<double> ts, vs;
    for (const auto& row : rows) {
        ts.push_back(row[0]);
        vs.push_back(row[1]);
    }
    check_uniform(ts, "time grid");
    return {TimeGrid(ts.back(), ts.size() - 1), vs};
}

void write_radial_profile_csv(const std::filesystem::path& path, const RadialGrid& rg,
                              const std::vector<double>& values) {
    if (values.size() != rg.size()) throw ShapeError("write_radial_profile_csv: size mismatch");
    std::string out = "r,value\n";
    for (std::size_t i = 0; i < rg.size(); ++i) {
        out += format_double(rg.node(i));
        out += ',';
        out += format_double(values[i]);
        out += '\n';
    }
    atomic_write(path, out);
}

std::pair<RadialGrid, std::vector<double>> read_radial_profile_csv(
    const std::filesystem::path& path) {
    const auto rows = read_rows(path, 2);
    std::vector<double> rs, vs;
    for (const auto& row : rows) {
        rs.push_back(row[0]);
        vs.push_back(row[1]);
    }
    check_uniform(rs, "radial grid");
    return {RadialGrid(rs.front(), rs.back(), rs.size()), vs};
}

void write_diagnostics_csv(const std::filesystem::path& path,
                           const std::vector<std::pair<std::string, std::string>>& rows) {
    std::string out = "key,value\n";
    for (const auto& [k, v] : rows) {
        out += k;
        out += ',';
        out += v;
        out += '\n';
    }
    atomic_write(path, out);
}

}  // namespace memk
