#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "memkern/fields.hpp"

namespace memk {

// CSV conventions: single header row, '.' decimal separator, shortest
// round-trip formatting, newline-terminated, fixed column order. Files are
// written to a temporary and renamed so failures cannot leave partial output.

void write_space_time_csv(const std::filesystem::path& path, const SpaceTimeField& f);
SpaceTimeField read_space_time_csv(const std::filesystem::path& path);

void write_time_profile_csv(const std::filesystem::path& path, const TimeGrid& tg,
                            const std::vector<double>& values);
std::pair<TimeGrid, std::vector<double>> read_time_profile_csv(const std::filesystem::path& path);

void write_radial_profile_csv(const std::filesystem::path& path, const RadialGrid& rg,
                              const std::vector<double>& values);
std::pair<RadialGrid, std::vector<double>> read_radial_profile_csv(
    const std::filesystem::path& path);

void write_diagnostics_csv(const std::filesystem::path& path,
                           const std::vector<std::pair<std::string, std::string>>& rows);

std::string format_double(double v);

}  // namespace memk
