#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dwm/dynamics.hpp"
#include "dwm/wave_state.hpp"

namespace dwm {

/// Shortest round-trippable decimal form (17 significant digits).
std::string fmt17(double x);

/// CSV rows (n, Re c_n, Im c_n) under a `# t=<value>` header line.
void write_wave_state_csv(const std::filesystem::path& path, const WaveState& state);
WaveState read_wave_state_csv(const std::filesystem::path& path);

/// CSV rows (n, V_n).
void write_potential_csv(const std::filesystem::path& path,
                         const std::vector<double>& v, int half_width);

/// Columns t, norm, locfrac, overlap, com, tail.
void write_series_csv(const std::filesystem::path& path,
                      const std::vector<SeriesPoint>& series);

/// |c_n| matrix, one row per snapshot, one column per site.
void write_snapshots_csv(const std::filesystem::path& path,
                         const std::vector<WaveState>& snapshots);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace dwm
