#include "dwm/csv_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dwm {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);  // '\n' endings everywhere
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

}  // namespace

void write_wave_state_csv(const std::filesystem::path& path, const WaveState& state) {
  auto out = open_out(path);
  out << "# t=" << fmt17(state.time) << "\n";
  for (int i = 0; i < state.size(); ++i) {
    out << state.site(i) << "," << fmt17(state.amplitudes[i].real()) << ","
        << fmt17(state.amplitudes[i].imag()) << "\n";
  }
}

WaveState read_wave_state_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  std::string line;
  double t = 0.0;
  std::vector<std::complex<double>> amps;
  long long first_site = 0;
  bool have_first = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("t=");
      if (pos != std::string::npos) t = std::stod(line.substr(pos + 2));
      continue;
    }
    std::istringstream ss(line);
    std::string tok;
    double vals[3] = {0, 0, 0};
    for (int k = 0; k < 3 && std::getline(ss, tok, ','); ++k) vals[k] = std::stod(tok);
    if (!have_first) {
      first_site = static_cast<long long>(vals[0]);
      have_first = true;
    }
    amps.emplace_back(vals[1], vals[2]);
  }
  if (amps.empty()) throw std::runtime_error("empty wave-state file: " + path.string());
  if (first_site != -(static_cast<long long>(amps.size()) - 1) / 2)
    throw std::runtime_error("wave-state file is not on a symmetric lattice: " +
                             path.string());
  WaveState s(static_cast<int>(amps.size()), t);
  s.amplitudes = std::move(amps);
  return s;
}

void write_potential_csv(const std::filesystem::path& path,
                         const std::vector<double>& v, int half_width) {
  auto out = open_out(path);
  for (std::size_t i = 0; i < v.size(); ++i) {
    out << (static_cast<long long>(i) - half_width) << "," << fmt17(v[i]) << "\n";
  }
}

void write_series_csv(const std::filesystem::path& path,
                      const std::vector<SeriesPoint>& series) {
  auto out = open_out(path);
  out << "# t,norm,locfrac,overlap,com,tail\n";
  for (const auto& p : series) {
    out << fmt17(p.t) << "," << fmt17(p.norm_sq) << "," << fmt17(p.localized_fraction)
        << "," << fmt17(p.comoving_overlap) << "," << fmt17(p.center_of_mass) << ","
        << fmt17(p.tail_norm) << "\n";
  }
}

void write_snapshots_csv(const std::filesystem::path& path,
                         const std::vector<WaveState>& snapshots) {
  auto out = open_out(path);
  for (const auto& s : snapshots) {
    for (int i = 0; i < s.size(); ++i) {
      if (i) out << ",";
      out << fmt17(std::abs(s.amplitudes[i]));
    }
    out << "\n";
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
}

}  // namespace dwm
