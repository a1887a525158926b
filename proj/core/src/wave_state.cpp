#include "dwm/wave_state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dwm {

double norm_sq(const WaveState& state) {
  double s = 0.0;
  for (const auto& c : state.amplitudes) s += std::norm(c);
  return s;
}

std::complex<double> inner_product(const WaveState& a, const WaveState& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("inner_product: states live on different lattices");
  std::complex<double> s = 0.0;
  for (int i = 0; i < a.size(); ++i) s += std::conj(a.amplitudes[i]) * b.amplitudes[i];
  return s;
}

double participation_ratio(const WaveState& state) {
  double p2 = 0.0, p4 = 0.0;
  for (const auto& c : state.amplitudes) {
    const double w = std::norm(c);
    p2 += w;
    p4 += w * w;
  }
  if (p4 == 0.0) throw std::invalid_argument("participation_ratio: zero state");
  return p2 * p2 / p4;
}

double parity_score(const WaveState& state, double center) {
  const double twoc = 2.0 * center;
  const double twoc_r = std::round(twoc);
  if (std::abs(twoc - twoc_r) > 1e-9)
    throw std::invalid_argument(
        "parity_score: center must be an integer or half-integer multiple of a");
  const double nsq = norm_sq(state);
  if (nsq == 0.0) throw std::invalid_argument("parity_score: zero state");

  const int m = state.half_width();
  const long long tc = static_cast<long long>(twoc_r);
  double re = 0.0;
  for (int i = 0; i < state.size(); ++i) {
    const long long n = state.site(i);
    const long long nr = tc - n;  // reflected site
    if (nr < -m || nr > m) continue;
    re += std::real(std::conj(state.amplitudes[i]) *
                    state.amplitudes[static_cast<int>(nr) + m]);
  }
  return re / nsq;
}

double localized_fraction(const WaveState& state, double center, double half_window) {
  const double nsq = norm_sq(state);
  if (nsq == 0.0) throw std::invalid_argument("localized_fraction: zero state");
  double s = 0.0;
  for (int i = 0; i < state.size(); ++i) {
    if (std::abs(state.site(i) - center) <= half_window)
      s += std::norm(state.amplitudes[i]);
  }
  return s / nsq;
}

double edge_occupancy(const WaveState& state, int edge_sites) {
  const int m = state.half_width();
  double s = 0.0;
  for (int i = 0; i < state.size(); ++i) {
    if (std::abs(state.site(i)) > m - edge_sites) s += std::norm(state.amplitudes[i]);
  }
  return s;
}

double center_of_mass(const WaveState& state) {
  const double nsq = norm_sq(state);
  if (nsq == 0.0) throw std::invalid_argument("center_of_mass: zero state");
  double s = 0.0;
  for (int i = 0; i < state.size(); ++i)
    s += state.site(i) * std::norm(state.amplitudes[i]);
  return s / nsq;
}

WaveState normalized(WaveState state) {
  const double n = std::sqrt(norm_sq(state));
  if (n == 0.0) throw std::invalid_argument("normalized: zero state");
  for (auto& c : state.amplitudes) c /= n;
  return state;
}

WaveState shifted_by_sites(const WaveState& state, int delta) {
  WaveState out(state.size(), state.time);
  for (int i = 0; i < state.size(); ++i) {
    const int j = i + delta;
    if (j >= 0 && j < state.size()) out.amplitudes[j] = state.amplitudes[i];
  }
  return out;
}

}  // namespace dwm
