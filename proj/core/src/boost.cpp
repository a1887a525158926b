#include "dwm/boost.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace dwm {
namespace {

constexpr double kPi = std::numbers::pi;

double w_prime(double k, double v) { return 2.0 * std::sin(k) - v; }
double w_second(double k) { return 2.0 * std::cos(k); }

/// Bisection of W' on a bracket where it is strictly monotone; returns the
/// root, or NaN when there is no sign change inside. Endpoint values within
/// rounding of zero (sin at multiples of pi) count as roots.
double bisect_w_prime(double lo, double hi, double v) {
  constexpr double end_tol = 1e-14;
  double flo = w_prime(lo, v);
  double fhi = w_prime(hi, v);
  if (std::abs(flo) <= end_tol) return lo;
  if (std::abs(fhi) <= end_tol) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) return std::nan("");
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    const double fm = w_prime(mid, v);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

BeyondCriticalVelocity::BeyondCriticalVelocity(double v)
    : std::domain_error("|v| = " + std::to_string(std::abs(v)) +
                        " exceeds the critical drift velocity 2 (kappa*a); "
                        "sin(qa) = v/2 has no real solution"),
      v_(v) {}

BoostParameters solve_boost(double v) {
  if (!(std::abs(v) <= 2.0)) throw BeyondCriticalVelocity(v);
  BoostParameters bp;
  bp.v = v;
  const double s = 0.5 * v;
  bp.qa = std::asin(s);  // principal branch keeps cos(qa) >= 0, so m* > 0
  const double c = std::sqrt(1.0 - s * s);
  bp.mass_ratio = 1.0 / c;  // +inf exactly at the critical velocity
  bp.gamma = -v * bp.qa + 2.0 * (1.0 - c);
  return bp;
}

double effective_depth(double nu, double mass_ratio) {
  if (!(nu > 0.0)) throw std::invalid_argument("effective_depth: nu must be > 0");
  if (!(mass_ratio >= 1.0))
    throw std::invalid_argument("effective_depth: mass ratio must be >= 1");
  return 0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * mass_ratio * nu * (nu + 1.0)));
}

double dispersion(double k, const BoostParameters& bp) {
  return 4.0 * std::sin(0.5 * (k + 2.0 * bp.qa)) * std::sin(0.5 * k) - bp.v * k;
}

double momentum_potential(double k, double v) {
  return 2.0 * (1.0 - std::cos(k)) - v * k;
}

std::vector<MomentumExtremum> momentum_potential_extrema(double v) {
  if (v < 0.0) throw std::invalid_argument("momentum_potential_extrema: v must be >= 0");
  std::vector<MomentumExtremum> out;
  if (v > 2.0) return out;  // W' = 2 sin k - v never vanishes

  if (v == 2.0) {
    // W' touches zero without crossing: W' = W'' = 0 at k = pi/2 (mod 2pi).
    for (double k : {-1.5 * kPi, 0.5 * kPi})
      out.push_back({k, momentum_potential(k, v), ExtremumKind::Degenerate});
    return out;
  }

  // One root of W' per monotone half-period of sin k inside [-2pi, 2pi].
  const double edges[] = {-2.0 * kPi, -1.5 * kPi, -0.5 * kPi, 0.5 * kPi, 1.5 * kPi, 2.0 * kPi};
  double prev_k = std::nan("");
  for (int i = 0; i + 1 < 6; ++i) {
    const double k = bisect_w_prime(edges[i], edges[i + 1], v);
    if (std::isnan(k)) continue;
    if (!std::isnan(prev_k) && std::abs(k - prev_k) < 1e-9) continue;
    prev_k = k;
    const double w2 = w_second(k);
    ExtremumKind kind = ExtremumKind::Degenerate;
    if (w2 > 1e-8) kind = ExtremumKind::Minimum;
    else if (w2 < -1e-8) kind = ExtremumKind::Maximum;
    out.push_back({k, momentum_potential(k, v), kind});
  }
  return out;
}

WaveState boosted_initial_state(const WaveState& phi, const BoostParameters& bp) {
  WaveState out = phi;
  for (int i = 0; i < out.size(); ++i) {
    const double phase = bp.qa * out.site(i);
    out.amplitudes[i] *= std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return out;
}

}  // namespace dwm
