#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "lightcone/surface.hpp"

namespace lightcone {

/// Deterministic uniform sampling built directly on the mt19937_64 bit
/// stream, so identical seeds give identical points on every platform.
class SampleRng {
 public:
  explicit SampleRng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() { return std::ldexp(static_cast<double>(engine_() >> 11), -53); }
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  /// Uniform point on the unit 2-sphere by rejection from the cube.
  Eigen::Vector3d sphere_point() {
    for (;;) {
      const double x = uniform(-1, 1), y = uniform(-1, 1), z = uniform(-1, 1);
      const double q = x * x + y * y + z * z;
      if (q > 1e-6 && q <= 1.0) {
        const double inv = 1.0 / std::sqrt(q);
        return {x * inv, y * inv, z * inv};
      }
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// Rectangle grid, inset from hard boundaries so finite-difference probes
/// stay admissible.
inline std::vector<ChartPoint> grid_points(const Surface& s, int w, int h) {
  std::vector<ChartPoint> pts;
  pts.reserve(static_cast<std::size_t>(w) * h);
  const double inset = s.rect.hard ? 2e-3 : 0.0;
  const double s_lo = s.rect.s_lo + inset * (s.rect.s_hi - s.rect.s_lo);
  const double s_hi = s.rect.s_hi - inset * (s.rect.s_hi - s.rect.s_lo);
  const double t_lo = s.rect.t_lo + inset * (s.rect.t_hi - s.rect.t_lo);
  const double t_hi = s.rect.t_hi - inset * (s.rect.t_hi - s.rect.t_lo);
  for (int j = 0; j < h; ++j)
    for (int i = 0; i < w; ++i) {
      const double a = w == 1 ? 0.5 : static_cast<double>(i) / (w - 1);
      const double b = h == 1 ? 0.5 : static_cast<double>(j) / (h - 1);
      pts.push_back({0, s_lo + a * (s_hi - s_lo), t_lo + b * (t_hi - t_lo)});
    }
  return pts;
}

/// Seeded random admissible points; rectangle or sphere according to the
/// surface domain.
inline std::vector<ChartPoint> random_points(const Surface& s, int n, std::uint64_t seed) {
  SampleRng rng(seed);
  std::vector<ChartPoint> pts;
  pts.reserve(n);
  if (s.domain == DomainKind::rectangle) {
    const double inset = s.rect.hard ? 2e-3 : 0.0;
    const double ds = inset * (s.rect.s_hi - s.rect.s_lo);
    const double dt = inset * (s.rect.t_hi - s.rect.t_lo);
    for (int i = 0; i < n; ++i)
      pts.push_back({0, rng.uniform(s.rect.s_lo + ds, s.rect.s_hi - ds),
                     rng.uniform(s.rect.t_lo + dt, s.rect.t_hi - dt)});
  } else {
    for (int i = 0; i < n; ++i) pts.push_back(s.chart_point(rng.sphere_point()));
  }
  return pts;
}

/// Default sample of the CLI: 30x30 grid on plane domains, 2000 seeded
/// random points on sphere domains.
inline std::vector<ChartPoint> default_sample(const Surface& s, std::uint64_t seed) {
  if (s.domain == DomainKind::rectangle) return grid_points(s, 30, 30);
  return random_points(s, 2000, seed);
}

}  // namespace lightcone
