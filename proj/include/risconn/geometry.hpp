#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace risconn {

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

inline double distance(const Point3& p, const Point3& q) {
  const double dx = p.x - q.x;
  const double dy = p.y - q.y;
  const double dz = p.z - q.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

inline double horizontal_distance(const Point3& p, const Point3& q) {
  return std::hypot(p.x - q.x, p.y - q.y);
}

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Wraps an angle into [0, 2*pi).
inline double wrap_two_pi(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

inline double db_from_linear(double ratio) { return 10.0 * std::log10(ratio); }

inline double linear_from_db(double db) { return std::pow(10.0, db / 10.0); }

inline double watts_from_dbm(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

// mt19937_64 with a fixed u64 -> [0,1) mapping so that generated scenarios do
// not depend on the standard library's distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // [0, 1), 53-bit resolution
  double next_unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }

 private:
  std::mt19937_64 gen_;
};

// Radical-inverse (Halton) sequence. Prefixes are stable: point k stays put
// when more points are requested later.
inline double halton(std::uint64_t k, std::uint64_t base) {
  double f = 1.0;
  double r = 0.0;
  while (k > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(k % base);
    k /= base;
  }
  return r;
}

}  // namespace risconn
