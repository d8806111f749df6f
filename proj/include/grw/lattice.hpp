#pragma once

// Regular lattices, particle fields, redistribution of particle counts,
// discrete norms and field serialization.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "grw/errors.hpp"
#include "grw/rng.hpp"

namespace grw {

enum class ZAxis { Up, Down };

// Site (i, j) sits at (x0 + i*dx, z0 + j*dz). Storage is row-major in j.
struct Grid {
  std::size_t nx{1};
  std::size_t nz{1};
  double dx{1.0};
  double dz{1.0};
  double x0{0.0};
  double z0{0.0};
  ZAxis axis{ZAxis::Up};

  static Grid column(std::size_t nz, double dz, double z0 = 0.0, ZAxis axis = ZAxis::Up) {
    return Grid{1, nz, 1.0, dz, 0.0, z0, axis};
  }
  static Grid plane(std::size_t nx, std::size_t nz, double dx, double dz, double x0 = 0.0,
                    double z0 = 0.0) {
    return Grid{nx, nz, dx, dz, x0, z0, ZAxis::Up};
  }

  void validate() const {
    require(nx >= 1 && nz >= 1, "grid: empty lattice");
    require(dx > 0.0 && dz > 0.0, "grid: spacings must be positive");
  }

  std::size_t size() const { return nx * nz; }
  bool is_1d() const { return nx == 1; }
  std::size_t index(std::size_t i, std::size_t j) const { return j * nx + i; }
  double x(std::size_t i) const { return x0 + static_cast<double>(i) * dx; }
  double z(std::size_t j) const { return z0 + static_cast<double>(j) * dz; }
  double cell_volume() const { return is_1d() ? dz : dx * dz; }

  bool same_shape(const Grid& o) const {
    return nx == o.nx && nz == o.nz && dx == o.dx && dz == o.dz;
  }
};

// Scalar values on a grid.
struct Field {
  Grid grid;
  std::vector<double> values;

  Field() = default;
  explicit Field(const Grid& g, double fill = 0.0) : grid(g), values(g.size(), fill) {}
  Field(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
    require(values.size() == grid.size(), "field: value count does not match grid");
  }

  double& at(std::size_t i, std::size_t j) { return values[grid.index(i, j)]; }
  double at(std::size_t i, std::size_t j) const { return values[grid.index(i, j)]; }
  std::size_t size() const { return values.size(); }
};

// Particle counts with the value = n * a / N scaling.
struct ParticleField {
  std::vector<double> counts;
  double n_total{1e24};
  double unit_scale{1.0};

  ParticleField() = default;
  ParticleField(std::size_t n, double n_total_, double unit_scale_ = 1.0)
      : counts(n, 0.0), n_total(n_total_), unit_scale(unit_scale_) {}

  double to_value(double n) const { return n * unit_scale / n_total; }
  double to_count(double v) const { return v * n_total / unit_scale; }
  double value(std::size_t i) const { return to_value(counts[i]); }

  static ParticleField from_values(std::span<const double> v, double n_total_, double unit_scale_ = 1.0) {
    ParticleField f(v.size(), n_total_, unit_scale_);
    for (std::size_t i = 0; i < v.size(); ++i) f.counts[i] = f.to_count(v[i]);
    return f;
  }
  std::vector<double> values() const {
    std::vector<double> out(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) out[i] = value(i);
    return out;
  }
};

enum class RedistributionMode { Deterministic, RemainderCarry, Binomial };

inline const char* to_string(RedistributionMode m) {
  switch (m) {
    case RedistributionMode::Deterministic: return "deterministic";
    case RedistributionMode::RemainderCarry: return "remainder";
    case RedistributionMode::Binomial: return "binomial";
  }
  return "?";
}

// Splits particle counts among destinations. One remainder accumulator per
// stream; the caller chooses how streams map to (site, direction) pairs.
class Redistributor {
 public:
  explicit Redistributor(RedistributionMode mode = RedistributionMode::Deterministic,
                         std::size_t streams = 0, std::uint64_t seed = 0)
      : mode_(mode), remainders_(streams, 0.0), rng_(seed, 0x5EED) {}

  RedistributionMode mode() const { return mode_; }
  std::size_t streams() const { return remainders_.size(); }
  void resize(std::size_t streams) { remainders_.assign(streams, 0.0); }
  void reset() { std::fill(remainders_.begin(), remainders_.end(), 0.0); }
  double remainder(std::size_t stream) const { return remainders_.at(stream); }

  static void check_weights(std::span<const double> w) {
    double sum = 0.0;
    for (double x : w) {
      if (!(x >= 0.0 && x <= 1.0)) throw ContractViolation("redistribute: weight outside [0,1]");
      sum += x;
    }
    if (sum > 1.0 + 1e-12) throw ContractViolation("redistribute: weights sum above 1");
  }

  // Splits n among weights; out[k] receives the share of weights[k]. Streams
  // first_stream .. first_stream+size-1 hold the carried remainders.
  void split(std::span<const double> weights, double n, std::span<double> out,
             std::size_t first_stream = 0) {
    check_weights(weights);
    require(out.size() == weights.size(), "redistribute: output size mismatch");
    switch (mode_) {
      case RedistributionMode::Deterministic:
        for (std::size_t k = 0; k < weights.size(); ++k) out[k] = weights[k] * n;
        return;
      case RedistributionMode::RemainderCarry: {
        const double mag = std::abs(n), sign = n < 0.0 ? -1.0 : 1.0;
        for (std::size_t k = 0; k < weights.size(); ++k) out[k] = sign * carry(weights[k] * mag, first_stream + k);
        return;
      }
      case RedistributionMode::Binomial: {
        const double mag = std::floor(std::abs(n)), sign = n < 0.0 ? -1.0 : 1.0;
        double left = mag, pleft = 1.0;
        for (std::size_t k = 0; k < weights.size(); ++k) {
          const double p = pleft > 0.0 ? std::min(1.0, weights[k] / pleft) : 0.0;
          const double draw = binomial(left, p);
          out[k] = sign * draw;
          left -= draw;
          pleft -= weights[k];
        }
        return;
      }
    }
  }

  std::vector<double> redistribute(std::span<const double> weights, double n, std::size_t first_stream = 0) {
    std::vector<double> out(weights.size());
    split(weights, n, out, first_stream);
    return out;
  }

  // Integer part of x plus any unit released by the stream's running remainder.
  double carry(double x, std::size_t stream) {
    double whole = std::floor(x);
    double& acc = remainders_.at(stream);
    acc += x - whole;
    if (acc >= 1.0) {
      const double extra = std::floor(acc);
      whole += extra;
      acc -= extra;
    }
    return whole;
  }

  // Signed variant for source terms: floor of magnitude, sign restored.
  double carry_signed(double x, std::size_t stream) {
    return x < 0.0 ? -carry(-x, stream) : carry(x, stream);
  }

  double binomial(double n, double p) {
    if (n <= 0.0 || p <= 0.0) return 0.0;
    if (p >= 1.0) return n;
    if (n < 9.0e15) {
      std::binomial_distribution<long long> d(static_cast<long long>(n), p);
      return static_cast<double>(d(rng_));
    }
    // Counts beyond 2^53 are not representable exactly; Gaussian limit.
    std::normal_distribution<double> g(n * p, std::sqrt(n * p * (1.0 - p)));
    return std::clamp(std::round(g(rng_)), 0.0, n);
  }

 private:
  RedistributionMode mode_;
  std::vector<double> remainders_;
  CounterRng rng_;
};

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------

// sqrt(sum v^2 * volume)
inline double l2_norm(std::span<const double> v, double cell_volume = 1.0) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s * cell_volume);
}

inline double l2_norm(const Field& f) { return l2_norm(f.values, f.grid.cell_volume()); }

inline double l2_distance(std::span<const double> a, std::span<const double> b, double cell_volume = 1.0) {
  require(a.size() == b.size(), "l2_distance: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s * cell_volume);
}

inline double relative_error(std::span<const double> v, std::span<const double> ref) {
  const double den = l2_norm(ref);
  if (den == 0.0) throw DomainError("relative_error: reference has zero norm");
  return l2_distance(v, ref) / den;
}

inline double relative_error(const Field& v, const Field& ref) {
  require(v.grid.same_shape(ref.grid), "relative_error: grids differ");
  return relative_error(v.values, ref.values);
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

// CSV: i,j,x,z,<name> with one row per site.
inline void write_field_csv(std::ostream& os, const Grid& g, std::span<const double> v,
                            const std::string& name = "value") {
  require(v.size() == g.size(), "write_field_csv: size mismatch");
  os << "i,j,x,z," << name << "\n" << std::setprecision(17);
  for (std::size_t j = 0; j < g.nz; ++j)
    for (std::size_t i = 0; i < g.nx; ++i)
      os << i << "," << j << "," << g.x(i) << "," << g.z(j) << "," << v[g.index(i, j)] << "\n";
}

// Multi-column variant; columns share the grid.
inline void write_fields_csv(std::ostream& os, const Grid& g,
                             const std::vector<std::pair<std::string, const std::vector<double>*>>& cols) {
  os << "i,j,x,z";
  for (auto& c : cols) {
    require(c.second->size() == g.size(), "write_fields_csv: size mismatch");
    os << "," << c.first;
  }
  os << "\n" << std::setprecision(17);
  for (std::size_t j = 0; j < g.nz; ++j)
    for (std::size_t i = 0; i < g.nx; ++i) {
      os << i << "," << j << "," << g.x(i) << "," << g.z(j);
      for (auto& c : cols) os << "," << (*c.second)[g.index(i, j)];
      os << "\n";
    }
}

// Binary dump layout (little-endian):
//   8 bytes  magic "GRWFLD01"
//   u64 nx, u64 nz, f64 dx, f64 dz
//   nx*nz f64 values, row-major in j
inline constexpr char kFieldMagic[8] = {'G', 'R', 'W', 'F', 'L', 'D', '0', '1'};

namespace detail {
template <class T>
void put_le(std::ostream& os, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}
template <class T>
T get_le(std::istream& is) {
  unsigned char bytes[sizeof(T)];
  is.read(reinterpret_cast<char*>(bytes), sizeof(T));
  if (!is) throw ConfigError("binary field: truncated input");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}
}  // namespace detail

inline void write_field_binary(std::ostream& os, const Grid& g, std::span<const double> v) {
  require(v.size() == g.size(), "write_field_binary: size mismatch");
  os.write(kFieldMagic, sizeof(kFieldMagic));
  detail::put_le<std::uint64_t>(os, g.nx);
  detail::put_le<std::uint64_t>(os, g.nz);
  detail::put_le<double>(os, g.dx);
  detail::put_le<double>(os, g.dz);
  for (double x : v) detail::put_le<double>(os, x);
}

inline Field read_field_binary(std::istream& is) {
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kFieldMagic, 8) != 0) throw ConfigError("binary field: bad magic");
  Grid g;
  g.nx = detail::get_le<std::uint64_t>(is);
  g.nz = detail::get_le<std::uint64_t>(is);
  g.dx = detail::get_le<double>(is);
  g.dz = detail::get_le<double>(is);
  if (g.nx == 0 || g.nz == 0 || g.nx > (1ULL << 32) / g.nz) throw ConfigError("binary field: bad dimensions");
  Field f(g);
  for (auto& x : f.values) x = detail::get_le<double>(is);
  return f;
}

}  // namespace grw
