#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "superres/signal.hpp"

namespace superres {

/// N equispaced frequencies covering [-omega_max, omega_max] end to end.
class MeasurementGrid {
 public:
  /// Requires omega_max > 0 and n_samples >= 2.
  MeasurementGrid(double omega_max, std::size_t n_samples);

  double omega_max() const noexcept { return omega_max_; }
  std::size_t n_samples() const noexcept { return n_samples_; }
  /// Frequency spacing 2*omega_max / (N - 1).
  double spacing() const noexcept { return spacing_; }
  /// k-th frequency, 0-based; the end points are exactly -omega_max and omega_max.
  double frequency(std::size_t k) const noexcept;
  /// Nodes with |x| below this value are free of aliasing: 1 / (2 * spacing).
  double unambiguous_range() const noexcept { return 0.5 / spacing_; }

  friend bool operator==(const MeasurementGrid&, const MeasurementGrid&) = default;

 private:
  double omega_max_;
  std::size_t n_samples_;
  double spacing_;
};

struct Measurement {
  MeasurementGrid grid;
  std::vector<Complex> values;
  double epsilon = 0.0;
};

/// Noise injected into each sample.
///
/// `uniform_disk` draws every sample independently and uniformly from the
/// closed complex disk of radius epsilon. `callback` evaluates a caller
/// supplied function e(omega); its magnitude must not exceed epsilon.
struct NoiseModel {
  enum class Kind { none, uniform_disk, callback };

  Kind kind = Kind::none;
  std::function<Complex(double)> callback;

  static NoiseModel none() { return {}; }
  static NoiseModel uniform_disk() { return {Kind::uniform_disk, {}}; }
  static NoiseModel adversarial(std::function<Complex(double)> fn) {
    return {Kind::callback, std::move(fn)};
  }
};

/// values[k] = fourier_at(signal, omega_k) + e_k with |e_k| <= epsilon.
///
/// Noise is a pure function of (seed, k). Throws Error("model", "invalid
/// argument") for negative epsilon and Error("model", "noise budget exceeded")
/// when a callback returns a sample larger than epsilon.
Measurement sample_measurement(const SpikeSignal& signal, const MeasurementGrid& grid,
                               double epsilon, const NoiseModel& noise, std::uint64_t seed);

}  // namespace superres
