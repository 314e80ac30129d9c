#include "superres/measurement.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "superres/error.hpp"
#include "superres/rng.hpp"

namespace superres {

MeasurementGrid::MeasurementGrid(double omega_max, std::size_t n_samples)
    : omega_max_(omega_max), n_samples_(n_samples), spacing_(0.0) {
  if (!(omega_max > 0.0) || !std::isfinite(omega_max)) {
    throw Error("model", "invalid argument", "cutoff frequency must be positive and finite");
  }
  if (n_samples < 2) {
    throw Error("model", "invalid argument", "a grid needs at least two samples");
  }
  spacing_ = 2.0 * omega_max / static_cast<double>(n_samples - 1);
}

double MeasurementGrid::frequency(std::size_t k) const noexcept {
  if (k + 1 == n_samples_) return omega_max_;
  return -omega_max_ + 2.0 * omega_max_ * static_cast<double>(k) / static_cast<double>(n_samples_ - 1);
}

Measurement sample_measurement(const SpikeSignal& signal, const MeasurementGrid& grid,
                               double epsilon, const NoiseModel& noise, std::uint64_t seed) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw Error("model", "invalid argument", "noise level must be finite and >= 0");
  }
  Measurement out{grid, std::vector<Complex>(grid.n_samples()), epsilon};
  const CounterRng noise_rng = CounterRng(seed).substream(stream_tag::kNoise);

  for (std::size_t k = 0; k < grid.n_samples(); ++k) {
    const double omega = grid.frequency(k);
    Complex value = fourier_at(signal, omega);
    switch (noise.kind) {
      case NoiseModel::Kind::none:
        break;
      case NoiseModel::Kind::uniform_disk: {
        const double u_r = static_cast<double>(noise_rng.bits(2 * k) >> 11) * 0x1.0p-53;
        const double u_t = static_cast<double>(noise_rng.bits(2 * k + 1) >> 11) * 0x1.0p-53;
        value += std::polar(epsilon * std::sqrt(u_r), 2.0 * std::numbers::pi * u_t);
        break;
      }
      case NoiseModel::Kind::callback: {
        const Complex e = noise.callback(omega);
        if (std::abs(e) > epsilon * (1.0 + 1e-12)) {
          throw Error("model", "noise budget exceeded",
                      "callback returned |e| = " + std::to_string(std::abs(e)) +
                          " > epsilon at omega = " + std::to_string(omega));
        }
        value += e;
        break;
      }
    }
    out.values[k] = value;
  }
  return out;
}

}  // namespace superres
