#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace superres {

using Complex = std::complex<double>;

/// A finite train of spikes sum_j a_j delta(x - x_j).
///
/// Nodes are real and strictly increasing; amplitudes are complex. Instances
/// are immutable once built and can only be created through `make_signal`,
/// which sorts and validates. `positive()` marks membership in the positive
/// class: every amplitude real with a strictly positive real part.
class SpikeSignal {
 public:
  const std::vector<double>& nodes() const noexcept { return nodes_; }
  const std::vector<Complex>& amplitudes() const noexcept { return amplitudes_; }
  bool positive() const noexcept { return positive_; }
  std::size_t size() const noexcept { return nodes_.size(); }

  /// Real parts of the amplitudes.
  std::vector<double> real_amplitudes() const;

  friend bool operator==(const SpikeSignal&, const SpikeSignal&) = default;

 private:
  friend SpikeSignal make_signal(std::span<const Complex>, std::span<const double>, bool);

  SpikeSignal() = default;

  std::vector<double> nodes_;
  std::vector<Complex> amplitudes_;
  bool positive_ = false;
};

/// Sorts nodes ascending (amplitudes follow) and validates.
///
/// Throws Error("model", "degenerate signal") on duplicate or non-finite
/// nodes, Error("model", "non-positive amplitude") when `require_positive`
/// is set and an amplitude is not a positive real, and
/// Error("model", "invalid argument") on empty or mismatched input.
SpikeSignal make_signal(std::span<const Complex> amplitudes, std::span<const double> nodes,
                        bool require_positive = false);

/// Positive signal from real amplitudes.
SpikeSignal make_positive_signal(std::span<const double> amplitudes, std::span<const double> nodes);

/// Real-amplitude signal; the positive flag is set when every amplitude is > 0.
SpikeSignal make_real_signal(std::span<const double> amplitudes, std::span<const double> nodes);

/// Fourier transform sum_j a_j exp(-2 pi i x_j s).
Complex fourier_at(const SpikeSignal& signal, double s);

/// Power moments m_k = sum_j a_j x_j^k for k = 0..k_max.
std::vector<Complex> moments(const SpikeSignal& signal, int k_max);

/// Power moments of a signal with real amplitudes (imaginary parts ignored).
std::vector<double> real_moments(const SpikeSignal& signal, int k_max);

/// Scaling transform: nodes divided by `factor`, amplitudes unchanged.
SpikeSignal scale_signal(const SpikeSignal& signal, double factor);

/// Every node moved by `offset`.
SpikeSignal translate_signal(const SpikeSignal& signal, double offset);

/// Spikes with index in [first, first + count).
SpikeSignal sub_signal(const SpikeSignal& signal, std::size_t first, std::size_t count);

/// Union of two spike trains with disjoint node sets.
SpikeSignal merge_signals(const SpikeSignal& lhs, const SpikeSignal& rhs);

/// Smallest distance between consecutive nodes; +inf for a single spike.
double min_node_gap(const SpikeSignal& signal);

/// Smallest distance from node `index` to any other node.
double min_gap_to_others(std::span<const double> nodes, std::size_t index);

}  // namespace superres
