#include "superres/signal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "superres/error.hpp"

namespace superres {

std::vector<double> SpikeSignal::real_amplitudes() const {
  std::vector<double> out(amplitudes_.size());
  std::transform(amplitudes_.begin(), amplitudes_.end(), out.begin(),
                 [](const Complex& a) { return a.real(); });
  return out;
}

SpikeSignal make_signal(std::span<const Complex> amplitudes, std::span<const double> nodes,
                        bool require_positive) {
  if (nodes.empty() || nodes.size() != amplitudes.size()) {
    throw Error("model", "invalid argument",
                "need equally many nodes and amplitudes, at least one (got " +
                    std::to_string(nodes.size()) + " nodes, " +
                    std::to_string(amplitudes.size()) + " amplitudes)");
  }

  std::vector<std::size_t> order(nodes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return nodes[i] < nodes[j]; });

  SpikeSignal out;
  out.nodes_.reserve(nodes.size());
  out.amplitudes_.reserve(nodes.size());
  for (std::size_t i : order) {
    if (!std::isfinite(nodes[i])) {
      throw Error("model", "degenerate signal", "non-finite node");
    }
    if (!out.nodes_.empty() && !(nodes[i] > out.nodes_.back())) {
      throw Error("model", "degenerate signal", "duplicate node at " + std::to_string(nodes[i]));
    }
    out.nodes_.push_back(nodes[i]);
    out.amplitudes_.push_back(amplitudes[i]);
  }

  if (require_positive) {
    for (std::size_t j = 0; j < out.amplitudes_.size(); ++j) {
      const Complex& a = out.amplitudes_[j];
      if (a.imag() != 0.0 || !(a.real() > 0.0)) {
        throw Error("model", "non-positive amplitude",
                    "amplitude " + std::to_string(j + 1) + " is not a positive real");
      }
    }
  }
  out.positive_ = require_positive;
  return out;
}

SpikeSignal make_positive_signal(std::span<const double> amplitudes, std::span<const double> nodes) {
  std::vector<Complex> a(amplitudes.begin(), amplitudes.end());
  return make_signal(a, nodes, true);
}

SpikeSignal make_real_signal(std::span<const double> amplitudes, std::span<const double> nodes) {
  std::vector<Complex> a(amplitudes.begin(), amplitudes.end());
  const bool positive = std::all_of(amplitudes.begin(), amplitudes.end(), [](double v) { return v > 0.0; });
  return make_signal(a, nodes, positive);
}

Complex fourier_at(const SpikeSignal& signal, double s) {
  Complex sum{0.0, 0.0};
  const auto& x = signal.nodes();
  const auto& a = signal.amplitudes();
  for (std::size_t j = 0; j < x.size(); ++j) {
    sum += a[j] * std::polar(1.0, -2.0 * std::numbers::pi * x[j] * s);
  }
  return sum;
}

std::vector<Complex> moments(const SpikeSignal& signal, int k_max) {
  if (k_max < 0) throw Error("model", "invalid argument", "k_max must be >= 0");
  std::vector<Complex> m(static_cast<std::size_t>(k_max) + 1, Complex{0.0, 0.0});
  const auto& x = signal.nodes();
  const auto& a = signal.amplitudes();
  for (std::size_t j = 0; j < x.size(); ++j) {
    Complex term = a[j];
    for (int k = 0; k <= k_max; ++k) {
      m[k] += term;
      term *= x[j];
    }
  }
  return m;
}

std::vector<double> real_moments(const SpikeSignal& signal, int k_max) {
  if (k_max < 0) throw Error("model", "invalid argument", "k_max must be >= 0");
  std::vector<double> m(static_cast<std::size_t>(k_max) + 1, 0.0);
  const auto& x = signal.nodes();
  const auto& a = signal.amplitudes();
  for (std::size_t j = 0; j < x.size(); ++j) {
    double term = a[j].real();
    for (int k = 0; k <= k_max; ++k) {
      m[k] += term;
      term *= x[j];
    }
  }
  return m;
}

SpikeSignal scale_signal(const SpikeSignal& signal, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw Error("model", "invalid argument", "scale factor must be positive and finite");
  }
  std::vector<double> x(signal.nodes());
  for (double& v : x) v /= factor;
  return make_signal(signal.amplitudes(), x, signal.positive());
}

SpikeSignal translate_signal(const SpikeSignal& signal, double offset) {
  std::vector<double> x(signal.nodes());
  for (double& v : x) v += offset;
  return make_signal(signal.amplitudes(), x, signal.positive());
}

SpikeSignal sub_signal(const SpikeSignal& signal, std::size_t first, std::size_t count) {
  if (count == 0 || first + count > signal.size()) {
    throw Error("model", "invalid argument", "sub-signal range out of bounds");
  }
  std::span<const double> x(signal.nodes().data() + first, count);
  std::span<const Complex> a(signal.amplitudes().data() + first, count);
  return make_signal(a, x, signal.positive());
}

SpikeSignal merge_signals(const SpikeSignal& lhs, const SpikeSignal& rhs) {
  std::vector<double> x(lhs.nodes());
  x.insert(x.end(), rhs.nodes().begin(), rhs.nodes().end());
  std::vector<Complex> a(lhs.amplitudes());
  a.insert(a.end(), rhs.amplitudes().begin(), rhs.amplitudes().end());
  return make_signal(a, x, lhs.positive() && rhs.positive());
}

double min_node_gap(const SpikeSignal& signal) {
  double gap = std::numeric_limits<double>::infinity();
  const auto& x = signal.nodes();
  for (std::size_t j = 1; j < x.size(); ++j) gap = std::min(gap, x[j] - x[j - 1]);
  return gap;
}

double min_gap_to_others(std::span<const double> nodes, std::size_t index) {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < nodes.size(); ++l) {
    if (l != index) gap = std::min(gap, std::abs(nodes[l] - nodes[index]));
  }
  return gap;
}

}  // namespace superres
