#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "superres/signal.hpp"

namespace superres {

/// Geometry of a clustered node configuration plus amplitude bounds.
///
/// Nodes kappa..kappa+p-1 (1-based) form the cluster: pairwise distances in
/// [tau*h, h]. Every other node keeps a distance in [eta*T, T] from all
/// nodes. Amplitudes lie in [m_lower, M_upper].
struct ClusterSpec {
  std::size_t d = 3;
  std::size_t p = 2;
  double h = 0.1;
  double big_t = 1.0;
  double tau = 1.0;
  double eta = 0.25;
  std::size_t kappa = 1;
  double m_lower = 1.0;
  double M_upper = 2.0;

  /// Throws Error("model", "invalid cluster spec") naming the broken bound.
  void validate() const;

  std::size_t cluster_begin() const noexcept { return kappa - 1; }
  bool in_cluster(std::size_t index) const noexcept {
    return index + 1 >= kappa && index + 1 < kappa + p;
  }

  friend bool operator==(const ClusterSpec&, const ClusterSpec&) = default;
};

struct UniformAmplitudes {};  ///< i.i.d. uniform in [m_lower, M_upper]
struct FixedAmplitudes {
  std::vector<double> values;
};
using AmplitudeSource = std::variant<UniformAmplitudes, FixedAmplitudes>;

/// Builds a positive signal in the given clustered configuration.
///
/// Cluster nodes sit at 0, tau*h, ..., (p-1)*tau*h. With L the free length
/// T - (p-1)*tau*h and l = L/(d-p), the non-cluster nodes occupy the
/// midpoints of an equal partition: kappa-1 of them before the cluster at
/// spacing l starting l/2 from its first node, the rest after it likewise.
/// With `centered` the cluster is shifted so x_kappa = -x_{kappa+p-1}.
///
/// Throws Error("model", "infeasible geometry") naming the violated
/// inequality when the spec admits no such layout.
SpikeSignal make_cluster_signal(const ClusterSpec& spec, const AmplitudeSource& amplitudes,
                                std::uint64_t seed, bool centered = false);

struct ClusterReport {
  bool ok = true;
  std::vector<std::string> violations;
};

/// Checks both conditions of the clustered configuration for sorted nodes.
ClusterReport validate_cluster(std::span<const double> nodes, const ClusterSpec& spec);

}  // namespace superres
