#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "superres/cluster.hpp"
#include "superres/signal.hpp"

namespace superres {

/// p spikes whose power moments 0..2p-1 equal `mu` (length 2p).
///
/// Solves the Hankel system for the Prony polynomial, takes its roots as
/// nodes, fits the weights on the Vandermonde system, then polishes both
/// with Newton steps on the moment equations. Works in coordinates
/// normalised by the moment scale so small clusters stay well conditioned.
///
/// Throws Error("adversarial", "singular moment matrix") when the Hankel
/// moment matrix is not invertible and Error("adversarial", "perturbation
/// too large") when the polynomial has complex or repeated roots, i.e. no
/// real p-spike signal attains the moments.
SpikeSignal prony_from_moments(std::span<const double> mu);

/// Row of the inverse Vandermonde: entry j = prod_{q != j} (t - t_q) / (t_j - t_q).
std::vector<double> lagrange_row(std::span<const double> t_list, double t);

/// Intermediate results of the cluster perturbation.
struct ClusterPerturbation {
  SpikeSignal perturbed;        ///< in the caller's coordinates
  SpikeSignal blown_original;   ///< centered, nodes multiplied by omega
  SpikeSignal blown_perturbed;  ///< Prony solution in the same frame
  double center = 0.0;          ///< (x_1 + x_p) / 2 removed before blowing up
};

/// Moment-matched perturbation of a positive cluster.
///
/// Centers the cluster, blows it up by omega, shifts its (2p-1)-th moment by
/// `epsilon_tilde` keeping moments 0..2p-2, and maps the Prony solution back.
/// Throws Error("adversarial", "epsilon_tilde exceeds constructible regime").
ClusterPerturbation perturb_cluster_detailed(const SpikeSignal& cluster, double epsilon_tilde, double omega);

SpikeSignal perturb_cluster(const SpikeSignal& cluster, double epsilon_tilde, double omega);

/// Moves every non-cluster spike: a += eps / (4 (d-p)), x += eps / (8 pi omega M (d-p)).
/// Throws Error("adversarial", "no non-cluster part") when d == p.
SpikeSignal shift_noncluster(const SpikeSignal& noncluster, double epsilon, double omega, double m_upper,
                             std::size_t d, std::size_t p);

/// Worst-case pair (F, F_eps) with its verification certificate.
///
/// Displacements are split by node class: `displacement_x` and
/// `displacement_a` are the largest cluster node and amplitude moves, the
/// non-cluster moves are reported separately.
struct AdversarialPair {
  SpikeSignal original;
  SpikeSignal perturbed;
  double epsilon = 0.0;
  double epsilon_tilde = 0.0;
  double omega = 0.0;
  std::size_t cluster_begin = 0;  ///< 0-based index of the first cluster node
  std::size_t cluster_size = 0;
  double cluster_center = 0.0;
  int halvings = 0;
  std::size_t grid_density = 0;

  double sup_norm_achieved = 0.0;   ///< max over the verification grid of |F_eps^ - F^|
  double sup_norm_refined = 0.0;    ///< same on a grid four times denser
  double cluster_sup_norm = 0.0;    ///< cluster part only
  std::vector<double> moment_residuals;  ///< cluster |m_k(F_eps) - m_k(F)|, k = 0..2p-2
  std::vector<double> moment_scales;     ///< max(1, |m_k(F^c)|) for the same k
  double moment_shift = 0.0;        ///< cluster (2p-1)-th moment change times omega^(2p-1)
  double displacement_x = 0.0;
  double displacement_a = 0.0;
  double noncluster_displacement_x = 0.0;
  double noncluster_displacement_a = 0.0;
  bool positive = false;
  bool interleaved = false;
};

/// Assembles F_eps = shifted non-cluster part + perturbed cluster.
///
/// epsilon_tilde starts at epsilon and is halved until the cluster part's
/// Fourier difference is at most epsilon/2 on `grid_density` points of
/// [-omega, omega]. Throws Error("adversarial", "no admissible ε̃
/// found") after 60 halvings and Error("adversarial", "invalid cluster") when
/// F does not satisfy the spec's configuration.
AdversarialPair build_adversarial_pair(const SpikeSignal& signal, const ClusterSpec& spec, double epsilon,
                                       double omega, std::size_t grid_density = 2048);

/// max over `density` equispaced s in [-omega, omega] of |F^(s) - G^(s)|.
double fourier_sup_difference(const SpikeSignal& lhs, const SpikeSignal& rhs, double omega,
                              std::size_t density);

/// True when the sorted union of the two node sets strictly alternates between them.
bool strictly_interleaved(std::span<const double> first, std::span<const double> second);

struct TaylorRow {
  int k = 0;
  double lhs = 0.0;  ///< |m_k(H)| R^k
  double rhs = 0.0;  ///< (2 e k / 2p)^{2p} max_{l < 2p} |m_l(H)| R^l
};

struct TaylorReport {
  bool skipped = false;
  std::string note;
  double radius = 0.0;  ///< R = min_j |t_j|^-1
  std::vector<TaylorRow> rows;
  std::vector<int> violations;  ///< k values where lhs > rhs
};

/// Evaluates the Taylor domination bound for H = F_eps^c - F^c in the
/// centered, blown-up frame, for every k in [2p, k_max].
TaylorReport taylor_domination_check(const AdversarialPair& pair, int k_max);

}  // namespace superres
