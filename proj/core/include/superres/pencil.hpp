#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "superres/measurement.hpp"
#include "superres/signal.hpp"

namespace superres {

/// Square Hankel matrix of the samples and its two shifted row blocks.
struct HankelPencil {
  Eigen::MatrixXcd full;   ///< (n_hat+1) x (n_hat+1), full(i, j) = Y[i + j]
  Eigen::MatrixXcd upper;  ///< rows 0..n_hat-1 of `full`
  Eigen::MatrixXcd lower;  ///< rows 1..n_hat of `full`
  std::size_t n_hat = 0;   ///< floor((N - 1) / 2)
};

/// Assembles the Hankel pencil from samples Y[0..2*n_hat].
/// Throws Error("pencil", "pencil needs at least one row") when N < 3.
HankelPencil build_hankel(const Measurement& measurement);

struct ReducedPencil {
  Eigen::MatrixXcd upper;                ///< U2* U1 S1 V1* V2, d x d
  Eigen::MatrixXcd lower;                ///< S2, d x d
  std::vector<double> singular_upper;    ///< sigma_1..sigma_{d+1} of the upper block (when present)
  std::vector<double> singular_lower;    ///< same for the lower block
};

/// Order-d truncated-SVD reduction of the pencil.
///
/// Throws Error("pencil", "invalid argument") unless 1 <= d <= n_hat and
/// Error("pencil", "rank-deficient pencil") when sigma_d of the lower block
/// falls below 1e-13 * sigma_1.
ReducedPencil reduced_pencil(const HankelPencil& pencil, std::size_t d);

/// Generalized eigenvalues z of lower * v = z * upper * v.
/// Throws Error("pencil", "pencil inversion failed") for a singular upper block.
std::vector<Complex> pencil_eigenvalues(const Eigen::MatrixXcd& upper, const Eigen::MatrixXcd& lower);

struct NodeExtraction {
  std::vector<double> nodes;          ///< ascending
  std::vector<Complex> eigenvalues;   ///< reordered to match `nodes`
  std::vector<std::string> warnings;
};

/// x = -arg(z) / (2 pi spacing) on the principal branch, sorted ascending.
///
/// Attaches "aliasing range exceeded" when a node lands within tolerance of
/// the branch cut, and "eigenvalue off unit circle" when |log|z|| > 0.5.
NodeExtraction nodes_from_eigenvalues(std::span<const Complex> eigenvalues, const MeasurementGrid& grid);

struct AmplitudeFit {
  std::vector<Complex> coefficients;  ///< least-squares b
  std::vector<double> magnitudes;     ///< |b_j|
  double residual = 0.0;              ///< ||Y - V b||_2
};

/// Least-squares fit of Y against the Vandermonde columns exp(-2 pi i x_j omega_k).
/// Throws Error("pencil", "rank-deficient Vandermonde") for nodes closer than 1e-12.
AmplitudeFit estimate_amplitudes(const Measurement& measurement, std::span<const double> nodes);

struct RecoveryResult {
  SpikeSignal estimate;
  std::vector<Complex> pencil_eigenvalues;
  std::vector<double> singular_upper;
  std::vector<double> singular_lower;
  double lsq_residual = 0.0;
  double condition_hint = 0.0;  ///< sigma_d / sigma_{d+1} of the lower block; +inf when d = n_hat
  std::vector<std::string> warnings;
};

/// The full Matrix Pencil pipeline. Errors from each step are re-raised
/// with the stage name in their detail.
RecoveryResult recover(const Measurement& measurement, std::size_t d);

}  // namespace superres
