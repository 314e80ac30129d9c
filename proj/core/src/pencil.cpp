#include "superres/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "superres/error.hpp"

namespace superres {
namespace {

constexpr double kRankFloor = 1e-13;
constexpr double kMinNodeSeparation = 1e-12;

std::vector<double> leading(const Eigen::VectorXd& sv, std::size_t count) {
  const auto n = std::min<std::size_t>(count, static_cast<std::size_t>(sv.size()));
  return {sv.data(), sv.data() + n};
}

}  // namespace

HankelPencil build_hankel(const Measurement& measurement) {
  const std::size_t n = measurement.values.size();
  if (n != measurement.grid.n_samples()) {
    throw Error("pencil", "invalid argument", "sample count does not match the grid");
  }
  if (n < 3) {
    throw Error("pencil", "pencil needs at least one row", "N = " + std::to_string(n) + " < 3");
  }
  HankelPencil out;
  out.n_hat = (n - 1) / 2;
  const auto size = static_cast<Eigen::Index>(out.n_hat + 1);
  out.full.resize(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    for (Eigen::Index j = 0; j < size; ++j) {
      out.full(i, j) = measurement.values[static_cast<std::size_t>(i + j)];
    }
  }
  out.upper = out.full.topRows(size - 1);
  out.lower = out.full.bottomRows(size - 1);
  return out;
}

ReducedPencil reduced_pencil(const HankelPencil& pencil, std::size_t d) {
  if (d < 1 || d > pencil.n_hat) {
    throw Error("pencil", "invalid argument",
                "model order d = " + std::to_string(d) + " must lie in [1, " +
                    std::to_string(pencil.n_hat) + "]");
  }
  const Eigen::BDCSVD<Eigen::MatrixXcd> svd_u(pencil.upper, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::BDCSVD<Eigen::MatrixXcd> svd_l(pencil.lower, Eigen::ComputeThinU | Eigen::ComputeThinV);

  const auto& s_l = svd_l.singularValues();
  const auto dd = static_cast<Eigen::Index>(d);
  if (!(s_l(dd - 1) >= kRankFloor * s_l(0)) || s_l(0) == 0.0) {
    throw Error("pencil", "rank-deficient pencil",
                "sigma_" + std::to_string(d) + " of the lower block is below 1e-13 * sigma_1");
  }

  const Eigen::MatrixXcd u1 = svd_u.matrixU().leftCols(dd);
  const Eigen::MatrixXcd v1 = svd_u.matrixV().leftCols(dd);
  const Eigen::MatrixXcd u2 = svd_l.matrixU().leftCols(dd);
  const Eigen::MatrixXcd v2 = svd_l.matrixV().leftCols(dd);
  const Eigen::VectorXcd s1 = svd_u.singularValues().head(dd).cast<Complex>();

  ReducedPencil out;
  out.upper = (u2.adjoint() * u1) * s1.asDiagonal() * (v1.adjoint() * v2);
  out.lower = s_l.head(dd).cast<Complex>().asDiagonal();
  out.singular_upper = leading(svd_u.singularValues(), d + 1);
  out.singular_lower = leading(s_l, d + 1);
  return out;
}

std::vector<Complex> pencil_eigenvalues(const Eigen::MatrixXcd& upper, const Eigen::MatrixXcd& lower) {
  if (upper.rows() != upper.cols() || lower.rows() != upper.rows() || lower.cols() != upper.cols()) {
    throw Error("pencil", "invalid argument", "reduced pencil blocks must be square and equal size");
  }
  const Eigen::FullPivLU<Eigen::MatrixXcd> lu(upper);
  const Eigen::JacobiSVD<Eigen::MatrixXcd> sv(upper);
  const auto& s = sv.singularValues();
  if (!lu.isInvertible() || s(s.size() - 1) < 1e-14 * s(0)) {
    throw Error("pencil", "pencil inversion failed", "upper reduced block is numerically singular");
  }
  const Eigen::MatrixXcd product = lu.solve(lower);
  const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(product, false);
  if (eig.info() != Eigen::Success) {
    throw Error("pencil", "pencil inversion failed", "eigenvalue iteration did not converge");
  }
  const auto& ev = eig.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

NodeExtraction nodes_from_eigenvalues(std::span<const Complex> eigenvalues, const MeasurementGrid& grid) {
  const double limit = grid.unambiguous_range();
  const double tol = 1e-9 * limit;
  std::vector<double> raw(eigenvalues.size());
  NodeExtraction out;
  for (std::size_t j = 0; j < eigenvalues.size(); ++j) {
    const Complex z = eigenvalues[j];
    if (!(std::abs(z) > 0.0)) {
      throw Error("pencil", "invalid argument", "zero pencil eigenvalue");
    }
    double angle = std::arg(z);
    if (angle == -std::numbers::pi) angle = std::numbers::pi;
    raw[j] = -angle / (2.0 * std::numbers::pi * grid.spacing());
    if (std::abs(raw[j]) >= limit - tol) {
      out.warnings.push_back("aliasing range exceeded: node " + std::to_string(raw[j]) +
                             " at the branch cut |x| = " + std::to_string(limit));
    }
    if (std::abs(std::log(std::abs(z))) > 0.5) {
      out.warnings.push_back("eigenvalue off unit circle: |z| = " + std::to_string(std::abs(z)));
    }
  }
  std::vector<std::size_t> order(raw.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return raw[a] < raw[b]; });
  for (std::size_t i : order) {
    out.nodes.push_back(raw[i]);
    out.eigenvalues.push_back(eigenvalues[i]);
  }
  return out;
}

AmplitudeFit estimate_amplitudes(const Measurement& measurement, std::span<const double> nodes) {
  if (nodes.empty()) throw Error("pencil", "invalid argument", "no nodes to fit");
  std::vector<double> sorted(nodes.begin(), nodes.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t j = 1; j < sorted.size(); ++j) {
    if (sorted[j] - sorted[j - 1] < kMinNodeSeparation) {
      throw Error("pencil", "rank-deficient Vandermonde", "two nodes closer than 1e-12");
    }
  }

  const auto rows = static_cast<Eigen::Index>(measurement.values.size());
  const auto cols = static_cast<Eigen::Index>(nodes.size());
  Eigen::MatrixXcd v(rows, cols);
  Eigen::VectorXcd y(rows);
  for (Eigen::Index k = 0; k < rows; ++k) {
    const double omega = measurement.grid.frequency(static_cast<std::size_t>(k));
    y(k) = measurement.values[static_cast<std::size_t>(k)];
    for (Eigen::Index j = 0; j < cols; ++j) {
      v(k, j) = std::polar(1.0, -2.0 * std::numbers::pi * nodes[static_cast<std::size_t>(j)] * omega);
    }
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(v);
  if (qr.rank() < cols) {
    throw Error("pencil", "rank-deficient Vandermonde",
                "numerical rank " + std::to_string(qr.rank()) + " < " + std::to_string(cols));
  }
  const Eigen::VectorXcd b = qr.solve(y);

  AmplitudeFit out;
  out.coefficients.assign(b.data(), b.data() + b.size());
  out.magnitudes.resize(out.coefficients.size());
  std::transform(out.coefficients.begin(), out.coefficients.end(), out.magnitudes.begin(),
                 [](const Complex& c) { return std::abs(c); });
  out.residual = (y - v * b).norm();
  return out;
}

RecoveryResult recover(const Measurement& measurement, std::size_t d) {
  auto staged = [](const char* stage, auto&& fn) {
    try {
      return fn();
    } catch (const Error& e) {
      throw e.with_stage(stage);
    }
  };

  const HankelPencil pencil = staged("build_hankel", [&] { return build_hankel(measurement); });
  const ReducedPencil reduced = staged("reduced_pencil", [&] { return reduced_pencil(pencil, d); });
  const std::vector<Complex> z =
      staged("pencil_eigenvalues", [&] { return pencil_eigenvalues(reduced.upper, reduced.lower); });
  NodeExtraction extraction =
      staged("nodes_from_eigenvalues", [&] { return nodes_from_eigenvalues(z, measurement.grid); });
  const AmplitudeFit fit =
      staged("estimate_amplitudes", [&] { return estimate_amplitudes(measurement, extraction.nodes); });

  const bool all_positive =
      std::all_of(fit.magnitudes.begin(), fit.magnitudes.end(), [](double a) { return a > 0.0; });
  std::vector<Complex> amps(fit.magnitudes.begin(), fit.magnitudes.end());
  SpikeSignal estimate =
      staged("estimate_amplitudes", [&] { return make_signal(amps, extraction.nodes, all_positive); });

  const auto& sl = reduced.singular_lower;
  const double hint = sl.size() > d ? sl[d - 1] / sl[d] : std::numeric_limits<double>::infinity();
  return RecoveryResult{std::move(estimate),
                        std::move(extraction.eigenvalues),
                        reduced.singular_upper,
                        reduced.singular_lower,
                        fit.residual,
                        hint,
                        std::move(extraction.warnings)};
}

}  // namespace superres
