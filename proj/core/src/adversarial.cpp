#include "superres/adversarial.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "superres/error.hpp"

namespace superres {
namespace {

constexpr int kMaxHalvings = 60;
constexpr int kNewtonSteps = 8;
// Roots are compared in normalised coordinates where the cluster has unit size.
constexpr double kImagTolerance = 1e-9;
constexpr double kRootSeparation = 1e-10;

double moment_residual_norm(const Eigen::VectorXd& b, const Eigen::VectorXd& y, const Eigen::VectorXd& nu) {
  const Eigen::Index p = b.size();
  double worst = 0.0;
  for (Eigen::Index k = 0; k < 2 * p; ++k) {
    double m = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) m += b(j) * std::pow(y(j), static_cast<double>(k));
    worst = std::max(worst, std::abs(m - nu(k)));
  }
  return worst;
}

// Newton iteration on sum_j b_j y_j^k = nu_k, k = 0..2p-1.
void polish(Eigen::VectorXd& b, Eigen::VectorXd& y, const Eigen::VectorXd& nu) {
  const Eigen::Index p = b.size();
  double best = moment_residual_norm(b, y, nu);
  for (int step = 0; step < kNewtonSteps && best > 0.0; ++step) {
    Eigen::MatrixXd jac(2 * p, 2 * p);
    Eigen::VectorXd res(2 * p);
    for (Eigen::Index k = 0; k < 2 * p; ++k) {
      double m = 0.0;
      for (Eigen::Index j = 0; j < p; ++j) {
        const double yk = std::pow(y(j), static_cast<double>(k));
        m += b(j) * yk;
        jac(k, j) = yk;
        jac(k, p + j) = k == 0 ? 0.0 : b(j) * static_cast<double>(k) * std::pow(y(j), static_cast<double>(k - 1));
      }
      res(k) = m - nu(k);
    }
    const Eigen::VectorXd delta = jac.fullPivLu().solve(res);
    Eigen::VectorXd b_new = b - delta.head(p);
    Eigen::VectorXd y_new = y - delta.tail(p);
    const double r = moment_residual_norm(b_new, y_new, nu);
    if (!(r < best)) break;
    best = r;
    b = std::move(b_new);
    y = std::move(y_new);
  }
}

long double moment_ld(const SpikeSignal& s, int k) {
  long double m = 0.0L;
  for (std::size_t j = 0; j < s.size(); ++j) {
    long double term = s.amplitudes()[j].real();
    for (int i = 0; i < k; ++i) term *= static_cast<long double>(s.nodes()[j]);
    m += term;
  }
  return m;
}

}  // namespace

SpikeSignal prony_from_moments(std::span<const double> mu) {
  if (mu.size() < 2 || mu.size() % 2 != 0) {
    throw Error("adversarial", "invalid argument", "need 2p moments, p >= 1");
  }
  for (double v : mu) {
    if (!std::isfinite(v)) throw Error("adversarial", "invalid argument", "non-finite moment");
  }
  const auto p = static_cast<Eigen::Index>(mu.size() / 2);

  double scale = 0.0;
  if (mu[0] != 0.0) {
    for (std::size_t k = 1; k < mu.size(); ++k) {
      scale = std::max(scale, std::pow(std::abs(mu[k] / mu[0]), 1.0 / static_cast<double>(k)));
    }
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) scale = 1.0;

  Eigen::VectorXd nu(2 * p);
  for (Eigen::Index k = 0; k < 2 * p; ++k) nu(k) = mu[static_cast<std::size_t>(k)] / std::pow(scale, static_cast<double>(k));

  Eigen::MatrixXd hankel(p, p);
  Eigen::VectorXd rhs(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) hankel(i, j) = nu(i + j);
    rhs(i) = -nu(i + p);
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(hankel);
  const Eigen::JacobiSVD<Eigen::MatrixXd> hsv(hankel);
  const auto& hs = hsv.singularValues();
  if (!lu.isInvertible() || !(hs(p - 1) > 1e-14 * hs(0))) {
    throw Error("adversarial", "singular moment matrix", "Hankel moment matrix is not invertible");
  }
  const Eigen::VectorXd coeff = lu.solve(rhs);

  // Companion matrix of z^p + coeff(p-1) z^{p-1} + ... + coeff(0).
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index i = 1; i < p; ++i) companion(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < p; ++i) companion(i, p - 1) = -coeff(i);
  const Eigen::EigenSolver<Eigen::MatrixXd> eig(companion, false);
  if (eig.info() != Eigen::Success) {
    throw Error("adversarial", "perturbation too large", "root finding did not converge");
  }

  std::vector<double> roots;
  for (Eigen::Index j = 0; j < p; ++j) {
    const std::complex<double> r = eig.eigenvalues()(j);
    if (std::abs(r.imag()) > kImagTolerance * std::max(1.0, std::abs(r))) {
      throw Error("adversarial", "perturbation too large",
                  "no real p-spike attains these moments (complex root)");
    }
    roots.push_back(r.real());
  }
  std::sort(roots.begin(), roots.end());
  for (std::size_t j = 1; j < roots.size(); ++j) {
    if (roots[j] - roots[j - 1] < kRootSeparation) {
      throw Error("adversarial", "perturbation too large",
                  "no real p-spike attains these moments (repeated root)");
    }
  }

  Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(roots.data(), p);
  Eigen::MatrixXd vand(2 * p, p);
  for (Eigen::Index k = 0; k < 2 * p; ++k) {
    for (Eigen::Index j = 0; j < p; ++j) vand(k, j) = std::pow(y(j), static_cast<double>(k));
  }
  Eigen::VectorXd b = vand.colPivHouseholderQr().solve(nu);
  polish(b, y, nu);

  std::vector<double> nodes(static_cast<std::size_t>(p));
  std::vector<double> weights(static_cast<std::size_t>(p));
  for (Eigen::Index j = 0; j < p; ++j) {
    nodes[static_cast<std::size_t>(j)] = y(j) * scale;
    weights[static_cast<std::size_t>(j)] = b(j);
  }
  std::vector<double> check(nodes);
  std::sort(check.begin(), check.end());
  for (std::size_t j = 1; j < check.size(); ++j) {
    if ((check[j] - check[j - 1]) / scale < kRootSeparation) {
      throw Error("adversarial", "perturbation too large",
                  "no real p-spike attains these moments (nodes merged)");
    }
  }
  return make_real_signal(weights, nodes);
}

std::vector<double> lagrange_row(std::span<const double> t_list, double t) {
  for (std::size_t i = 0; i < t_list.size(); ++i) {
    for (std::size_t j = i + 1; j < t_list.size(); ++j) {
      if (t_list[i] == t_list[j]) {
        throw Error("adversarial", "invalid argument", "interpolation nodes must be pairwise distinct");
      }
    }
  }
  std::vector<double> row(t_list.size(), 1.0);
  for (std::size_t j = 0; j < t_list.size(); ++j) {
    for (std::size_t q = 0; q < t_list.size(); ++q) {
      if (q != j) row[j] *= (t - t_list[q]) / (t_list[j] - t_list[q]);
    }
  }
  return row;
}

ClusterPerturbation perturb_cluster_detailed(const SpikeSignal& cluster, double epsilon_tilde, double omega) {
  if (!cluster.positive() || cluster.size() < 2) {
    throw Error("adversarial", "invalid argument", "cluster must be a positive signal with p >= 2 spikes");
  }
  if (!(omega > 0.0) || !std::isfinite(epsilon_tilde) || epsilon_tilde < 0.0) {
    throw Error("adversarial", "invalid argument", "need omega > 0 and epsilon_tilde >= 0");
  }
  const int p = static_cast<int>(cluster.size());
  const double center = 0.5 * (cluster.nodes().front() + cluster.nodes().back());
  SpikeSignal blown = scale_signal(translate_signal(cluster, -center), 1.0 / omega);

  std::vector<double> mu = real_moments(blown, 2 * p - 1);
  mu.back() += epsilon_tilde;

  SpikeSignal solved = [&] {
    try {
      return prony_from_moments(mu);
    } catch (const Error& e) {
      throw Error("adversarial", "epsilon_tilde exceeds constructible regime", e.name() + ": " + e.detail());
    }
  }();
  if (!solved.positive()) {
    throw Error("adversarial", "epsilon_tilde exceeds constructible regime",
                "moment-matched signal has a non-positive amplitude");
  }
  SpikeSignal back = translate_signal(scale_signal(solved, omega), center);
  return ClusterPerturbation{std::move(back), std::move(blown), std::move(solved), center};
}

SpikeSignal perturb_cluster(const SpikeSignal& cluster, double epsilon_tilde, double omega) {
  return perturb_cluster_detailed(cluster, epsilon_tilde, omega).perturbed;
}

SpikeSignal shift_noncluster(const SpikeSignal& noncluster, double epsilon, double omega, double m_upper,
                             std::size_t d, std::size_t p) {
  if (d <= p) throw Error("adversarial", "no non-cluster part", "d = p leaves nothing to shift");
  if (noncluster.size() != d - p) {
    throw Error("adversarial", "invalid argument", "non-cluster part must have d - p spikes");
  }
  if (!noncluster.positive()) throw Error("adversarial", "invalid argument", "non-cluster part must be positive");
  if (!(omega > 0.0) || !(m_upper > 0.0) || !(epsilon >= 0.0)) {
    throw Error("adversarial", "invalid argument", "need omega > 0, M > 0, epsilon >= 0");
  }
  const double count = static_cast<double>(d - p);
  const double da = epsilon / (4.0 * count);
  const double dx = epsilon / (8.0 * std::numbers::pi * omega * m_upper * count);
  std::vector<double> a = noncluster.real_amplitudes();
  std::vector<double> x(noncluster.nodes());
  for (double& v : a) v += da;
  for (double& v : x) v += dx;
  return make_positive_signal(a, x);
}

double fourier_sup_difference(const SpikeSignal& lhs, const SpikeSignal& rhs, double omega, std::size_t density) {
  if (density < 2) throw Error("adversarial", "invalid argument", "verification grid needs >= 2 points");
  double worst = 0.0;
  for (std::size_t i = 0; i < density; ++i) {
    const double s = i + 1 == density ? omega
                                      : -omega + 2.0 * omega * static_cast<double>(i) / static_cast<double>(density - 1);
    worst = std::max(worst, std::abs(fourier_at(lhs, s) - fourier_at(rhs, s)));
  }
  return worst;
}

bool strictly_interleaved(std::span<const double> first, std::span<const double> second) {
  if (first.size() != second.size()) return false;
  std::vector<std::pair<double, int>> all;
  for (double v : first) all.emplace_back(v, 0);
  for (double v : second) all.emplace_back(v, 1);
  std::sort(all.begin(), all.end());
  for (std::size_t i = 1; i < all.size(); ++i) {
    if (!(all[i].first > all[i - 1].first) || all[i].second == all[i - 1].second) return false;
  }
  return true;
}

AdversarialPair build_adversarial_pair(const SpikeSignal& signal, const ClusterSpec& spec, double epsilon,
                                       double omega, std::size_t grid_density) {
  spec.validate();
  if (!signal.positive()) throw Error("adversarial", "invalid argument", "signal must be positive");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon) || !(omega > 0.0)) {
    throw Error("adversarial", "invalid argument", "need epsilon > 0 and omega > 0");
  }
  const ClusterReport report = validate_cluster(signal.nodes(), spec);
  if (!report.ok) throw Error("adversarial", "invalid cluster", report.violations.front());

  const std::size_t first = spec.cluster_begin();
  const std::size_t p = spec.p;
  const SpikeSignal cluster = sub_signal(signal, first, p);

  AdversarialPair pair{.original = signal, .perturbed = signal, .moment_residuals = {}, .moment_scales = {}};
  pair.epsilon = epsilon;
  pair.omega = omega;
  pair.cluster_begin = first;
  pair.cluster_size = p;
  pair.grid_density = grid_density;

  double eps_t = epsilon;
  bool found = false;
  SpikeSignal cluster_eps = cluster;
  for (int halving = 0; halving <= kMaxHalvings; ++halving, eps_t *= 0.5) {
    try {
      ClusterPerturbation trial = perturb_cluster_detailed(cluster, eps_t, omega);
      const double sup = fourier_sup_difference(trial.perturbed, cluster, omega, grid_density);
      if (sup <= 0.5 * epsilon) {
        cluster_eps = std::move(trial.perturbed);
        pair.cluster_center = trial.center;
        pair.cluster_sup_norm = sup;
        pair.epsilon_tilde = eps_t;
        pair.halvings = halving;
        found = true;
        break;
      }
    } catch (const Error& e) {
      if (e.name() != "epsilon_tilde exceeds constructible regime") throw;
    }
  }
  if (!found) {
    throw Error("adversarial", "no admissible ε̃ found",
                "backtracking exhausted " + std::to_string(kMaxHalvings) + " halvings");
  }

  SpikeSignal assembled = cluster_eps;
  if (spec.d > p) {
    std::vector<double> nc_x;
    std::vector<double> nc_a;
    for (std::size_t j = 0; j < signal.size(); ++j) {
      if (spec.in_cluster(j)) continue;
      nc_x.push_back(signal.nodes()[j]);
      nc_a.push_back(signal.amplitudes()[j].real());
    }
    const SpikeSignal nc = make_positive_signal(nc_a, nc_x);
    const SpikeSignal nc_eps = shift_noncluster(nc, epsilon, omega, spec.M_upper, spec.d, p);
    for (std::size_t j = 0; j < nc.size(); ++j) {
      pair.noncluster_displacement_x =
          std::max(pair.noncluster_displacement_x, std::abs(nc_eps.nodes()[j] - nc.nodes()[j]));
      pair.noncluster_displacement_a = std::max(
          pair.noncluster_displacement_a, std::abs(nc_eps.amplitudes()[j].real() - nc.amplitudes()[j].real()));
    }
    assembled = merge_signals(cluster_eps, nc_eps);
  }
  pair.perturbed = std::move(assembled);
  pair.positive = pair.perturbed.positive();

  for (std::size_t j = 0; j < p; ++j) {
    pair.displacement_x = std::max(pair.displacement_x, std::abs(cluster_eps.nodes()[j] - cluster.nodes()[j]));
    pair.displacement_a = std::max(
        pair.displacement_a, std::abs(cluster_eps.amplitudes()[j].real() - cluster.amplitudes()[j].real()));
  }
  pair.interleaved = strictly_interleaved(cluster.nodes(), cluster_eps.nodes());

  const int top = static_cast<int>(2 * p - 1);
  for (int k = 0; k < top; ++k) {
    const long double before = moment_ld(cluster, k);
    const long double after = moment_ld(cluster_eps, k);
    pair.moment_residuals.push_back(static_cast<double>(std::abs(after - before)));
    pair.moment_scales.push_back(std::max(1.0, static_cast<double>(std::abs(before))));
  }
  pair.moment_shift = static_cast<double>((moment_ld(cluster_eps, top) - moment_ld(cluster, top)) *
                                          std::pow(static_cast<long double>(omega), top));

  pair.sup_norm_achieved = fourier_sup_difference(pair.perturbed, signal, omega, grid_density);
  pair.sup_norm_refined = fourier_sup_difference(pair.perturbed, signal, omega, 4 * (grid_density - 1) + 1);
  if (pair.sup_norm_achieved > epsilon) {
    throw Error("adversarial", "certificate failed",
                "Fourier difference " + std::to_string(pair.sup_norm_achieved) + " exceeds epsilon");
  }
  return pair;
}

TaylorReport taylor_domination_check(const AdversarialPair& pair, int k_max) {
  const int p = static_cast<int>(pair.cluster_size);
  if (p < 1 || k_max < 2 * p) {
    throw Error("adversarial", "invalid argument", "k_max must be at least 2p");
  }
  std::vector<double> t;
  std::vector<double> beta;
  for (std::size_t j = pair.cluster_begin; j < pair.cluster_begin + pair.cluster_size; ++j) {
    t.push_back((pair.perturbed.nodes()[j] - pair.cluster_center) * pair.omega);
    beta.push_back(pair.perturbed.amplitudes()[j].real());
    t.push_back((pair.original.nodes()[j] - pair.cluster_center) * pair.omega);
    beta.push_back(-pair.original.amplitudes()[j].real());
  }

  TaylorReport report;
  double reach = 0.0;
  for (double v : t) {
    if (v == 0.0) {
      report.skipped = true;
      report.note = "a node of H sits at the origin; R is undefined";
      return report;
    }
    reach = std::max(reach, std::abs(v));
  }
  report.radius = 1.0 / reach;

  std::vector<double> scaled(static_cast<std::size_t>(k_max) + 1, 0.0);
  for (std::size_t j = 0; j < t.size(); ++j) {
    const double u = t[j] * report.radius;
    double term = beta[j];
    for (int k = 0; k <= k_max; ++k) {
      scaled[static_cast<std::size_t>(k)] += term;
      term *= u;
    }
  }
  double base = 0.0;
  for (int l = 0; l < 2 * p; ++l) base = std::max(base, std::abs(scaled[static_cast<std::size_t>(l)]));

  for (int k = 2 * p; k <= k_max; ++k) {
    const double factor = std::pow(2.0 * std::numbers::e * k / (2.0 * p), 2.0 * p);
    TaylorRow row{k, std::abs(scaled[static_cast<std::size_t>(k)]), factor * base};
    if (row.lhs > row.rhs) report.violations.push_back(k);
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace superres
