#include "superres/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "superres/error.hpp"
#include "superres/parallel.hpp"

namespace superres {

namespace {

struct Partial {
  std::vector<double> lo;  // per coordinate: nodes then amplitudes
  std::vector<double> hi;
  std::size_t feasible = 0;
  std::size_t candidates = 0;
  bool touches_boundary = false;
};

void merge_into(Partial& acc, const Partial& part) {
  for (std::size_t c = 0; c < acc.lo.size(); ++c) {
    acc.lo[c] = std::min(acc.lo[c], part.lo[c]);
    acc.hi[c] = std::max(acc.hi[c], part.hi[c]);
  }
  acc.feasible += part.feasible;
  acc.candidates += part.candidates;
  acc.touches_boundary = acc.touches_boundary || part.touches_boundary;
}

}  // namespace

SearchBox proportional_box(std::size_t d, double epsilon, double omega, const OracleConfig& config) {
  SearchBox box;
  box.node.assign(d, config.node_box_factor * epsilon / omega);
  box.amplitude.assign(d, config.amp_box_factor * epsilon);
  return box;
}

DiameterEstimate error_set_diameters(const SpikeSignal& signal, double epsilon, double omega,
                                     const SearchBox& box, int grid_resolution, std::size_t s_samples,
                                     std::size_t workers) {
  const std::size_t d = signal.size();
  if (d == 0 || d > 2) throw Error("oracle", "invalid argument", "brute force supports 1 or 2 spikes");
  if (!signal.positive()) throw Error("oracle", "non-positive amplitude", "oracle searches positive signals only");
  if (grid_resolution < 2 || grid_resolution > kMaxOracleResolution) {
    throw Error("oracle", "invalid argument", "grid resolution must lie in [2, 80]");
  }
  if (!(epsilon >= 0.0) || !(omega > 0.0) || s_samples < 2) {
    throw Error("oracle", "invalid argument", "need epsilon >= 0, omega > 0 and at least 2 samples");
  }
  if (box.node.size() != d || box.amplitude.size() != d) {
    throw Error("oracle", "invalid argument", "search box must give one half-width per spike");
  }
  for (std::size_t j = 0; j < d; ++j) {
    if (!(box.node[j] >= 0.0) || !(box.amplitude[j] >= 0.0)) {
      throw Error("oracle", "invalid argument", "search box half-widths must be nonnegative");
    }
  }

  const int half = grid_resolution / 2;
  const std::size_t levels = static_cast<std::size_t>(2 * half + 1);
  const auto& x0 = signal.nodes();
  const std::vector<double> a0 = signal.real_amplitudes();

  DiameterEstimate out;
  out.grid_resolution = grid_resolution;
  out.box = box;
  std::vector<std::vector<double>> node_levels(d);
  std::vector<std::vector<double>> amp_levels(d);
  for (std::size_t j = 0; j < d; ++j) {
    out.node_cell.push_back(box.node[j] / half);
    out.amp_cell.push_back(box.amplitude[j] / half);
    for (int k = -half; k <= half; ++k) {
      node_levels[j].push_back(x0[j] + k * out.node_cell[j]);
      amp_levels[j].push_back(a0[j] + k * out.amp_cell[j]);
    }
  }

  // Samples ordered by decreasing |s|: the outer frequencies reject most
  // candidates, so the early exit triggers sooner.
  std::vector<double> s(s_samples);
  for (std::size_t i = 0; i < s_samples; ++i) {
    s[i] = -omega + 2.0 * omega * static_cast<double>(i) / static_cast<double>(s_samples - 1);
  }
  std::stable_sort(s.begin(), s.end(), [](double l, double r) { return std::abs(l) > std::abs(r); });

  std::vector<Complex> target(s_samples);
  for (std::size_t i = 0; i < s_samples; ++i) target[i] = fourier_at(signal, s[i]);

  // table[j][level * S + i] = exp(-2 pi i x_j(level) s_i)
  std::vector<std::vector<Complex>> table(d, std::vector<Complex>(levels * s_samples));
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t l = 0; l < levels; ++l) {
      for (std::size_t i = 0; i < s_samples; ++i) {
        table[j][l * s_samples + i] = std::polar(1.0, -2.0 * std::numbers::pi * node_levels[j][l] * s[i]);
      }
    }
  }

  const double min_gap = d == 2 ? std::min(out.node_cell[0], out.node_cell[1]) : 0.0;
  const std::size_t centre = static_cast<std::size_t>(half);
  const std::size_t edge = levels - 1;
  const std::size_t coords = 2 * d;

  auto empty_partial = [&] {
    Partial p;
    p.lo.assign(coords, std::numeric_limits<double>::infinity());
    p.hi.assign(coords, -std::numeric_limits<double>::infinity());
    return p;
  };

  auto chunk = [&](std::size_t begin, std::size_t end) {
    Partial p = empty_partial();
    std::vector<std::size_t> idx(coords);  // node levels then amplitude levels
    std::vector<Complex> node_sum(s_samples);
    auto record = [&] {
      ++p.feasible;
      for (std::size_t j = 0; j < d; ++j) {
        const double x = node_levels[j][idx[j]];
        const double a = amp_levels[j][idx[d + j]];
        p.lo[j] = std::min(p.lo[j], x);
        p.hi[j] = std::max(p.hi[j], x);
        p.lo[d + j] = std::min(p.lo[d + j], a);
        p.hi[d + j] = std::max(p.hi[d + j], a);
      }
      for (std::size_t c = 0; c < coords; ++c) {
        if ((idx[c] == 0 || idx[c] == edge) && edge > 0) p.touches_boundary = true;
      }
    };
    auto amplitudes_positive = [&] {
      for (std::size_t j = 0; j < d; ++j) {
        if (!(amp_levels[j][idx[d + j]] > 0.0)) return false;
      }
      return true;
    };
    auto feasible = [&] {
      for (std::size_t i = 0; i < s_samples; ++i) {
        Complex v{};
        for (std::size_t j = 0; j < d; ++j) {
          v += amp_levels[j][idx[d + j]] * table[j][idx[j] * s_samples + i];
        }
        if (std::abs(v - target[i]) > epsilon) return false;
      }
      return true;
    };
    auto is_centre = [&] {
      return std::all_of(idx.begin(), idx.end(), [&](std::size_t v) { return v == centre; });
    };
    auto scan_amplitudes = [&] {
      if (d == 1) {
        for (idx[1] = 0; idx[1] < levels; ++idx[1]) {
          if (!amplitudes_positive()) continue;
          ++p.candidates;
          if (is_centre() || feasible()) record();
        }
        return;
      }
      for (idx[2] = 0; idx[2] < levels; ++idx[2]) {
        for (idx[3] = 0; idx[3] < levels; ++idx[3]) {
          if (!amplitudes_positive()) continue;
          ++p.candidates;
          if (is_centre() || feasible()) record();
        }
      }
    };
    for (std::size_t l0 = begin; l0 < end; ++l0) {
      idx[0] = l0;
      if (d == 1) {
        scan_amplitudes();
        continue;
      }
      for (idx[1] = 0; idx[1] < levels; ++idx[1]) {
        if (node_levels[1][idx[1]] - node_levels[0][idx[0]] < min_gap * (1.0 - 1e-9)) continue;
        scan_amplitudes();
      }
    }
    return p;
  };

  const auto parts = parallel_chunks<Partial>(levels, workers, chunk);
  Partial total = empty_partial();
  for (const auto& part : parts) merge_into(total, part);

  out.feasible_count = total.feasible;
  out.candidate_count = total.candidates;
  for (std::size_t j = 0; j < d; ++j) {
    out.per_node_diam.push_back(total.hi[j] - total.lo[j]);
    out.per_amp_diam.push_back(total.hi[d + j] - total.lo[d + j]);
  }
  if (epsilon > 0.0 && total.feasible <= 1) {
    out.warnings.emplace_back("resolution insufficient");
  }
  if (total.touches_boundary) {
    out.warnings.emplace_back("feasible set reaches the search box boundary; diameters are truncated");
  }
  return out;
}

ScalingReport diameter_epsilon_scaling(const SpikeSignal& signal, double omega,
                                       const std::vector<double>& epsilons, const OracleConfig& config) {
  if (epsilons.size() < 2) throw Error("oracle", "invalid argument", "scaling sweep needs two epsilons");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0) || (i > 0 && !(epsilons[i] > epsilons[i - 1]))) {
      throw Error("oracle", "invalid argument", "epsilons must be positive and increasing");
    }
  }
  ScalingReport report;
  report.epsilons = epsilons;
  const std::size_t d = signal.size();
  for (double eps : epsilons) {
    auto est = error_set_diameters(signal, eps, omega, proportional_box(d, eps, omega, config),
                                   config.grid_resolution, config.s_samples, config.workers);
    for (const auto& w : est.warnings) report.warnings.push_back("epsilon " + std::to_string(eps) + ": " + w);
    report.estimates.push_back(std::move(est));
  }
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<std::pair<double, double>> node_pts;
    std::vector<std::pair<double, double>> amp_pts;
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
      node_pts.emplace_back(epsilons[i], report.estimates[i].per_node_diam[j]);
      amp_pts.emplace_back(epsilons[i], report.estimates[i].per_amp_diam[j]);
    }
    auto safe_fit = [&](const std::vector<std::pair<double, double>>& pts, const char* what) {
      try {
        return fit_slope(pts);
      } catch (const Error&) {
        report.warnings.push_back(std::string("zero ") + what + " diameter; slope not fitted");
        return SlopeFit{std::nan(""), std::nan(""), 0.0};
      }
    };
    report.node_slopes.push_back(safe_fit(node_pts, "node"));
    report.amp_slopes.push_back(safe_fit(amp_pts, "amplitude"));
  }
  return report;
}

}  // namespace superres
