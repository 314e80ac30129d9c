#include "superres/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "superres/error.hpp"
#include "superres/rng.hpp"

namespace superres {
namespace {

// Relative slack for the inequalities; generated layouts hit bounds exactly.
constexpr double kSlack = 1e-12;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

void ClusterSpec::validate() const {
  auto fail = [](const std::string& what) { throw Error("model", "invalid cluster spec", what); };
  if (p < 2) fail("p >= 2");
  if (p > d) fail("p <= d");
  if (!(h > 0.0)) fail("h > 0");
  if (!(h <= big_t)) fail("h <= T");
  if (!(tau > 0.0 && tau <= 1.0)) fail("0 < tau <= 1");
  if (!(eta > 0.0 && eta <= 1.0)) fail("0 < eta <= 1");
  if (kappa < 1 || kappa > d - p + 1) fail("1 <= kappa <= d - p + 1");
  if (!(m_lower > 0.0)) fail("m > 0");
  if (!(m_lower <= M_upper) || !std::isfinite(M_upper)) fail("m <= M < inf");
}

SpikeSignal make_cluster_signal(const ClusterSpec& spec, const AmplitudeSource& amplitudes,
                                std::uint64_t seed, bool centered) {
  spec.validate();
  const std::size_t d = spec.d;
  const std::size_t p = spec.p;
  const double step = spec.tau * spec.h;
  const double span = static_cast<double>(p - 1) * step;

  if (span > spec.h * (1.0 + kSlack)) {
    throw Error("model", "infeasible geometry",
                "(p-1)*tau*h <= h violated: cluster span " + fmt(span) + " > h = " + fmt(spec.h));
  }

  std::vector<double> x(d);
  const std::size_t first = spec.cluster_begin();
  for (std::size_t i = 0; i < p; ++i) x[first + i] = static_cast<double>(i) * step;

  const std::size_t n_free = d - p;
  if (n_free > 0) {
    const double free_len = spec.big_t - span;
    if (!(span < spec.eta * spec.big_t)) {
      throw Error("model", "infeasible geometry",
                  "(p-1)*tau*h < eta*T violated: " + fmt(span) + " >= " + fmt(spec.eta * spec.big_t));
    }
    const double cell = free_len / static_cast<double>(n_free);
    if (0.5 * cell < spec.eta * spec.big_t * (1.0 - kSlack)) {
      throw Error("model", "infeasible geometry",
                  "eta*T <= |x_l - x_j| violated: half partition cell " + fmt(0.5 * cell) +
                      " < eta*T = " + fmt(spec.eta * spec.big_t));
    }
    const std::size_t before = first;
    for (std::size_t i = 0; i < before; ++i) {
      x[first - 1 - i] = -0.5 * cell - static_cast<double>(i) * cell;
    }
    const std::size_t after = n_free - before;
    for (std::size_t i = 0; i < after; ++i) {
      x[first + p + i] = span + 0.5 * cell + static_cast<double>(i) * cell;
    }
  }

  if (centered) {
    const double mid = 0.5 * (x[first] + x[first + p - 1]);
    for (double& v : x) v -= mid;
  }

  std::vector<double> a(d);
  if (std::holds_alternative<FixedAmplitudes>(amplitudes)) {
    const auto& fixed = std::get<FixedAmplitudes>(amplitudes).values;
    if (fixed.size() != d) {
      throw Error("model", "invalid argument", "fixed amplitude count must equal d");
    }
    for (std::size_t j = 0; j < d; ++j) {
      if (!(fixed[j] >= spec.m_lower && fixed[j] <= spec.M_upper)) {
        throw Error("model", "invalid argument",
                    "fixed amplitude " + std::to_string(j + 1) + " outside [m, M]");
      }
    }
    a = fixed;
  } else {
    CounterRng rng = CounterRng(seed).substream(stream_tag::kAmplitudes);
    for (double& v : a) v = rng.uniform(spec.m_lower, spec.M_upper);
  }

  SpikeSignal out = make_positive_signal(a, x);
  const ClusterReport report = validate_cluster(out.nodes(), spec);
  if (!report.ok) {
    throw Error("model", "infeasible geometry", report.violations.front());
  }
  return out;
}

ClusterReport validate_cluster(std::span<const double> nodes, const ClusterSpec& spec) {
  ClusterReport report;
  auto violate = [&](std::string msg) {
    report.ok = false;
    report.violations.push_back(std::move(msg));
  };
  if (nodes.size() != spec.d) {
    violate("expected d = " + std::to_string(spec.d) + " nodes, got " + std::to_string(nodes.size()));
    return report;
  }
  const double lo_c = spec.tau * spec.h * (1.0 - kSlack);
  const double hi_c = spec.h * (1.0 + kSlack);
  const double lo_n = spec.eta * spec.big_t * (1.0 - kSlack);
  const double hi_n = spec.big_t * (1.0 + kSlack);

  auto pair_name = [](std::size_t j, std::size_t k) {
    return "|x" + std::to_string(k + 1) + "-x" + std::to_string(j + 1) + "|";
  };

  // (i) cluster pairs
  for (std::size_t j = 0; j < spec.d; ++j) {
    if (!spec.in_cluster(j)) continue;
    for (std::size_t k = j + 1; k < spec.d; ++k) {
      if (!spec.in_cluster(k)) continue;
      const double dist = std::abs(nodes[k] - nodes[j]);
      if (dist < lo_c) {
        violate("condition (i): " + pair_name(j, k) + " >= tau*h violated (" + fmt(dist) + " < " +
                fmt(spec.tau * spec.h) + ")");
      }
      if (dist > hi_c) {
        violate("condition (i): " + pair_name(j, k) + " <= h violated (" + fmt(dist) + " > " +
                fmt(spec.h) + ")");
      }
    }
  }
  // (ii) every non-cluster node against every other node
  for (std::size_t l = 0; l < spec.d; ++l) {
    if (spec.in_cluster(l)) continue;
    for (std::size_t j = 0; j < spec.d; ++j) {
      if (j == l || (!spec.in_cluster(j) && j < l)) continue;
      const double dist = std::abs(nodes[l] - nodes[j]);
      const auto [lo, hi] = std::minmax(j, l);
      if (dist < lo_n) {
        violate("condition (ii): " + pair_name(lo, hi) + " >= eta*T violated (" + fmt(dist) +
                " < " + fmt(spec.eta * spec.big_t) + ")");
      }
      if (dist > hi_n) {
        violate("condition (ii): " + pair_name(lo, hi) + " <= T violated (" + fmt(dist) + " > " +
                fmt(spec.big_t) + ")");
      }
    }
  }
  return report;
}

}  // namespace superres
