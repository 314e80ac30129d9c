#include "superres/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "superres/error.hpp"

namespace superres {

namespace {

[[noreturn]] void malformed(const std::string& why) { throw Error("cli", "malformed input", why); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) malformed(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::vector<double> numbers_from_json(const Json& j) {
  if (!j.is_array()) malformed("expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(number_from_json(v));
  return out;
}

Json numbers_to_json(const std::vector<double>& values) {
  Json arr = Json::array();
  for (double v : values) arr.push_back(number_to_json(v));
  return arr;
}

Json complex_parts(const std::vector<Complex>& values, bool imaginary) {
  Json arr = Json::array();
  for (const auto& v : values) arr.push_back(number_to_json(imaginary ? v.imag() : v.real()));
  return arr;
}

template <typename T>
void read_if(const Json& j, const char* key, T& target) {
  if (j.contains(key)) {
    try {
      target = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      malformed(std::string("field '") + key + "' has the wrong type");
    }
  }
}

void read_number_if(const Json& j, const char* key, double& target) {
  if (j.contains(key)) target = number_from_json(j.at(key));
}

}  // namespace

Json number_to_json(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return value;
}

double number_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  malformed("expected a number");
}

Json to_json(const SpikeSignal& signal) {
  return Json{{"nodes", numbers_to_json(signal.nodes())},
              {"amplitudes_re", complex_parts(signal.amplitudes(), false)},
              {"amplitudes_im", complex_parts(signal.amplitudes(), true)},
              {"positive", signal.positive()}};
}

SpikeSignal signal_from_json(const Json& j) {
  const auto nodes = numbers_from_json(field(j, "nodes"));
  const auto re = numbers_from_json(field(j, "amplitudes_re"));
  std::vector<double> im(re.size(), 0.0);
  if (j.contains("amplitudes_im")) im = numbers_from_json(j.at("amplitudes_im"));
  if (im.size() != re.size()) malformed("amplitude real and imaginary parts differ in length");
  std::vector<Complex> amps;
  for (std::size_t i = 0; i < re.size(); ++i) amps.emplace_back(re[i], im[i]);
  bool require_positive = false;
  read_if(j, "positive", require_positive);
  return make_signal(amps, nodes, require_positive);
}

Json to_json(const MeasurementGrid& grid) {
  return Json{{"omega", grid.omega_max()}, {"n", grid.n_samples()}};
}

MeasurementGrid grid_from_json(const Json& j) {
  const double omega = number_from_json(field(j, "omega"));
  std::size_t n = 0;
  try {
    n = field(j, "n").get<std::size_t>();
  } catch (const nlohmann::json::exception&) {
    malformed("grid size must be a nonnegative integer");
  }
  return MeasurementGrid(omega, n);
}

Json to_json(const Measurement& m) {
  return Json{{"grid", to_json(m.grid)},
              {"epsilon", m.epsilon},
              {"values_re", complex_parts(m.values, false)},
              {"values_im", complex_parts(m.values, true)}};
}

Measurement measurement_from_json(const Json& j) {
  MeasurementGrid grid = grid_from_json(field(j, "grid"));
  const auto re = numbers_from_json(field(j, "values_re"));
  const auto im = numbers_from_json(field(j, "values_im"));
  if (re.size() != im.size() || re.size() != grid.n_samples()) {
    malformed("measurement values do not match the grid size");
  }
  Measurement m{grid, {}, 0.0};
  for (std::size_t i = 0; i < re.size(); ++i) m.values.emplace_back(re[i], im[i]);
  if (j.contains("epsilon")) m.epsilon = number_from_json(j.at("epsilon"));
  return m;
}

Json to_json(const ClusterSpec& s) {
  return Json{{"d", s.d},         {"p", s.p},         {"h", s.h},
              {"big_t", s.big_t}, {"tau", s.tau},     {"eta", s.eta},
              {"kappa", s.kappa}, {"m_lower", s.m_lower}, {"M_upper", s.M_upper}};
}

ClusterSpec cluster_spec_from_json(const Json& j, const ClusterSpec& defaults) {
  if (!j.is_object()) malformed("cluster spec must be an object");
  ClusterSpec s = defaults;
  read_if(j, "d", s.d);
  read_if(j, "p", s.p);
  read_number_if(j, "h", s.h);
  read_number_if(j, "big_t", s.big_t);
  read_number_if(j, "tau", s.tau);
  read_number_if(j, "eta", s.eta);
  read_if(j, "kappa", s.kappa);
  read_number_if(j, "m_lower", s.m_lower);
  read_number_if(j, "M_upper", s.M_upper);
  return s;
}

Json to_json(const ExperimentConfig& c) {
  return Json{{"spec", to_json(c.spec)},
              {"omega", c.omega},
              {"n_samples", c.n_samples},
              {"epsilon_rule",
               Json{{"kind", c.epsilon_rule.kind == EpsilonRule::Kind::fixed ? "fixed" : "rate_bound"},
                    {"value", c.epsilon_rule.value}}},
              {"n_trials", c.n_trials},
              {"srf_sweep", c.srf_sweep},
              {"base_seed", c.base_seed},
              {"quantile", c.quantile},
              {"position_jitter", c.position_jitter},
              {"workers", c.workers}};
}

ExperimentConfig experiment_config_from_json(const Json& j, const ExperimentConfig& defaults) {
  if (!j.is_object()) malformed("experiment config must be an object");
  ExperimentConfig c = defaults;
  if (j.contains("spec")) c.spec = cluster_spec_from_json(j.at("spec"), defaults.spec);
  read_number_if(j, "omega", c.omega);
  read_if(j, "n_samples", c.n_samples);
  if (j.contains("epsilon_rule")) {
    const Json& rule = j.at("epsilon_rule");
    std::string kind = c.epsilon_rule.kind == EpsilonRule::Kind::fixed ? "fixed" : "rate_bound";
    read_if(rule, "kind", kind);
    if (kind == "fixed") {
      c.epsilon_rule.kind = EpsilonRule::Kind::fixed;
    } else if (kind == "rate_bound") {
      c.epsilon_rule.kind = EpsilonRule::Kind::rate_bound;
    } else {
      malformed("epsilon_rule.kind must be 'fixed' or 'rate_bound'");
    }
    read_number_if(rule, "value", c.epsilon_rule.value);
  }
  read_if(j, "n_trials", c.n_trials);
  if (j.contains("srf_sweep")) c.srf_sweep = numbers_from_json(j.at("srf_sweep"));
  read_if(j, "base_seed", c.base_seed);
  read_number_if(j, "quantile", c.quantile);
  read_number_if(j, "position_jitter", c.position_jitter);
  read_if(j, "workers", c.workers);
  return c;
}

Json to_json(const RecoveryResult& r) {
  return Json{{"estimate", to_json(r.estimate)},
              {"diagnostics",
               Json{{"pencil_eigenvalues_re", complex_parts(r.pencil_eigenvalues, false)},
                    {"pencil_eigenvalues_im", complex_parts(r.pencil_eigenvalues, true)},
                    {"singular_upper", numbers_to_json(r.singular_upper)},
                    {"singular_lower", numbers_to_json(r.singular_lower)},
                    {"lsq_residual", number_to_json(r.lsq_residual)},
                    {"condition_hint", number_to_json(r.condition_hint)},
                    {"warnings", r.warnings}}}};
}

Json to_json(const AdversarialPair& p) {
  return Json{{"original", to_json(p.original)},
              {"perturbed", to_json(p.perturbed)},
              {"epsilon", p.epsilon},
              {"epsilon_tilde", p.epsilon_tilde},
              {"omega", p.omega},
              {"cluster_begin", p.cluster_begin},
              {"cluster_size", p.cluster_size},
              {"cluster_center", p.cluster_center},
              {"halvings", p.halvings},
              {"certificate",
               Json{{"grid_density", p.grid_density},
                    {"sup_norm_achieved", p.sup_norm_achieved},
                    {"sup_norm_refined", p.sup_norm_refined},
                    {"cluster_sup_norm", p.cluster_sup_norm},
                    {"moment_residuals", numbers_to_json(p.moment_residuals)},
                    {"moment_scales", numbers_to_json(p.moment_scales)},
                    {"moment_shift", p.moment_shift},
                    {"displacement_x", p.displacement_x},
                    {"displacement_a", p.displacement_a},
                    {"noncluster_displacement_x", p.noncluster_displacement_x},
                    {"noncluster_displacement_a", p.noncluster_displacement_a},
                    {"positive", p.positive},
                    {"interleaved", p.interleaved}}}};
}

Json to_json(const TaylorReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back(Json{{"k", row.k}, {"lhs", number_to_json(row.lhs)}, {"rhs", number_to_json(row.rhs)}});
  }
  return Json{{"skipped", r.skipped},
              {"note", r.note},
              {"radius", number_to_json(r.radius)},
              {"violations", r.violations},
              {"rows", rows}};
}

Json to_json(const DiameterEstimate& e) {
  return Json{{"per_node_diam", e.per_node_diam},
              {"per_amp_diam", e.per_amp_diam},
              {"grid_resolution", e.grid_resolution},
              {"box", Json{{"node", e.box.node}, {"amplitude", e.box.amplitude}}},
              {"node_cell", e.node_cell},
              {"amp_cell", e.amp_cell},
              {"feasible_count", e.feasible_count},
              {"candidate_count", e.candidate_count},
              {"warnings", e.warnings}};
}

Json to_json(const ScalingReport& r) {
  auto fits = [](const std::vector<SlopeFit>& v) {
    Json arr = Json::array();
    for (const auto& f : v) {
      arr.push_back(Json{{"slope", number_to_json(f.slope)},
                         {"intercept", number_to_json(f.intercept)},
                         {"r_squared", number_to_json(f.r_squared)}});
    }
    return arr;
  };
  Json estimates = Json::array();
  for (std::size_t i = 0; i < r.estimates.size(); ++i) {
    Json e = to_json(r.estimates[i]);
    e["epsilon"] = r.epsilons[i];
    estimates.push_back(std::move(e));
  }
  return Json{{"epsilons", r.epsilons},
              {"node_slopes", fits(r.node_slopes)},
              {"amp_slopes", fits(r.amp_slopes)},
              {"warnings", r.warnings},
              {"estimates", estimates}};
}

Json to_json(const TrialRecord& r) {
  Json nodes = Json::array();
  for (const auto& n : r.nodes) {
    nodes.push_back(Json{{"index", n.index},
                         {"cluster", n.cluster},
                         {"e", number_to_json(n.e)},
                         {"succ", n.succ},
                         {"K_x", n.k_x ? Json(*n.k_x) : Json(nullptr)},
                         {"K_a", n.k_a ? Json(*n.k_a) : Json(nullptr)}});
  }
  return Json{{"seed", r.seed},
              {"srf", r.srf},
              {"epsilon", r.epsilon},
              {"failed", r.failed},
              {"error", r.error},
              {"true_nodes", r.true_nodes},
              {"nodes", nodes},
              {"condition_hint", number_to_json(r.condition_hint)},
              {"lsq_residual", number_to_json(r.lsq_residual)}};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cli", "malformed input", "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    malformed(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error("cli", "io failure", "cannot write " + path.string());
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace superres
