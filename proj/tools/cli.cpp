#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "superres/adversarial.hpp"
#include "superres/cluster.hpp"
#include "superres/csv.hpp"
#include "superres/error.hpp"
#include "superres/experiments.hpp"
#include "superres/io.hpp"
#include "superres/measurement.hpp"
#include "superres/oracle.hpp"
#include "superres/pencil.hpp"
#include "superres/svg.hpp"
#include "superres/version.hpp"

namespace superres::cli {

namespace fs = std::filesystem;

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

std::string closest_match(std::string_view word, const std::vector<std::string>& candidates) {
  std::string best;
  std::size_t best_distance = std::max<std::size_t>(2, word.size() / 3) + 1;
  for (const auto& c : candidates) {
    const std::size_t dist = edit_distance(word, c);
    if (dist < best_distance) {
      best_distance = dist;
      best = c;
    }
  }
  return best;
}

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Kind { real, count, seed, text, real_list, flag };

struct Param {
  std::string key;
  Kind kind;
  Json fallback;
  std::string help;

  std::string flag() const {
    std::string f = "--" + key;
    std::replace(f.begin(), f.end(), '_', '-');
    return f;
  }
};

struct RunContext {
  std::ostream& out;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  fs::path manifest_path;  // set by commands that write a directory of outputs
};

using Handler = std::function<void(const Json&, RunContext&)>;

struct Command {
  std::string name;
  std::string description;
  std::vector<Param> params;
  Handler handler;
};

// ---- parameter tables -------------------------------------------------------

std::vector<Param> cluster_params(const ClusterSpec& s, bool with_h) {
  std::vector<Param> p{
      {"d", Kind::count, s.d, "number of spikes"},
      {"p", Kind::count, s.p, "number of spikes in the cluster"},
  };
  if (with_h) p.push_back({"h", Kind::real, s.h, "cluster extent h"});
  p.insert(p.end(), {
                        {"tau", Kind::real, s.tau, "minimal cluster gap as a fraction of h"},
                        {"eta", Kind::real, s.eta, "non-cluster separation as a fraction of T"},
                        {"big_t", Kind::real, s.big_t, "support length T"},
                        {"kappa", Kind::count, s.kappa, "1-based index of the first cluster spike"},
                        {"m_lower", Kind::real, s.m_lower, "lower amplitude bound m"},
                        {"M_upper", Kind::real, s.M_upper, "upper amplitude bound M"},
                    });
  return p;
}

Param seed_param() { return {"seed", Kind::seed, 1, "random seed (default from SUPERRES_SEED, else 1)"}; }
Param output_param() { return {"output", Kind::text, "", "output file (stdout when omitted)"}; }
Param input_param(const std::string& what) { return {"input", Kind::text, "", what}; }

ClusterSpec spec_from(const Json& cfg, const ClusterSpec& base) {
  ClusterSpec s = base;
  s.d = cfg.at("d").get<std::size_t>();
  s.p = cfg.at("p").get<std::size_t>();
  if (cfg.contains("h")) s.h = cfg.at("h").get<double>();
  s.tau = cfg.at("tau").get<double>();
  s.eta = cfg.at("eta").get<double>();
  s.big_t = cfg.at("big_t").get<double>();
  s.kappa = cfg.at("kappa").get<std::size_t>();
  s.m_lower = cfg.at("m_lower").get<double>();
  s.M_upper = cfg.at("M_upper").get<double>();
  return s;
}

std::string text(const Json& cfg, const char* key) { return cfg.at(key).get<std::string>(); }

void emit_json(RunContext& ctx, const std::string& path, const Json& j) {
  if (path.empty()) {
    ctx.out << j.dump(2) << '\n';
    return;
  }
  write_json_file(path, j);
  ctx.outputs.push_back(path);
}

SpikeSignal load_signal(RunContext& ctx, const std::string& path) {
  ctx.inputs.push_back(path);
  return signal_from_json(read_json_file(path));
}

// ---- commands -----------------------------------------------------------------

void run_generate(const Json& cfg, RunContext& ctx) {
  const ClusterSpec spec = spec_from(cfg, {});
  const SpikeSignal signal =
      make_cluster_signal(spec, UniformAmplitudes{}, cfg.at("seed").get<std::uint64_t>(), cfg.at("centered").get<bool>());
  emit_json(ctx, text(cfg, "output"), to_json(signal));
}

void run_sample(const Json& cfg, RunContext& ctx) {
  const std::string input = text(cfg, "input");
  if (input.empty()) throw UsageError("sample needs --input <signal.json>");
  const SpikeSignal signal = load_signal(ctx, input);
  const std::string noise_name = text(cfg, "noise");
  NoiseModel noise;
  if (noise_name == "disk") {
    noise = NoiseModel::uniform_disk();
  } else if (noise_name != "none") {
    throw UsageError("--noise must be 'disk' or 'none'");
  }
  const MeasurementGrid grid(cfg.at("omega").get<double>(), cfg.at("n_samples").get<std::size_t>());
  const Measurement m =
      sample_measurement(signal, grid, cfg.at("epsilon").get<double>(), noise, cfg.at("seed").get<std::uint64_t>());
  emit_json(ctx, text(cfg, "output"), to_json(m));
}

void run_recover(const Json& cfg, RunContext& ctx) {
  const std::string input = text(cfg, "input");
  if (input.empty()) throw UsageError("recover needs --input <measurement.json>");
  ctx.inputs.push_back(input);
  const Measurement m = measurement_from_json(read_json_file(input));
  emit_json(ctx, text(cfg, "output"), to_json(recover(m, cfg.at("d").get<std::size_t>())));
}

void run_adversarial(const Json& cfg, RunContext& ctx) {
  const ClusterSpec spec = spec_from(cfg, {});
  const std::string input = text(cfg, "input");
  const SpikeSignal signal = input.empty()
                                 ? make_cluster_signal(spec, UniformAmplitudes{}, cfg.at("seed").get<std::uint64_t>(), true)
                                 : load_signal(ctx, input);
  const AdversarialPair pair =
      build_adversarial_pair(signal, spec, cfg.at("epsilon").get<double>(), cfg.at("omega").get<double>(),
                             cfg.at("grid_density").get<std::size_t>());
  Json j = to_json(pair);
  j["taylor"] = to_json(taylor_domination_check(pair, static_cast<int>(cfg.at("taylor_kmax").get<std::size_t>())));
  emit_json(ctx, text(cfg, "output"), j);
}

void write_oracle_csv(const fs::path& path, const std::vector<double>& eps,
                      const std::vector<DiameterEstimate>& estimates, RunContext& ctx) {
  std::ostringstream csv;
  const std::size_t d = estimates.front().per_node_diam.size();
  csv << "epsilon";
  for (std::size_t j = 1; j <= d; ++j) csv << ",node_diam_" << j;
  for (std::size_t j = 1; j <= d; ++j) csv << ",amp_diam_" << j;
  csv << '\n';
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    csv << format_double(eps[i]);
    for (double v : estimates[i].per_node_diam) csv << ',' << format_double(v);
    for (double v : estimates[i].per_amp_diam) csv << ',' << format_double(v);
    csv << '\n';
  }
  write_text_file(path, csv.str());
  ctx.outputs.push_back(path.string());
}

void run_oracle(const Json& cfg, RunContext& ctx) {
  const std::string input = text(cfg, "input");
  const SpikeSignal signal = input.empty()
                                 ? make_positive_signal(std::vector<double>{1.0}, std::vector<double>{0.0})
                                 : load_signal(ctx, input);
  OracleConfig oc;
  oc.node_box_factor = cfg.at("node_box_factor").get<double>();
  oc.amp_box_factor = cfg.at("amp_box_factor").get<double>();
  oc.grid_resolution = static_cast<int>(cfg.at("resolution").get<std::size_t>());
  oc.s_samples = cfg.at("s_samples").get<std::size_t>();
  oc.workers = cfg.at("workers").get<std::size_t>();
  const double omega = cfg.at("omega").get<double>();
  const auto eps_list = cfg.at("eps_list").get<std::vector<double>>();

  Json j;
  std::vector<double> eps;
  std::vector<DiameterEstimate> estimates;
  if (eps_list.empty()) {
    const double e = cfg.at("epsilon").get<double>();
    DiameterEstimate est = error_set_diameters(signal, e, omega, proportional_box(signal.size(), e, omega, oc),
                                               oc.grid_resolution, oc.s_samples, oc.workers);
    j = to_json(est);
    j["epsilon"] = e;
    eps.push_back(e);
    estimates.push_back(std::move(est));
  } else {
    ScalingReport report = diameter_epsilon_scaling(signal, omega, eps_list, oc);
    j = to_json(report);
    eps = report.epsilons;
    estimates = report.estimates;
  }
  const std::string output = text(cfg, "output");
  if (output.empty()) {
    ctx.out << j.dump(2) << '\n';
    return;
  }
  fs::path json_path = output;
  fs::path csv_path = json_path;
  csv_path.replace_extension(".csv");
  if (csv_path == json_path) json_path.replace_extension(".json");
  emit_json(ctx, json_path.string(), j);
  write_oracle_csv(csv_path, eps, estimates, ctx);
}

ExperimentConfig experiment_config_from(const Json& cfg) {
  ExperimentConfig c;
  c.spec = spec_from(cfg, c.spec);
  c.omega = cfg.at("omega").get<double>();
  c.n_samples = cfg.at("n_samples").get<std::size_t>();
  if (cfg.at("epsilon").is_null()) {
    c.epsilon_rule = {EpsilonRule::Kind::rate_bound, cfg.at("rate_c").get<double>()};
  } else {
    c.epsilon_rule = {EpsilonRule::Kind::fixed, cfg.at("epsilon").get<double>()};
  }
  c.n_trials = cfg.at("trials").get<std::size_t>();
  c.srf_sweep = cfg.at("srf_list").get<std::vector<double>>();
  c.base_seed = cfg.at("seed").get<std::uint64_t>();
  c.quantile = cfg.at("quantile").get<double>();
  c.position_jitter = cfg.at("position_jitter").get<double>();
  c.workers = cfg.at("workers").get<std::size_t>();
  return c;
}

std::string trials_file_name(double srf) { return "trials_srf_" + format_double(srf) + ".csv"; }

void write_summary_outputs(const fs::path& dir, const AmplificationSummary& summary, RunContext& ctx) {
  std::ostringstream csv;
  write_summary_csv(csv, summary);
  write_text_file(dir / "summary.csv", csv.str());
  ctx.outputs.push_back((dir / "summary.csv").string());

  Json rows = Json::array();
  for (const auto& r : summary.rows) {
    rows.push_back(Json{{"srf", r.srf},
                        {"node_class", r.cluster ? "cluster" : "non-cluster"},
                        {"median_Kx", r.median_kx},
                        {"median_Ka", r.median_ka},
                        {"n_success", r.n_success}});
  }
  auto slope_json = [](const std::optional<SlopeFit>& f) {
    return f ? Json{{"slope", f->slope}, {"intercept", f->intercept}, {"r_squared", f->r_squared}} : Json(nullptr);
  };
  const Json j{{"rows", rows},
               {"cluster_Kx_slope", slope_json(summary.cluster_kx_slope)},
               {"cluster_Ka_slope", slope_json(summary.cluster_ka_slope)},
               {"noncluster_max_Kx", summary.noncluster_max_kx},
               {"noncluster_max_Ka", summary.noncluster_max_ka},
               {"notes", summary.notes}};
  write_json_file(dir / "summary.json", j);
  ctx.outputs.push_back((dir / "summary.json").string());

  for (bool amplitude : {false, true}) {
    PlotSeries cluster{"cluster", "#d62728", {}, amplitude ? summary.cluster_ka_slope : summary.cluster_kx_slope};
    PlotSeries other{"non-cluster", "#1f77b4", {}, std::nullopt};
    for (const auto& r : summary.rows) {
      (r.cluster ? cluster : other).points.emplace_back(r.srf, amplitude ? r.median_ka : r.median_kx);
    }
    std::ostringstream svg;
    const std::string sym = amplitude ? "\xF0\x9D\x92\xA6_a" : "\xF0\x9D\x92\xA6_x";  // script K
    write_loglog_svg(svg, "median " + sym + " vs SRF", "SRF", sym, {cluster, other});
    const fs::path path = dir / (amplitude ? "K_a.svg" : "K_x.svg");
    write_text_file(path, svg.str());
    ctx.outputs.push_back(path.string());
  }
}

void print_summary(std::ostream& out, const AmplificationSummary& summary) {
  if (summary.cluster_kx_slope) out << "cluster K_x slope: " << format_double(summary.cluster_kx_slope->slope) << '\n';
  if (summary.cluster_ka_slope) out << "cluster K_a slope: " << format_double(summary.cluster_ka_slope->slope) << '\n';
  out << "non-cluster max median K_x: " << format_double(summary.noncluster_max_kx) << '\n';
  out << "non-cluster max median K_a: " << format_double(summary.noncluster_max_ka) << '\n';
  for (const auto& note : summary.notes) out << "note: " << note << '\n';
}

void run_experiment(const Json& cfg, RunContext& ctx) {
  const std::string out_dir = text(cfg, "out_dir");
  if (out_dir.empty()) throw UsageError("experiment needs --out-dir <directory>");
  const ExperimentConfig config = experiment_config_from(cfg);
  config.validate();
  const fs::path dir = out_dir;
  const SweepResult sweep = run_sweep(config);
  for (const auto& [srf, batch] : sweep) {
    std::ostringstream csv;
    write_trials_csv(csv, batch);
    write_text_file(dir / trials_file_name(srf), csv.str());
    ctx.outputs.push_back((dir / trials_file_name(srf)).string());
  }
  const AmplificationSummary summary = summarize_amplification(sweep, config.quantile);
  write_summary_outputs(dir, summary, ctx);
  print_summary(ctx.out, summary);
  ctx.manifest_path = dir / "manifest.json";
}

void run_report(const Json& cfg, RunContext& ctx) {
  const std::string in_dir = text(cfg, "in_dir");
  if (in_dir.empty()) throw UsageError("report needs --in-dir <directory>");
  std::string out_dir = text(cfg, "out_dir");
  if (out_dir.empty()) out_dir = in_dir;

  std::map<double, std::vector<TrialRecord>> by_srf;
  std::vector<fs::path> files;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(in_dir, ec)) {
    const std::string name = entry.path().filename().string();
    if (name.starts_with("trials_srf_") && name.ends_with(".csv")) files.push_back(entry.path());
  }
  if (ec) throw Error("cli", "malformed input", "cannot read directory " + in_dir);
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    std::ifstream in(path);
    ctx.inputs.push_back(path.string());
    for (auto& rec : read_trials_csv(in)) by_srf[rec.srf].push_back(std::move(rec));
  }
  if (by_srf.empty()) throw Error("cli", "malformed input", "no trials_srf_*.csv files in " + in_dir);
  SweepResult sweep(by_srf.begin(), by_srf.end());
  const AmplificationSummary summary = summarize_amplification(sweep, cfg.at("quantile").get<double>());
  write_summary_outputs(out_dir, summary, ctx);
  print_summary(ctx.out, summary);
  ctx.manifest_path = fs::path(out_dir) / "manifest.json";
}

std::vector<Command> commands() {
  const ClusterSpec base;
  const ExperimentConfig exp;
  std::vector<Command> list;

  {
    auto p = cluster_params(base, true);
    p.push_back(seed_param());
    p.push_back({"centered", Kind::flag, false, "put the cluster midpoint at 0"});
    p.push_back(output_param());
    list.push_back({"generate", "draw a random clustered positive signal", p, run_generate});
  }
  list.push_back({"sample",
                  "sample the Fourier transform of a signal on the measurement grid",
                  {input_param("signal JSON"),
                   {"omega", Kind::real, 1.0, "cutoff frequency"},
                   {"n_samples", Kind::count, 33, "number of equispaced samples in [-omega, omega]"},
                   {"epsilon", Kind::real, 0.0, "noise level"},
                   {"noise", Kind::text, "disk", "noise model: disk (uniform in the epsilon disk) or none"},
                   seed_param(),
                   output_param()},
                  run_sample});
  list.push_back({"recover",
                  "recover spikes from a measurement with the matrix pencil method",
                  {input_param("measurement JSON"), {"d", Kind::count, 3, "number of spikes"}, output_param()},
                  run_recover});
  {
    auto p = cluster_params(base, true);
    p.insert(p.begin(), input_param("signal JSON (random cluster from the spec and seed when omitted)"));
    p.push_back({"epsilon", Kind::real, 1e-5, "noise level the pair must stay within"});
    p.push_back({"omega", Kind::real, 1.0, "cutoff frequency"});
    p.push_back({"grid_density", Kind::count, 2048, "points of the verification grid"});
    p.push_back({"taylor_kmax", Kind::count, 40, "largest moment order in the domination check"});
    p.push_back(seed_param());
    p.push_back(output_param());
    list.push_back({"adversarial", "construct a worst-case pair with equal measurements up to epsilon", p,
                    run_adversarial});
  }
  {
    const OracleConfig oc;
    list.push_back({"oracle",
                    "brute-force diameters of the error set for d <= 2",
                    {input_param("positive signal JSON (single unit spike at 0 when omitted)"),
                     {"omega", Kind::real, 1.0, "cutoff frequency"},
                     {"epsilon", Kind::real, 0.1, "noise level for a single search"},
                     {"eps_list", Kind::real_list, Json::array(), "increasing noise levels for a slope sweep"},
                     {"resolution", Kind::count, oc.grid_resolution, "grid resolution per coordinate (<= 80)"},
                     {"s_samples", Kind::count, oc.s_samples, "frequencies checked per candidate"},
                     {"node_box_factor", Kind::real, oc.node_box_factor, "node half-width per epsilon/omega"},
                     {"amp_box_factor", Kind::real, oc.amp_box_factor, "amplitude half-width per epsilon"},
                     {"workers", Kind::count, 0, "worker threads (0 = all cores)"},
                     output_param()},
                    run_oracle});
  }
  {
    auto p = cluster_params(exp.spec, false);
    p.insert(p.end(),
             {{"omega", Kind::real, exp.omega, "cutoff frequency"},
              {"n_samples", Kind::count, exp.n_samples, "number of samples"},
              {"epsilon", Kind::real, nullptr, "fixed noise level (default: random within the rate bound)"},
              {"rate_c", Kind::real, exp.epsilon_rule.value, "constant c of the bound c (omega tau h)^(2p-1)"},
              {"trials", Kind::count, exp.n_trials, "trials per SRF"},
              {"srf_list", Kind::real_list, exp.srf_sweep, "super-resolution factors, comma separated"},
              seed_param(),
              {"quantile", Kind::real, exp.quantile, "summary quantile"},
              {"position_jitter", Kind::real, exp.position_jitter, "random translation range times 1/omega"},
              {"workers", Kind::count, 0, "worker threads (0 = all cores)"},
              {"out_dir", Kind::text, "", "output directory"}});
    list.push_back({"experiment", "run random trials over an SRF sweep and fit amplification slopes", p,
                    run_experiment});
  }
  list.push_back({"report",
                  "summarise trial CSVs from an experiment directory",
                  {{"in_dir", Kind::text, "", "directory with trials_srf_*.csv"},
                   {"quantile", Kind::real, 0.5, "summary quantile"},
                   {"out_dir", Kind::text, "", "output directory (defaults to --in-dir)"}},
                  run_report});
  return list;
}

// ---- value conversion ---------------------------------------------------------

Json convert_flag_value(const Param& param, const std::string& raw) {
  auto bad = [&] { return UsageError("invalid value for " + param.flag() + ": '" + raw + "'"); };
  switch (param.kind) {
    case Kind::real: {
      double v = 0.0;
      const auto r = std::from_chars(raw.data(), raw.data() + raw.size(), v);
      if (r.ec != std::errc{} || r.ptr != raw.data() + raw.size()) throw bad();
      return v;
    }
    case Kind::count:
    case Kind::seed: {
      std::uint64_t v = 0;
      const auto r = std::from_chars(raw.data(), raw.data() + raw.size(), v);
      if (r.ec != std::errc{} || r.ptr != raw.data() + raw.size()) throw bad();
      return v;
    }
    case Kind::text:
      return raw;
    default:
      throw bad();
  }
}

void check_config_value(const Param& param, const Json& v) {
  bool ok = false;
  switch (param.kind) {
    case Kind::real: ok = v.is_number() || (v.is_null() && param.fallback.is_null()); break;
    case Kind::count:
    case Kind::seed: ok = v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0); break;
    case Kind::text: ok = v.is_string(); break;
    case Kind::flag: ok = v.is_boolean(); break;
    case Kind::real_list:
      ok = v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_number(); });
      break;
  }
  if (!ok) throw UsageError("config key '" + param.key + "' has the wrong type");
}

std::vector<std::string> flag_names(const Command& cmd) {
  std::vector<std::string> names{"--config", "--help"};
  for (const auto& p : cmd.params) names.push_back(p.flag());
  return names;
}

std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv("SUPERRES_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  std::uint64_t v = 0;
  const std::string_view s(raw);
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) throw UsageError("SUPERRES_SEED is not an integer");
  return v;
}

void write_manifest(const fs::path& path, const std::string& command, const Json& cfg, const RunContext& ctx,
                    double seconds) {
  const Json manifest{{"command", command},
                      {"version", kVersion},
                      {"seed", cfg.contains("seed") ? cfg.at("seed") : Json(nullptr)},
                      {"config", cfg},
                      {"paths", Json{{"inputs", ctx.inputs}, {"outputs", ctx.outputs}}},
                      {"duration_seconds", seconds}};
  write_json_file(path, manifest);
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto cmds = commands();
  CLI::App app{"Matrix pencil super-resolution toolkit: recovery, adversarial pairs, oracle and experiments",
               "superres"};
  app.require_subcommand(1, 1);
  // "-h" stays free because "--h" is the cluster extent.
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_version_flag("--version", std::string(kVersion));

  // Option storage must outlive parsing; std::map keeps element addresses stable.
  std::map<std::string, std::string> text_values;
  std::map<std::string, std::vector<std::string>> list_values;
  std::map<std::string, bool> flag_values;
  std::map<std::string, CLI::Option*> options;
  std::map<std::string, std::string> config_paths;
  std::map<std::string, CLI::App*> subs;

  for (const auto& cmd : cmds) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.description);
    sub->allow_extras();
    subs[cmd.name] = sub;
    sub->add_option("--config", config_paths[cmd.name], "JSON config or run manifest; flags override it");
    for (const auto& p : cmd.params) {
      const std::string id = cmd.name + "/" + p.key;
      std::string help = p.help;
      if (!p.fallback.is_null() && !(p.fallback.is_string() && p.fallback.get<std::string>().empty())) {
        help += " [default: " + p.fallback.dump() + "]";
      }
      switch (p.kind) {
        case Kind::flag: options[id] = sub->add_flag(p.flag(), flag_values[id], help); break;
        case Kind::real_list:
          options[id] = sub->add_option(p.flag(), list_values[id], help)->delimiter(',');
          break;
        default: options[id] = sub->add_option(p.flag(), text_values[id], help); break;
      }
    }
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const auto started = std::chrono::steady_clock::now();
  const Command* chosen = nullptr;
  for (const auto& cmd : cmds) {
    if (subs[cmd.name]->parsed()) chosen = &cmd;
  }
  if (chosen == nullptr) return kExitUsage;
  const Command& cmd = *chosen;

  try {
    const auto extras = subs[cmd.name]->remaining();
    if (!extras.empty()) {
      const auto it = std::find_if(extras.begin(), extras.end(), [](const std::string& s) { return s.starts_with("-"); });
      const std::string word = it != extras.end() ? it->substr(0, it->find('=')) : extras.front();
      std::string message = "unknown flag '" + word + "' for '" + cmd.name + "'";
      if (it == extras.end()) message = "unexpected argument '" + word + "' for '" + cmd.name + "'";
      const std::string hint = closest_match(word, flag_names(cmd));
      if (!hint.empty()) message += "; did you mean '" + hint + "'?";
      throw UsageError(message);
    }

    Json cfg = Json::object();
    const auto seed_override = env_seed();
    for (const auto& p : cmd.params) {
      cfg[p.key] = (p.key == "seed" && seed_override) ? Json(*seed_override) : p.fallback;
    }

    const std::string& config_path = config_paths[cmd.name];
    if (!config_path.empty()) {
      Json file = read_json_file(config_path);
      if (file.is_object() && file.contains("command") && file.contains("config")) {
        if (file.at("command") != cmd.name) {
          throw UsageError("manifest was written by '" + file.at("command").get<std::string>() + "', not '" +
                           cmd.name + "'");
        }
        file = file.at("config");
      }
      if (!file.is_object()) throw UsageError("config file must hold a JSON object");
      std::vector<std::string> keys;
      for (const auto& p : cmd.params) keys.push_back(p.key);
      for (const auto& [key, value] : file.items()) {
        const auto param = std::find_if(cmd.params.begin(), cmd.params.end(), [&](const Param& p) { return p.key == key; });
        if (param == cmd.params.end()) {
          std::string message = "unknown config key '" + key + "' for '" + cmd.name + "'";
          const std::string hint = closest_match(key, keys);
          if (!hint.empty()) message += "; did you mean '" + hint + "'?";
          throw UsageError(message);
        }
        check_config_value(*param, value);
        cfg[key] = value;
      }
    }

    for (const auto& p : cmd.params) {
      const std::string id = cmd.name + "/" + p.key;
      if (options[id]->count() == 0) continue;
      switch (p.kind) {
        case Kind::flag: cfg[p.key] = flag_values[id]; break;
        case Kind::real_list: {
          Json arr = Json::array();
          for (const auto& raw : list_values[id]) arr.push_back(convert_flag_value({p.key, Kind::real, {}, {}}, raw));
          cfg[p.key] = arr;
          break;
        }
        default: cfg[p.key] = convert_flag_value(p, text_values[id]); break;
      }
    }

    RunContext ctx{out, {}, {}, {}};
    cmd.handler(cfg, ctx);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    if (!ctx.manifest_path.empty()) {
      write_manifest(ctx.manifest_path, cmd.name, cfg, ctx, seconds);
    } else {
      for (const auto& path : ctx.outputs) write_manifest(path + ".manifest.json", cmd.name, cfg, ctx, seconds);
    }
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nRun 'superres " << cmd.name << " --help' for the options.\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomainError;
  }
}

}  // namespace superres::cli
