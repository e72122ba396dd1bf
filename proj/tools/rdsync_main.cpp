#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "rdsync/examples.hpp"
#include "rdsync/hitting.hpp"
#include "rdsync/spec_io.hpp"
#include "rdsync/verify.hpp"

namespace {

using nlohmann::json;
using namespace rdsync;

constexpr int kSchemaVersion = 1;

struct GlobalOptions {
  std::string spec_path;
  std::string seed_hex;
  int64_t scenarios = 10'000;
  int64_t horizon = kDefaultHitHorizon;
  int threads = 0;
  std::string out_dir;
  std::string format = "json";
  bool no_meta = false;
};

Scenario resolve_seed(const GlobalOptions& opt) {
  if (!opt.seed_hex.empty()) return Scenario::from_hex(opt.seed_hex);
  if (const char* env = std::getenv("RDS_SYNC_SEED")) return Scenario::from_hex(env);
  Scenario s = random_scenario();
  std::cerr << "note: no seed given, using " << s.seed_hex() << "\n";
  return s;
}

int effective_threads(const GlobalOptions& opt) {
  if (opt.threads > 0) return opt.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

void attach_meta(json& report, const GlobalOptions& opt, const Scenario& seed) {
  report["schema_version"] = kSchemaVersion;
  report["seed"] = seed.seed_hex();
  if (!opt.no_meta) {
    report["meta"] = {{"generated_by", "rdsync"},
                      {"timestamp", static_cast<int64_t>(std::time(nullptr))}};
  }
}

void emit(const json& report, const GlobalOptions& opt, const std::string& name) {
  std::cout << report.dump(2) << "\n";
  if (!opt.out_dir.empty()) {
    std::filesystem::create_directories(opt.out_dir);
    std::ofstream out(std::filesystem::path(opt.out_dir) / (name + ".json"));
    out << report.dump(2) << "\n";
  }
}

void emit_csv(const std::string& content, const GlobalOptions& opt,
              const std::string& name) {
  if (opt.out_dir.empty()) return;
  std::filesystem::create_directories(opt.out_dir);
  std::ofstream out(std::filesystem::path(opt.out_dir) / (name + ".csv"));
  out << content;
}

struct LoadedModel {
  TransitionKernel kernel;
  RdsRepresentation rds;
};

LoadedModel load_model(const GlobalOptions& opt) {
  if (opt.spec_path.empty()) {
    throw SpecError("MissingSpec", "--spec PATH is required for this subcommand");
  }
  const ParsedSpec spec = load_spec_file(opt.spec_path);
  TransitionKernel kernel = TransitionKernel::validate(spec.chain);
  RdsRepresentation rds = build_rds(spec, kernel);
  return {std::move(kernel), std::move(rds)};
}

json pi_to_json(const TransitionKernel& kernel, const StationaryDistribution& pi) {
  json out = json::object();
  for (int i = 0; i < kernel.size(); ++i) out[kernel.state_name(i)] = pi.mass[i];
  return out;
}

// ---- subcommands ----------------------------------------------------------

int cmd_analyze(const GlobalOptions& opt) {
  const auto model = load_model(opt);
  const auto& kernel = model.kernel;
  json report;
  const Scenario seed = resolve_seed(opt);
  attach_meta(report, opt, seed);
  report["states"] = kernel.states();
  report["edges"] = kernel.edge_count();
  if (kernel.truncation_mass() > 0.0) {
    report["truncation_mass"] = kernel.truncation_mass();
    report["truncation_warning"] =
        "kernel was truncated; insulation and attractor quantities may differ "
        "from the untruncated chain";
  }

  const auto decomposition = irreducibility_classes(kernel);
  json classes = json::array();
  for (const auto& cls : decomposition.irreducibility_classes) {
    json labels = json::array();
    for (int s : cls) labels.push_back(kernel.state_name(s));
    classes.push_back(labels);
  }
  report["irreducibility_classes"] = classes;
  json transient = json::array();
  for (int s : decomposition.transient_states) transient.push_back(kernel.state_name(s));
  report["transient_states"] = transient;

  const bool irreducible =
      decomposition.irreducibility_classes.size() == 1 && transient.empty();
  report["irreducible"] = irreducible;
  if (irreducible) {
    const auto pi = stationary_distribution(kernel);
    report["stationary"] = pi_to_json(kernel, pi);
    report["stationary_residual"] = pi.residual;
    const auto p = period(kernel);
    report["period"] = p.period;
    const auto deg2 = is_ergodic_degree_2(kernel);
    report["ergodic_degree_2"] = {{"flag", deg2.flag},
                                  {"worst_identity_error", deg2.worst_identity_error}};
    json e_pi = json::object();
    json moments = json::object();
    std::string csv = "state,pi,expected_pi_tau,return_mean,return_second_moment\n";
    for (int y = 0; y < kernel.size(); ++y) {
      const auto m = hitting_time_moments(kernel, y);
      e_pi[kernel.state_name(y)] = deg2.expected_pi_tau[y];
      moments[kernel.state_name(y)] = {{"return_mean", m.first_moment[y]},
                                       {"return_second_moment", m.second_moment[y]}};
      csv += kernel.state_name(y) + "," + std::to_string(pi.mass[y]) + "," +
             std::to_string(deg2.expected_pi_tau[y]) + "," +
             std::to_string(m.first_moment[y]) + "," +
             std::to_string(m.second_moment[y]) + "\n";
    }
    report["expected_pi_tau"] = e_pi;
    report["return_moments"] = moments;
    emit_csv(csv, opt, "analyze");
  }
  emit(report, opt, "analyze");
  return 0;
}

int cmd_insulation(const GlobalOptions& opt, const std::string& dot_path) {
  const auto model = load_model(opt);
  const auto q = TwoPointKernel::build(model.rds);
  const auto structure = insulation_relation(q);

  json report;
  const Scenario seed = resolve_seed(opt);
  attach_meta(report, opt, seed);
  json edges = json::array();
  for (int x = 0; x < structure.n_states; ++x) {
    for (int y = x + 1; y < structure.n_states; ++y) {
      if (structure.insulated(x, y)) {
        edges.push_back({model.kernel.state_name(x), model.kernel.state_name(y)});
      }
    }
  }
  report["insulated_pairs"] = edges;
  report["kappa_hat"] = structure.kappa_hat;
  json witness = json::array();
  for (int s : structure.witness) witness.push_back(model.kernel.state_name(s));
  report["witness"] = witness;
  report["delta_size"] = structure.delta_pairs.size();

  if (!dot_path.empty()) {
    std::ofstream dot(dot_path);
    dot << "digraph two_point {\n";
    for (int p = 0; p < q.n_pairs(); ++p) {
      for (const auto& e : q.row(p)) {
        auto [x, y] = q.pair_of(p);
        auto [u, v] = q.pair_of(e.target);
        dot << "  \"" << model.kernel.state_name(x) << "," << model.kernel.state_name(y)
            << "\" -> \"" << model.kernel.state_name(u) << ","
            << model.kernel.state_name(v) << "\" [label=\"" << e.prob << "\"];\n";
      }
    }
    dot << "}\n";
  }
  emit(report, opt, "insulation");
  return 0;
}

json attractor_report_json(const TransitionKernel& kernel, const AttractorReport& report,
                           const StationaryDistribution& pi) {
  json out;
  out["kappa"] = report.kappa;
  out["n_scenarios"] = report.n_scenarios;
  json hist = json::object();
  for (const auto& [card, count] : report.cardinality_histogram) {
    hist[std::to_string(card)] = count;
  }
  out["cardinality_histogram"] = hist;
  json membership = json::object(), expected = json::object();
  for (int x = 0; x < kernel.size(); ++x) {
    membership[kernel.state_name(x)] = report.membership[x];
    expected[kernel.state_name(x)] = report.kappa * pi.mass[x];
  }
  out["membership"] = membership;
  out["expected"] = expected;
  return out;
}

int cmd_attractor(const GlobalOptions& opt, const std::string& trace_csv) {
  const auto model = load_model(opt);
  const auto structure = insulation_relation(TwoPointKernel::build(model.rds));
  const auto pi = stationary_distribution(model.kernel);
  const Scenario seed = resolve_seed(opt);

  const auto report = estimate_kappa(model.rds, structure, seed, opt.scenarios,
                                     kDefaultMaxBack, effective_threads(opt));
  json out;
  attach_meta(out, opt, seed);
  out.update(attractor_report_json(model.kernel, report, pi));
  emit(out, opt, "attractor");

  if (!trace_csv.empty()) {
    std::string csv = "scenario,seed,steps,attractor\n";
    for (int64_t i = 0; i < std::min<int64_t>(opt.scenarios, 1000); ++i) {
      const Scenario s = seed.substream(i);
      const auto pull = pullback_attractor(model.rds, structure, s);
      std::string set;
      for (int x : pull.attractor) {
        if (!set.empty()) set += "|";
        set += model.kernel.state_name(x);
      }
      csv += std::to_string(i) + "," + s.seed_hex() + "," +
             std::to_string(pull.steps) + "," + set + "\n";
    }
    emit_csv(csv, opt, trace_csv);
  }
  return 0;
}

int cmd_cftp(const GlobalOptions& opt) {
  const auto model = load_model(opt);
  const auto structure = insulation_relation(TwoPointKernel::build(model.rds));
  const auto pi = stationary_distribution(model.kernel);
  const Scenario seed = resolve_seed(opt);

  const int n = model.kernel.size();
  std::vector<int64_t> counts(n, 0);
  for (int64_t i = 0; i < opt.scenarios; ++i) {
    counts[cftp_sample(model.rds, structure, seed.substream(i))]++;
  }
  // Chi-square goodness of fit against pi.
  double chi2 = 0.0, tv = 0.0;
  for (int x = 0; x < n; ++x) {
    const double expected = pi.mass[x] * static_cast<double>(opt.scenarios);
    chi2 += (counts[x] - expected) * (counts[x] - expected) / expected;
    tv += 0.5 * std::abs(counts[x] / static_cast<double>(opt.scenarios) - pi.mass[x]);
  }
  json out;
  attach_meta(out, opt, seed);
  json sample_counts = json::object();
  for (int x = 0; x < n; ++x) sample_counts[model.kernel.state_name(x)] = counts[x];
  out["n_samples"] = opt.scenarios;
  out["counts"] = sample_counts;
  out["expected"] = pi_to_json(model.kernel, pi);
  out["chi_square"] = chi2;
  out["chi_square_dof"] = n - 1;
  out["total_variation"] = tv;
  emit(out, opt, "cftp");
  return 0;
}

json estimate_to_json(const TimeEstimate& est) {
  json out;
  out["n_samples"] = est.n_samples;
  out["n_censored"] = est.n_censored;
  out["horizon"] = est.horizon;
  out["censored_mean"] = est.censored_mean;
  out["uncensored_mean"] = est.uncensored_mean;
  out["standard_error"] = est.standard_error;
  out["estimate_refused"] = est.estimate_refused;
  out["quantiles"] = {{"0.5", est.quantile_50}, {"0.9", est.quantile_90},
                      {"0.99", est.quantile_99}};
  return out;
}

int cmd_hit_times(const GlobalOptions& opt, const std::string& mode_name,
                  const std::string& x_label, const std::string& y_label) {
  const auto model = load_model(opt);
  const auto structure = insulation_relation(TwoPointKernel::build(model.rds));
  const auto pi = stationary_distribution(model.kernel);
  const Scenario seed = resolve_seed(opt);

  HitMode mode;
  if (mode_name == "sync-pair") {
    mode.kind = HitMode::Kind::SyncPair;
    mode.x = model.kernel.state_index(x_label);
    mode.y = model.kernel.state_index(y_label);
  } else if (mode_name == "hit") {
    mode.kind = HitMode::Kind::Hit;
    mode.x = model.kernel.state_index(x_label);
  } else if (mode_name == "pi-hit") {
    mode.kind = HitMode::Kind::PiAveragedHit;
  } else {
    throw SpecError("BadMode", "mode must be sync-pair | hit | pi-hit");
  }

  const auto est = expected_times(model.rds, structure, pi, mode, seed, opt.scenarios,
                                  opt.horizon, effective_threads(opt));
  json out;
  attach_meta(out, opt, seed);
  out["mode"] = mode_name;
  out.update(estimate_to_json(est));
  emit(out, opt, "hit_times");

  if (opt.format == "csv" || !opt.out_dir.empty()) {
    std::string csv = "sample,seed,mode,value,censored\n";
    for (int64_t i = 0; i < est.n_samples; ++i) {
      csv += std::to_string(i) + "," + seed.substream(i).seed_hex() + "," + mode_name +
             "," + std::to_string(est.values[i]) + "," +
             (est.censored_flags[i] ? "1" : "0") + "\n";
    }
    emit_csv(csv, opt, "hit_times");
  }
  return 0;
}

int cmd_verify(const GlobalOptions& opt) {
  const auto model = load_model(opt);
  const Scenario seed = resolve_seed(opt);
  const auto results = run_verification(model.rds, seed);
  json out;
  attach_meta(out, opt, seed);
  json checks = json::array();
  for (const auto& r : results) {
    checks.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    std::cerr << (r.passed ? "PASS " : "FAIL ") << r.name
              << (r.detail.empty() ? "" : "  (" + r.detail + ")") << "\n";
  }
  out["checks"] = checks;
  out["all_passed"] = all_passed(results);
  emit(out, opt, "verify");
  return all_passed(results) ? 0 : 3;
}

int cmd_example(const GlobalOptions& opt, const std::string& name, double epsilon,
                int truncation) {
  const Scenario seed = resolve_seed(opt);
  json out;
  attach_meta(out, opt, seed);
  out["example"] = name;
  bool ok = true;
  const int threads = effective_threads(opt);

  if (name == "four-state-independent" || name == "four-state-f1f2") {
    const RdsRepresentation rds =
        name == "four-state-f1f2" ? four_state_f1f2() : four_state_independent();
    const auto structure = insulation_relation(TwoPointKernel::build(rds));
    const auto pi = stationary_distribution(rds.kernel());
    const int64_t n = opt.scenarios;
    const auto report = estimate_kappa(rds, structure, seed, n, kDefaultMaxBack, threads);
    out.update(attractor_report_json(rds.kernel(), report, pi));
    const int expected_kappa = name == "four-state-f1f2" ? 2 : 1;
    ok = report.kappa == expected_kappa;
    for (int x = 0; x < 4 && ok; ++x) {
      ok = std::abs(report.membership[x] - expected_kappa * 0.25) <= 0.02;
    }
    if (name == "four-state-f1f2" && ok) {
      // The attractor is the image of the last backward map: {a,c} after f2,
      // {b,d} after f1.
      int64_t mismatches = 0;
      for (int64_t i = 0; i < std::min<int64_t>(n, 1000); ++i) {
        const Scenario s = seed.substream(i);
        const auto pull = pullback_attractor(rds, structure, s);
        const bool f1_last = rds.selected_map(s, -1) == 0;
        const std::vector<int> expected = f1_last ? std::vector<int>{1, 3}
                                                  : std::vector<int>{0, 2};
        if (pull.attractor != expected) ++mismatches;
      }
      out["last_map_mismatches"] = mismatches;
      ok = mismatches == 0;
    }
  } else if (name == "epsilon-two-state") {
    const RdsRepresentation rds = epsilon_two_state(epsilon);
    const auto structure = insulation_relation(TwoPointKernel::build(rds));
    const auto pi = stationary_distribution(rds.kernel());
    HitMode mode{HitMode::Kind::Hit, 0, 0};
    const auto est = expected_times(rds, structure, pi, mode, seed, opt.scenarios,
                                    opt.horizon, threads);
    out["epsilon"] = epsilon;
    out.update(estimate_to_json(est));
    const double expected_mean = 1.0 / (2.0 * epsilon);
    out["expected_mean"] = expected_mean;
    ok = est.n_censored == 0 &&
         std::abs(est.censored_mean - expected_mean) <= 0.05 * expected_mean;
  } else if (name == "truncated-random-walk") {
    const TransitionKernel kernel = truncated_random_walk(truncation);
    const auto pi = stationary_distribution(kernel);
    out["truncation"] = truncation;
    out["truncation_mass"] = kernel.truncation_mass();
    out["stationary"] = pi_to_json(kernel, pi);
    // pi(x) proportional to 3^-x on the truncated walk.
    double worst = 0.0;
    for (int x = 0; x + 1 < kernel.size(); ++x) {
      worst = std::max(worst, std::abs(pi.mass[x + 1] - pi.mass[x] / 3.0));
    }
    out["detailed_balance_error"] = worst;
    ok = worst <= 1e-10;
  } else if (name == "heavy-tail") {
    json per_level = json::array();
    double previous = 0.0;
    ok = true;
    for (int n_top : {10, 20, 40}) {
      const TransitionKernel kernel = heavy_tail_chain(n_top);
      const auto deg2 = is_ergodic_degree_2(kernel);
      const double e_pi_tau1 = deg2.expected_pi_tau[0];
      per_level.push_back({{"truncation", n_top},
                           {"expected_pi_tau_1", e_pi_tau1},
                           {"truncation_mass", kernel.truncation_mass()}});
      if (e_pi_tau1 <= previous) ok = false;
      previous = e_pi_tau1;
    }
    out["levels"] = per_level;
    out["monotone_increasing"] = ok;
  } else {
    throw SpecError("UnknownExample",
                    "unknown example '" + name +
                        "'; expected four-state-independent | four-state-f1f2 | "
                        "epsilon-two-state | truncated-random-walk | heavy-tail");
  }

  out["expected_outputs_met"] = ok;
  emit(out, opt, "example_" + name);
  return ok ? 0 : 3;
}

json error_json(const std::string& kind, const std::string& code,
                const std::string& what) {
  return json{{"error", kind}, {"code", code}, {"what", what}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Markov chains as random dynamical systems: attractors, insulation "
               "structure, perfect sampling and hitting times"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions opt;
  app.add_option("--spec", opt.spec_path, "chain spec file (JSON)");
  app.add_option("--seed", opt.seed_hex, "128-bit seed as hex");
  app.add_option("--scenarios", opt.scenarios, "number of scenarios / samples");
  app.add_option("--horizon", opt.horizon, "censoring horizon for hitting times");
  app.add_option("--threads", opt.threads, "worker threads (0 = machine parallelism)");
  app.add_option("--out", opt.out_dir, "output directory for report files");
  app.add_option("--format", opt.format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--no-meta", opt.no_meta, "omit timestamps for byte-identical reports");

  app.add_subcommand("analyze", "exact chain analysis: pi, period, classes, moments");
  std::string dot_path;
  auto* insulation = app.add_subcommand("insulation", "two-point kernel and insulation structure");
  insulation->add_option("--dot", dot_path, "dump the Q support digraph as DOT");
  std::string trace_csv;
  auto* attractor = app.add_subcommand("attractor", "pullback attractor and kappa estimate");
  attractor->add_option("--trace-csv", trace_csv, "per-scenario trace CSV basename");
  app.add_subcommand("cftp", "perfect sampling via coupling from the past");
  std::string mode = "hit", from_state, to_state;
  auto* hit = app.add_subcommand("hit-times", "synchronization / attraction time Monte Carlo");
  hit->add_option("--mode", mode, "sync-pair | hit | pi-hit");
  hit->add_option("--from", from_state, "initial state x");
  hit->add_option("--to", to_state, "second state y (sync-pair)");
  app.add_subcommand("verify", "run the full invariant suite on the given spec");
  std::string example_name;
  double epsilon = 0.1;
  int truncation = 20;
  auto* example = app.add_subcommand("example", "run a bundled desk-scale example");
  example->add_option("name", example_name, "example name")->required();
  example->add_option("--epsilon", epsilon, "coupling strength for epsilon-two-state");
  example->add_option("--truncation", truncation, "truncation level N");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("analyze")) return cmd_analyze(opt);
    if (app.got_subcommand("insulation")) return cmd_insulation(opt, dot_path);
    if (app.got_subcommand("attractor")) return cmd_attractor(opt, trace_csv);
    if (app.got_subcommand("cftp")) return cmd_cftp(opt);
    if (app.got_subcommand("hit-times")) return cmd_hit_times(opt, mode, from_state, to_state);
    if (app.got_subcommand("verify")) return cmd_verify(opt);
    if (app.got_subcommand("example")) return cmd_example(opt, example_name, epsilon, truncation);
  } catch (const SpecError& e) {
    std::cerr << error_json("spec", e.code(), e.what()).dump() << "\n";
    return 2;
  } catch (const CheckError& e) {
    std::cerr << error_json("check", e.code(), e.what()).dump() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << error_json("internal", "Unexpected", e.what()).dump() << "\n";
    return 1;
  }
  return 1;
}
