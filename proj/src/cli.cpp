#include "qcms/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "qcms/coding.hpp"
#include "qcms/engine.hpp"
#include "qcms/properties.hpp"

namespace qcms {

namespace {

using nlohmann::ordered_json;

// Signals a bad command line detected after CLI11 parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fixed3(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << v;
  return os.str();
}

std::string param_string(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

const std::map<std::string, WildcardMode> kWildcardNames{{"random", WildcardMode::RandomFill},
                                                         {"nomatch", WildcardMode::NoMatch}};
const std::map<std::string, PermutationPolicy::Mode> kPermNames{
    {"ascending", PermutationPolicy::Mode::Ascending}, {"shuffled", PermutationPolicy::Mode::Shuffled}};

ordered_json config_json(const ExperimentConfig& c) {
  ordered_json j;
  if (c.scene) j["scene"] = c.scene;
  j["n"] = c.n_channels;
  j["theta_a"] = c.theta_a;
  j["theta_b"] = c.theta_b;
  j["g"] = c.overlap;
  j["trials"] = c.trials;
  j["drift_max"] = c.drift_max;
  j["wildcard"] = wildcard_name(c.wildcard);
  j["perm"] = perm_name(c.perm);
  j["seed"] = c.seed;
  return j;
}

void write_output(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot open output file '" + path + "'");
  file << text;
}

ChannelSet parse_set(const std::string& text, const char* flag) {
  try {
    return ChannelSet::parse(text);
  } catch (const std::domain_error& e) {
    throw UsageError(std::string(flag) + ": " + e.what());
  }
}

std::vector<int> parse_int_list(const std::string& text, const char* flag) {
  std::vector<int> values;
  if (text.empty()) return values;
  try {
    for (Channel v : ChannelSet::parse(text)) values.push_back(v);
  } catch (const std::domain_error& e) {
    throw UsageError(std::string(flag) + ": " + e.what());
  }
  return values;
}

// Options every experiment command accepts.
struct ExperimentFlags {
  CLI::Option* n = nullptr;
  CLI::Option* theta_a = nullptr;
  CLI::Option* theta_b = nullptr;
  CLI::Option* g = nullptr;
};

ExperimentFlags add_experiment_flags(CLI::App* cmd, ExperimentConfig& c, std::string& format,
                                     std::string& out_path) {
  ExperimentFlags f;
  f.n = cmd->add_option("--n", c.n_channels, "Total channel count N")->check(CLI::Range(2, 1 << 20));
  f.theta_a = cmd->add_option("--theta-a", c.theta_a, "Available-channel ratio of user A")->check(CLI::Range(0.0, 1.0));
  f.theta_b = cmd->add_option("--theta-b", c.theta_b, "Available-channel ratio of user B")->check(CLI::Range(0.0, 1.0));
  f.g = cmd->add_option("--g", c.overlap, "Number of common channels G");
  cmd->add_option("--trials", c.trials, "Independent trials per point")->check(CLI::PositiveNumber);
  cmd->add_option("--drift-max", c.drift_max, "Clock drift drawn uniformly from [0, drift-max]");
  cmd->add_option("--seed", c.seed, "Master seed");
  cmd->add_option("--wildcard", c.wildcard, "Wildcard policy")
      ->transform(CLI::CheckedTransformer(kWildcardNames, CLI::ignore_case));
  cmd->add_option("--perm", c.perm, "Permutation policy")
      ->transform(CLI::CheckedTransformer(kPermNames, CLI::ignore_case));
  cmd->add_option("--threads", c.threads, "Worker threads (0 = all cores)");
  cmd->add_option("--format", format, "Machine-readable output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", out_path, "Write machine-readable output to PATH");
  return f;
}

std::string summary_text(const SummaryStats& s) {
  std::ostringstream os;
  os << "trials=" << s.trials << " ettr=" << fixed3(s.ettr) << " mttr_observed=" << s.mttr_observed
     << " stddev=" << fixed3(s.ttr_stddev) << " ci95=" << fixed3(s.ci95_halfwidth);
  if (s.budget_exceeded) os << " budget_exceeded=" << s.budget_exceeded;
  return os.str();
}

std::string rows_text(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << std::left << std::setw(8) << "param" << std::setw(10) << "trials" << std::setw(12) << "ettr"
     << std::setw(15) << "mttr_observed" << "ci95\n";
  for (const auto& r : rows)
    os << std::setw(8) << param_string(r.param) << std::setw(10) << r.trials << std::setw(12) << fixed3(r.ettr)
       << std::setw(15) << r.mttr_observed << fixed3(r.ci95) << "\n";
  return os.str();
}

}  // namespace

const char* wildcard_name(WildcardMode mode) {
  return mode == WildcardMode::RandomFill ? "random" : "nomatch";
}

const char* perm_name(PermutationPolicy::Mode mode) {
  return mode == PermutationPolicy::Mode::Ascending ? "ascending" : "shuffled";
}

std::vector<double> scene_values(int scene) {
  std::vector<double> v;
  switch (scene) {
    case 1:
      for (int g = 1; g <= 10; ++g) v.push_back(g);
      break;
    case 2:
      for (int n = 40; n <= 220; n += 20) v.push_back(n);
      break;
    case 3:
      for (int pct = 10; pct <= 55; pct += 5) v.push_back(pct / 100.0);
      break;
    default:
      throw std::domain_error("scene must be 1, 2 or 3");
  }
  return v;
}

ExperimentConfig scene_defaults(int scene) {
  ExperimentConfig c;
  c.scene = scene;
  switch (scene) {
    case 1:
      c.n_channels = 200, c.theta_a = 0.3, c.theta_b = 0.4;
      break;
    case 2:
      c.theta_a = 0.3, c.theta_b = 0.4;
      break;
    case 3:
      c.n_channels = 200, c.theta_a = 0.1, c.overlap = 1;
      break;
    default:
      throw std::domain_error("scene must be 1, 2 or 3");
  }
  return c;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& base) {
  std::vector<SweepRow> rows;
  for (double value : scene_values(base.scene)) {
    MonteCarloConfig mc;
    mc.n_channels = base.n_channels;
    mc.theta_a = base.theta_a;
    mc.theta_b = base.theta_b;
    mc.overlap = base.overlap;
    if (base.scene == 1) mc.overlap = static_cast<std::size_t>(value);
    if (base.scene == 2) mc.n_channels = static_cast<int>(value);
    if (base.scene == 3) mc.theta_b = value;
    mc.trials = base.trials;
    mc.drift_max = base.drift_max;
    mc.wildcard = base.wildcard;
    mc.perm = base.perm;
    mc.threads = base.threads;
    auto stats = monte_carlo(mc, base.seed);
    rows.push_back(SweepRow{std::to_string(base.scene), value, stats.trials, stats.ettr, stats.mttr_observed,
                            stats.ci95_halfwidth, base.seed, stats.budget_exceeded});
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows, const ExperimentConfig& config) {
  std::ostringstream os;
  os << kSweepCsvHeader << "\n";
  for (const auto& r : rows)
    os << r.scene << ',' << param_string(r.param) << ',' << r.trials << ',' << fixed3(r.ettr) << ','
       << r.mttr_observed << ',' << fixed3(r.ci95) << ',' << r.seed << "\n";
  os << "# tool=" << kToolName << " version=" << kToolVersion << "\n";
  os << "# params=" << config_json(config).dump() << "\n";
  os << "# seed=" << config.seed << "\n";
  return os.str();
}

std::string sweep_json(const std::vector<SweepRow>& rows, const ExperimentConfig& config) {
  ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["params"] = config_json(config);
  j["seed"] = config.seed;
  j["rows"] = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json row;
    row["scene"] = r.scene;
    row["param"] = r.param;
    row["trials"] = r.trials;
    row["ettr"] = r.ettr;
    row["mttr_observed"] = r.mttr_observed;
    row["ci95"] = r.ci95;
    row["seed"] = r.seed;
    j["rows"].push_back(row);
  }
  return j.dump(2) + "\n";
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Channel-hopping rendezvous: sequence generation, verification and simulation", kToolName};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  app.require_subcommand(1);

  // bootstrap
  int bs_n = 0;
  Channel bs_r = 0;
  auto* bootstrap = app.add_subcommand("bootstrap", "Print the bootstrap sequence for channel R");
  bootstrap->add_option("--n", bs_n, "Total channel count N")->required();
  bootstrap->add_option("--r", bs_r, "Selected channel R")->required();

  // subseq
  int ss_n = 0;
  std::string ss_channels;
  Channel ss_r = 0;
  std::uint64_t ss_seed = 1;
  PermutationPolicy::Mode ss_perm = PermutationPolicy::Mode::Ascending;
  auto* subseq = app.add_subcommand("subseq", "Print the R-type and lambda-type subsequences");
  subseq->add_option("--n", ss_n, "Total channel count N")->required();
  subseq->add_option("--channels", ss_channels, "Available channels, e.g. 1-6 or 1,7,8,9")->required();
  subseq->add_option("--r", ss_r, "Selected channel R")->required();
  subseq->add_option("--perm", ss_perm, "Permutation policy")
      ->transform(CLI::CheckedTransformer(kPermNames, CLI::ignore_case));
  subseq->add_option("--seed", ss_seed, "Seed for the shuffled policy");

  // sequence
  int sq_n = 0;
  std::string sq_channels;
  Channel sq_r = 0;
  std::uint64_t sq_slots = 0;
  std::uint64_t sq_seed = 1;
  WildcardMode sq_wild = WildcardMode::NoMatch;
  PermutationPolicy::Mode sq_perm = PermutationPolicy::Mode::Ascending;
  std::string sq_format;
  std::string sq_out;
  auto* sequence = app.add_subcommand("sequence", "Print the channel hopped in each slot");
  sequence->add_option("--n", sq_n, "Total channel count N")->required();
  sequence->add_option("--channels", sq_channels, "Available channels")->required();
  sequence->add_option("--r", sq_r, "Selected channel R")->required();
  sequence->add_option("--slots", sq_slots, "Slots to print (default: 10 rows)");
  sequence->add_option("--wildcard", sq_wild, "Wildcard policy")
      ->transform(CLI::CheckedTransformer(kWildcardNames, CLI::ignore_case));
  sequence->add_option("--perm", sq_perm, "Permutation policy")
      ->transform(CLI::CheckedTransformer(kPermNames, CLI::ignore_case));
  sequence->add_option("--seed", sq_seed, "Seed for wildcard draws and shuffling");
  sequence->add_option("--format", sq_format, "Machine-readable output format")->check(CLI::IsMember({"csv", "json"}));
  sequence->add_option("--out", sq_out, "Write machine-readable output to PATH");

  // verify
  int vf_n = 0;
  std::string vf_a;
  std::string vf_b;
  PermutationPolicy::Mode vf_perm = PermutationPolicy::Mode::Ascending;
  std::uint64_t vf_seed = 1;
  std::uint64_t vf_max_drifts = 0;
  std::string vf_format;
  std::string vf_out;
  auto* verify = app.add_subcommand("verify", "Exhaustively check the worst-case TTR bound");
  verify->add_option("--n", vf_n, "Total channel count N")->required();
  verify->add_option("--ca", vf_a, "Channels available to user A")->required();
  verify->add_option("--cb", vf_b, "Channels available to user B")->required();
  verify->add_option("--perm", vf_perm, "Permutation policy")
      ->transform(CLI::CheckedTransformer(kPermNames, CLI::ignore_case));
  verify->add_option("--seed", vf_seed, "Seed for the shuffled policy");
  verify->add_option("--max-drifts", vf_max_drifts, "Cap drifts per R pair (0 = full period)");
  verify->add_option("--format", vf_format, "Machine-readable output format")->check(CLI::IsMember({"json"}));
  verify->add_option("--out", vf_out, "Write machine-readable output to PATH");

  // simulate
  ExperimentConfig sim_cfg;
  std::string sim_format;
  std::string sim_out;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo TTR statistics for one parameter set");
  auto sim_flags = add_experiment_flags(simulate, sim_cfg, sim_format, sim_out);

  // sweep
  int sweep_scene = 0;
  ExperimentConfig sw_cfg;
  std::string sw_format;
  std::string sw_out;
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweep over one parameter of a scene");
  sweep->add_option("--scene", sweep_scene, "1: G in [1,10]; 2: N in [40,220]; 3: theta_B in [0.1,0.55]")
      ->required()
      ->check(CLI::Range(1, 3));
  auto sw_flags = add_experiment_flags(sweep, sw_cfg, sw_format, sw_out);

  // properties
  PropertyCaps caps;
  bool no_engine = false;
  auto* properties = app.add_subcommand("properties", "Run the bounded structural property checks");
  properties->add_option("--pairs", caps.coding_pairs, "Max coded pairs concatenated");
  std::optional<std::string> ns_list;
  std::optional<std::string> coverage_list;
  properties->add_option("--ns", ns_list, "Channel counts for the rotation-overlap check, e.g. 4,16,200");
  properties->add_option("--roundtrip-max-n", caps.max_n_roundtrip, "Round trip over N in [2, value]");
  properties->add_option("--drift-max", caps.r_column_drift_max, "Drifts for the R-column check");
  properties->add_option("--prime-max", caps.prime_max, "Primes checked for coprime lengths");
  properties->add_option("--length-max-n", caps.length_table_max_n, "Channel-set sizes for the length table");
  properties->add_option("--coverage-sizes", coverage_list, "Set sizes for pair coverage, e.g. 4,6,8 (empty: skip)");
  properties->add_flag("--no-engine", no_engine, "Skip the schedule checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*bootstrap) {
      auto bs = build_bootstrap(bs_n, bs_r);
      out << bs.to_string() << ", L=" << bs.length() << "\n";
      return kExitOk;
    }

    if (*subseq) {
      auto set = parse_set(ss_channels, "--channels");
      auto perm = ss_perm == PermutationPolicy::Mode::Shuffled ? PermutationPolicy::shuffled(ss_seed)
                                                                : PermutationPolicy::ascending();
      auto sched = HopSchedule::build(ss_n, set, ss_r, perm);
      out << "bootstrap: " << sched.bootstrap().to_string() << "\n";
      out << "R-type (K=10): " << gen_r_type(ss_r).to_string() << "\n";
      for (int lambda = 0; lambda <= 4; ++lambda) {
        auto seq = gen_lambda_type(set, lambda, perm);
        out << lambda << "-type (K=" << seq.length() << "): " << seq.to_string() << "\n";
      }
      return kExitOk;
    }

    if (*sequence) {
      auto set = parse_set(sq_channels, "--channels");
      auto perm = sq_perm == PermutationPolicy::Mode::Shuffled ? PermutationPolicy::shuffled(sq_seed)
                                                                : PermutationPolicy::ascending();
      auto sched = HopSchedule::build(sq_n, set, sq_r, perm);
      const std::uint64_t slots = sq_slots ? sq_slots : 10 * sched.columns();
      Rng rng(sq_seed);
      auto policy = sq_wild == WildcardMode::RandomFill ? WildcardPolicy::random_fill(rng) : WildcardPolicy::no_match();
      std::vector<Hop> hops;
      for (std::uint64_t t = 0; t < slots; ++t) hops.push_back(channel_at(sched, t, policy));
      auto cell = [](Hop h) { return h.is_no_match() ? std::string("*") : std::to_string(h.channel()); };

      out << "bootstrap: " << sched.bootstrap().to_string() << ", L=" << sched.columns()
          << ", period=" << sched.full_period() << "\n";
      for (std::uint64_t t = 0; t < slots; ++t) {
        if (t % sched.columns() == 0) out << (t ? "\n" : "") << "row " << t / sched.columns() + 1 << ":";
        out << ' ' << cell(hops[t]);
      }
      out << "\n";

      if (!sq_format.empty()) {
        std::ostringstream doc;
        if (sq_format == "csv") {
          doc << "slot,channel\n";
          for (std::uint64_t t = 0; t < slots; ++t) doc << t + 1 << ',' << cell(hops[t]) << "\n";
          doc << "# tool=" << kToolName << " version=" << kToolVersion << "\n";
          doc << "# params=n=" << sq_n << " channels=" << set.to_string() << " r=" << sq_r
              << " wildcard=" << wildcard_name(sq_wild) << " perm=" << perm_name(sq_perm) << "\n";
          doc << "# seed=" << sq_seed << "\n";
        } else {
          ordered_json j;
          j["tool"] = kToolName;
          j["version"] = kToolVersion;
          j["params"] = {{"n", sq_n}, {"channels", set.to_string()}, {"r", sq_r}, {"slots", slots},
                         {"wildcard", wildcard_name(sq_wild)}, {"perm", perm_name(sq_perm)}};
          j["seed"] = sq_seed;
          j["bootstrap"] = sched.bootstrap().to_string();
          j["channels"] = ordered_json::array();
          for (Hop h : hops) j["channels"].push_back(cell(h));
          doc << j.dump(2) << "\n";
        }
        write_output(doc.str(), sq_out, out);
      }
      return kExitOk;
    }

    if (*verify) {
      auto a = parse_set(vf_a, "--ca");
      auto b = parse_set(vf_b, "--cb");
      auto scenario = make_scenario(vf_n, a, b);
      VerifyOptions opts;
      if (vf_perm == PermutationPolicy::Mode::Shuffled) opts.perm = PermutationPolicy::shuffled(vf_seed);
      if (vf_max_drifts) opts.drift_limit = vf_max_drifts;
      auto report = verify_bound(scenario, opts);
      out << (report.pass() ? "PASS" : "FAIL") << ": max TTR " << report.max_ttr_found
          << (report.pass() ? " <= " : " > ") << report.bound << " (worst R_A=" << report.worst_ra
          << " R_B=" << report.worst_rb << " drift=" << report.worst_drift << "; " << report.trials
          << " trials, " << report.violations << " violations"
          << (report.exhaustive ? "" : ", drift range capped") << ")\n";
      if (!vf_format.empty()) {
        ordered_json j;
        j["tool"] = kToolName;
        j["version"] = kToolVersion;
        j["params"] = {{"n", vf_n}, {"ca", a.to_string()}, {"cb", b.to_string()}, {"perm", perm_name(vf_perm)},
                       {"max_drifts", vf_max_drifts}};
        j["seed"] = vf_seed;
        j["pass"] = report.pass();
        j["max_ttr_found"] = report.max_ttr_found;
        j["bound"] = report.bound;
        j["trials"] = report.trials;
        j["violations"] = report.violations;
        j["exhaustive"] = report.exhaustive;
        j["worst"] = {{"r_a", report.worst_ra}, {"r_b", report.worst_rb}, {"drift", report.worst_drift}};
        write_output(j.dump(2) + "\n", vf_out, out);
      }
      return report.pass() ? kExitOk : kExitFailure;
    }

    if (*simulate) {
      if (sim_flags.g->count() == 0) throw UsageError("simulate requires --g");
      MonteCarloConfig mc{sim_cfg.n_channels, sim_cfg.theta_a, sim_cfg.theta_b, sim_cfg.overlap,
                          sim_cfg.trials,     sim_cfg.drift_max, sim_cfg.wildcard, sim_cfg.perm,
                          0,                  sim_cfg.threads};
      auto stats = monte_carlo(mc, sim_cfg.seed);
      out << summary_text(stats) << " (wildcard=" << wildcard_name(sim_cfg.wildcard)
          << " perm=" << perm_name(sim_cfg.perm) << " seed=" << sim_cfg.seed << ")\n";
      if (!sim_format.empty()) {
        std::vector<SweepRow> rows{SweepRow{"simulate", static_cast<double>(sim_cfg.overlap), stats.trials,
                                            stats.ettr, stats.mttr_observed, stats.ci95_halfwidth, sim_cfg.seed,
                                            stats.budget_exceeded}};
        write_output(sim_format == "csv" ? sweep_csv(rows, sim_cfg) : sweep_json(rows, sim_cfg), sim_out, out);
      }
      if (stats.budget_exceeded) {
        err << "error: " << stats.budget_exceeded << " trial(s) exceeded the guaranteed bound\n";
        return kExitFailure;
      }
      return kExitOk;
    }

    if (*sweep) {
      ExperimentConfig cfg = scene_defaults(sweep_scene);
      const char* swept = sweep_scene == 1 ? "--g" : sweep_scene == 2 ? "--n" : "--theta-b";
      CLI::Option* swept_opt = sweep_scene == 1 ? sw_flags.g : sweep_scene == 2 ? sw_flags.n : sw_flags.theta_b;
      if (swept_opt->count()) throw UsageError(std::string(swept) + " is the swept parameter of this scene");
      if (sweep_scene == 2 && sw_flags.g->count() == 0) throw UsageError("scene 2 requires an explicit --g");
      if (sw_flags.n->count()) cfg.n_channels = sw_cfg.n_channels;
      if (sw_flags.theta_a->count()) cfg.theta_a = sw_cfg.theta_a;
      if (sw_flags.theta_b->count()) cfg.theta_b = sw_cfg.theta_b;
      if (sw_flags.g->count()) cfg.overlap = sw_cfg.overlap;
      cfg.trials = sw_cfg.trials;
      cfg.drift_max = sw_cfg.drift_max;
      cfg.seed = sw_cfg.seed;
      cfg.wildcard = sw_cfg.wildcard;
      cfg.perm = sw_cfg.perm;
      cfg.threads = sw_cfg.threads;

      auto rows = run_sweep(cfg);
      std::uint64_t exceeded = 0;
      for (const auto& r : rows) exceeded += r.budget_exceeded;
      if (sw_format.empty() || !sw_out.empty()) {
        out << "scene " << cfg.scene << " (wildcard=" << wildcard_name(cfg.wildcard) << " perm=" << perm_name(cfg.perm)
            << " seed=" << cfg.seed << ")\n"
            << rows_text(rows);
      }
      if (!sw_format.empty()) write_output(sw_format == "csv" ? sweep_csv(rows, cfg) : sweep_json(rows, cfg), sw_out, out);
      if (exceeded) {
        err << "error: " << exceeded << " trial(s) exceeded the guaranteed bound\n";
        return kExitFailure;
      }
      return kExitOk;
    }

    if (*properties) {
      caps.engine_checks = !no_engine;
      if (ns_list) caps.bootstrap_ns = parse_int_list(*ns_list, "--ns");
      if (coverage_list) caps.pair_coverage_sizes = parse_int_list(*coverage_list, "--coverage-sizes");
      auto report = run_property_suite(caps);
      for (const auto& o : report.outcomes) {
        out << (o.pass() ? "PASS " : "FAIL ") << o.name << " checked=" << o.checked << " violations=" << o.violations;
        if (!o.pass()) out << " first=" << o.first_violation;
        out << "\n";
      }
      out << (report.pass() ? "all properties hold" : "property violations found") << " (" << report.outcomes.size()
          << " checks)\n";
      return report.pass() ? kExitOk : kExitFailure;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace qcms
