// immunoscan command line: synth, detect, run, baseline.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "immunoscan/immunoscan.hpp"

namespace fs = std::filesystem;
using namespace immunoscan;

namespace {

struct Loaded {
  FeaturePanel panel;
  std::string digest;
};

Loaded load_panel(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();
  std::istringstream text(bytes);
  return {parse_panel_csv(text), sha256_hex(bytes)};
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorKind::io, "write to '" + path + "' failed");
}

std::string format_double(double v) {
  std::ostringstream os;
  detail::write_double(os, v);
  return os.str();
}

const std::map<std::string, UMode> kUModes{
    {"uniform", UMode::uniform}, {"ternary", UMode::ternary}, {"zero", UMode::zero}};
const std::map<std::string, UScope> kUScopes{{"per-feature", UScope::per_feature},
                                             {"global", UScope::global}};
const std::map<std::string, GrowthBasis> kGrowthBases{{"normalized", GrowthBasis::normalized},
                                                      {"raw", GrowthBasis::raw}};
const std::map<std::string, NormalizationScope> kNormScopes{
    {"per-entity", NormalizationScope::per_entity}, {"global", NormalizationScope::global}};
const std::map<std::string, MaskMode> kMaskModes{{"zero-include", MaskMode::zero_include},
                                                 {"exclude", MaskMode::exclude}};
const std::map<std::string, BaselineBasis> kBaselineBases{{"normalized", BaselineBasis::normalized},
                                                          {"raw", BaselineBasis::raw}};

template <typename T>
CLI::Option* add_choice(CLI::App* cmd, const std::string& name, T& target,
                        const std::map<std::string, T>& choices, const std::string& help) {
  std::vector<std::string> keys;
  for (const auto& [k, v] : choices) keys.push_back(k);
  return cmd
      ->add_option_function<std::string>(
          name, [&target, &choices](const std::string& s) { target = choices.at(s); }, help)
      ->check(CLI::IsMember(keys));
}

struct CommonArgs {
  std::string panel;
  std::string self_id;
  std::string out;
  NormalizationScope scope = NormalizationScope::per_entity;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--panel", a.panel, "Long-format panel CSV (entity,year,feature,value)")->required();
  cmd->add_option("--self", a.self_id, "Entity id of the acquirer")->required();
  add_choice(cmd, "--norm-scope", a.scope, kNormScopes, "Min-max scope: per-entity or global");
}

CorrelationReport baseline_for(const FeaturePanel& panel, const std::string& self_id,
                               NormalizationScope scope, BaselineBasis basis) {
  if (basis == BaselineBasis::raw) return correlation_baseline(panel, self_id);
  return correlation_baseline(normalize_minmax(panel, scope).panel, self_id);
}

int cmd_synth(const SynthOptions& opt, const std::string& out) {
  std::ostringstream os;
  write_panel_csv(os, synthesize_panel(opt));
  write_text(out, os.str());
  return 0;
}

int cmd_detect(const CommonArgs& a, double n, GrowthBasis basis) {
  const auto loaded = load_panel(a.panel);
  const auto data = prepare(loaded.panel, a.self_id, a.scope);
  const auto snap = detector_snapshot(data, n, basis);
  nlohmann::json doc = snapshot_json(snap, data.self_normalized);
  doc["growth_basis"] = to_string(basis);
  doc["norm_scope"] = to_string(a.scope);
  doc["input_sha256"] = loaded.digest;
  nlohmann::json warnings = nlohmann::json::array();
  for (const auto& w : data.warnings) warnings.push_back(w);
  for (const auto& w : snap.stats.warnings) warnings.push_back(w);
  for (const auto& w : snap.ranges.warnings) warnings.push_back(w);
  doc["warnings"] = warnings;
  write_text(a.out, doc.dump(2) + "\n");
  return 0;
}

int cmd_baseline(const CommonArgs& a, BaselineBasis basis) {
  const auto loaded = load_panel(a.panel);
  const auto rep = baseline_for(loaded.panel, a.self_id, a.scope, basis);
  std::ostringstream os;
  os << "entity,r\n";
  for (std::size_t e : rep.ordering) os << rep.entities[e] << ',' << format_double(rep.r[e]) << '\n';
  write_text(a.out, os.str());
  return 0;
}

int cmd_run(const CommonArgs& a, TrialConfig config, unsigned workers, BaselineBasis baseline_basis) {
  config.scope = a.scope;
  const auto loaded = load_panel(a.panel);
  const auto data = prepare(loaded.panel, a.self_id, a.scope);
  const auto snap = detector_snapshot(data, config.n, config.growth_basis);
  const auto result = run_trials(config, data, {workers, false});

  nlohmann::json cfg = config_json(config);
  cfg["panel"] = a.panel;
  cfg["input_sha256"] = loaded.digest;
  cfg["self"] = a.self_id;
  cfg["workers"] = workers;
  cfg["baseline_basis"] = to_string(baseline_basis);

  nlohmann::json warnings = nlohmann::json::array();
  for (const auto& w : data.warnings) warnings.push_back(w);
  for (const auto& w : snap.stats.warnings) warnings.push_back(w);
  for (const auto& w : snap.ranges.warnings) warnings.push_back(w);

  nlohmann::json tables = nlohmann::json::object(), summaries = nlohmann::json::object(),
                 majority = nlohmann::json::object();
  const fs::path out_dir = fs::path(a.out).parent_path();
  nlohmann::json rank_files = nlohmann::json::object();
  for (const auto& table : result.tables) {
    const std::string key(to_string(table.measure));
    tables[key] = table_json(table);
    summaries[key] = summary_json(summarize(table));
    majority[key] = rank1_majority(table);
    std::ostringstream csv;
    write_rank_csv(csv, table);
    const fs::path csv_path = out_dir / ("ranks_" + key + ".csv");
    write_text(csv_path.string(), csv.str());
    rank_files[key] = csv_path.string();
  }

  nlohmann::json baseline;
  try {
    baseline = baseline_json(baseline_for(loaded.panel, a.self_id, a.scope, baseline_basis), baseline_basis);
    baseline["rank1_majority"] = majority;
  } catch (const Error& ex) {
    baseline = {{"basis", to_string(baseline_basis)}, {"error", ex.what()}};
    warnings.push_back(std::string("baseline skipped: ") + ex.what());
  }

  nlohmann::json report = {{"tool", {{"name", kToolName}, {"version", kToolVersion}}},
                           {"config", cfg},
                           {"warnings", warnings},
                           {"detector", snapshot_json(snap, data.self_normalized)},
                           {"rank_tables", tables},
                           {"rank_files", rank_files},
                           {"summaries", summaries},
                           {"baseline", baseline}};
  write_text(a.out, report.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Negative selection screening of takeover candidates"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  // run
  CommonArgs run_args;
  TrialConfig config;
  std::string measure = "both";
  unsigned workers = 1;
  BaselineBasis baseline_basis = BaselineBasis::normalized;
  run_args.out = "report.json";
  auto* run = app.add_subcommand("run", "Run the Monte Carlo trials and write a JSON report plus rank CSVs");
  add_common(run, run_args);
  run->add_option("--n", config.n, "Detector span index")->check(CLI::NonNegativeNumber)->capture_default_str();
  run->add_option("--trials", config.trials, "Number of trials")->check(CLI::PositiveNumber)->capture_default_str();
  run->add_option("--seed", config.seed, "Master seed")->envname("IMMUNOSCAN_SEED")->capture_default_str();
  add_choice(run, "--u-mode", config.u_mode, kUModes, "uniform, ternary or zero");
  add_choice(run, "--u-scope", config.u_scope, kUScopes, "per-feature or global");
  add_choice(run, "--growth-basis", config.growth_basis, kGrowthBases, "normalized or raw");
  run->add_option("--measure", measure, "euclidean, cosine or both")
      ->check(CLI::IsMember({"euclidean", "cosine", "both"}))
      ->capture_default_str();
  add_choice(run, "--mask-mode", config.mask_mode, kMaskModes, "zero-include or exclude");
  add_choice(run, "--baseline-basis", baseline_basis, kBaselineBases, "normalized or raw");
  run->add_option("--workers", workers, "Worker threads for the trials")->check(CLI::PositiveNumber);
  run->add_option("--out", run_args.out, "Report path; rank CSVs go next to it")->capture_default_str();

  // detect
  CommonArgs detect_args;
  double detect_n = 0.45;
  GrowthBasis detect_basis = GrowthBasis::normalized;
  auto* detect = app.add_subcommand("detect", "Print the u = 0 detector ranges and accepted matrix as JSON");
  add_common(detect, detect_args);
  detect->add_option("--n", detect_n, "Detector span index")->check(CLI::NonNegativeNumber)->capture_default_str();
  add_choice(detect, "--growth-basis", detect_basis, kGrowthBases, "normalized or raw");
  detect->add_option("--out", detect_args.out, "Output path (default stdout)");

  // synth
  SynthOptions synth_opt;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Write a synthetic panel with one planted outlier");
  synth->add_option("--entities", synth_opt.entities, "Entity count including self")->capture_default_str();
  synth->add_option("--features", synth_opt.features, "Feature count")->capture_default_str();
  synth->add_option("--years", synth_opt.years, "Year count")->capture_default_str();
  synth->add_option("--start-year", synth_opt.start_year, "First year label")->capture_default_str();
  synth->add_option("--self", synth_opt.self_id, "Self entity id")->capture_default_str();
  synth->add_option("--outlier", synth_opt.outlier_id, "Planted outlier id")->capture_default_str();
  synth->add_option("--seed", synth_opt.seed, "Generator seed")->envname("IMMUNOSCAN_SEED")->capture_default_str();
  synth->add_option("--noise", synth_opt.noise, "Relative jitter of the near copies")->capture_default_str();
  synth->add_option("--out", synth_out, "Output path (default stdout)");

  // baseline
  CommonArgs baseline_args;
  BaselineBasis basis = BaselineBasis::normalized;
  auto* base = app.add_subcommand("baseline", "Pearson correlation of year-averaged features (entity,r CSV)");
  add_common(base, baseline_args);
  add_choice(base, "--basis", basis, kBaselineBases, "normalized or raw");
  base->add_option("--out", baseline_args.out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*synth) {
      try {
        synth_opt.validate();
      } catch (const Error& ex) {
        std::cerr << "immunoscan: " << ex.what() << '\n';
        return 2;
      }
      return cmd_synth(synth_opt, synth_out);
    }
    if (*detect) return cmd_detect(detect_args, detect_n, detect_basis);
    if (*base) return cmd_baseline(baseline_args, basis);
    if (*run) {
      if (measure == "euclidean")
        config.measures = {SimilarityMeasure::euclidean_distance};
      else if (measure == "cosine")
        config.measures = {SimilarityMeasure::cosine_angle};
      return cmd_run(run_args, config, workers, baseline_basis);
    }
  } catch (const Error& ex) {
    std::cerr << "immunoscan: " << ex.what() << '\n';
    return 1;
  } catch (const std::exception& ex) {
    std::cerr << "immunoscan: " << ex.what() << '\n';
    return 1;
  }
  return 0;
}
