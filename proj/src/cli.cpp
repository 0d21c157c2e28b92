#include "ep/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ep/bootstrap.hpp"
#include "ep/csv.hpp"
#include "ep/epa.hpp"
#include "ep/eval.hpp"
#include "ep/ingest.hpp"
#include "ep/rng.hpp"
#include "ep/synth.hpp"
#include "ep/trainers.hpp"
#include "ep/util.hpp"

namespace fs = std::filesystem;

namespace ep::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

RecipeMode recipe_from_string(const std::string& s) {
  if (s == "appendix" || s == "appendix_design") return RecipeMode::AppendixDesign;
  if (s == "linear") return RecipeMode::Linear;
  throw ConfigError("mlr recipe must be appendix|linear, got \"" + s + "\"");
}

MlrFitOptions mlr_options(const KeyValueConfig& cfg, const std::string& prefix) {
  MlrFitOptions opt;
  opt.l2 = cfg.get_real(prefix + "l2", opt.l2);
  opt.tol = cfg.get_real(prefix + "tol", opt.tol);
  opt.max_iter = static_cast<int>(cfg.get_int(prefix + "max_iter", opt.max_iter));
  return opt;
}

GbdtParams gbdt_params(const KeyValueConfig& cfg) {
  GbdtParams p;
  p.num_rounds = static_cast<int>(cfg.get_int("gbdt.num_rounds", p.num_rounds));
  p.max_depth = static_cast<int>(cfg.get_int("gbdt.max_depth", p.max_depth));
  p.learning_rate = cfg.get_real("gbdt.learning_rate", p.learning_rate);
  p.min_child_weight = cfg.get_real("gbdt.min_child_weight", p.min_child_weight);
  p.row_subsample = cfg.get_real("gbdt.row_subsample", p.row_subsample);
  p.col_subsample = cfg.get_real("gbdt.col_subsample", p.col_subsample);
  p.l2_leaf_penalty = cfg.get_real("gbdt.l2_leaf_penalty", p.l2_leaf_penalty);
  for (const auto& [name, dir] : cfg.with_prefix("gbdt.monotone."))
    p.monotone_constraints[name] = std::stoi(dir);
  return p;
}

}  // namespace

TrainerSpec trainer_from_config(const KeyValueConfig& cfg) {
  TrainerSpec spec;
  spec.model = cfg.get_string("trainer.model", spec.model);
  if (spec.model != "mlr" && spec.model != "gbdt" && spec.model != "gbdt_regression_monotone")
    throw ConfigError("trainer.model must be mlr|gbdt|gbdt_regression_monotone");
  spec.scheme = weight_scheme_from_label(
      cfg.get_string("trainer.scheme", weight_scheme_label(spec.scheme)));
  spec.strategy = cfg.get_string("trainer.strategy", spec.strategy);
  if (spec.strategy != "plain" && spec.strategy != "averaged_subsample" &&
      spec.strategy != "catalytic")
    throw ConfigError("trainer.strategy must be plain|averaged_subsample|catalytic");
  spec.M = static_cast<int>(cfg.get_int("trainer.M", spec.M));

  spec.recipe = recipe_from_string(cfg.get_string("mlr.recipe", "appendix"));
  if (cfg.has("mlr.linear_cols")) spec.linear_cols = cfg.get_list("mlr.linear_cols");
  spec.mlr_opt = mlr_options(cfg, "mlr.");

  spec.gbdt = gbdt_params(cfg);
  spec.gbdt.objective = spec.model == "gbdt_regression_monotone"
                            ? GbdtObjective::SquaredError
                            : GbdtObjective::MulticlassSoftmax;
  if (cfg.has("gbdt.features")) spec.gbdt_features = cfg.get_list("gbdt.features");

  spec.cat_M_synth = cfg.get_int("catalytic.M_synth", spec.cat_M_synth);
  spec.cat_phi = cfg.get_real("catalytic.phi", spec.cat_phi);
  spec.cat_drive_shared = cfg.get_bool("catalytic.drive_shared", spec.cat_drive_shared);
  spec.prior_recipe = recipe_from_string(cfg.get_string("catalytic.prior.recipe", "appendix"));
  if (cfg.has("catalytic.prior.linear_cols"))
    spec.prior_linear_cols = cfg.get_list("catalytic.prior.linear_cols");
  spec.prior_opt = mlr_options(cfg, "catalytic.prior.");
  return spec;
}

namespace {

FitFn base_fitter(const TrainerSpec& spec) {
  if (spec.model == "mlr")
    return make_mlr_fitter(spec.recipe, spec.mlr_opt, spec.linear_cols);
  if (spec.model == "gbdt") return make_gbdt_fitter(spec.gbdt, spec.gbdt_features);
  throw ConfigError("trainer.model \"" + spec.model + "\" does not fit probability models");
}

}  // namespace

ModelPtr fit_with_spec(const PlayDataset& train, const TrainerSpec& spec, std::uint64_t seed) {
  const FitFn base = base_fitter(spec);
  if (spec.strategy == "plain") {
    return spec.scheme == WeightScheme::Unit ? fit_unweighted(train, base, seed)
                                             : fit_weighted(train, base, seed);
  }
  if (spec.strategy == "averaged_subsample")
    return fit_averaged_subsample(train, spec.M, base, seed);

  CatalyticConfig cat;
  cat.M_synth = spec.cat_M_synth;
  cat.phi = spec.cat_phi;
  cat.drive_shared_outcomes = spec.cat_drive_shared;
  cat.seed = seed;
  cat.prior_fitter = make_mlr_fitter(spec.prior_recipe, spec.prior_opt, spec.prior_linear_cols);
  cat.target_fitter = base;
  return catalytic_fit(train.with_weights(spec.scheme), cat);
}

namespace {

struct Common {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 0;

  KeyValueConfig cfg;
  std::vector<std::pair<std::string, std::string>> data_hashes;  // path -> hex
};

std::uint64_t hash_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string bytes = ss.str();
  return fnv1a(bytes.data(), bytes.size());
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path, "key = value run config file");
  sub->add_option("--out", c.out_dir, "run output directory");
  sub->add_option("--seed", c.seed, "master seed (overrides config)")
      ->envname("EP_SEED")
      ->each([&c](const std::string&) { c.seed_given = true; });
  sub->add_option("--threads", c.threads, "worker threads (0 = hardware)")->envname("EP_THREADS");
}

// Loads config, resolves seed/threads, creates the run directory, and
// writes the resolved config + manifest skeleton.
class Run {
 public:
  Run(Common& c, const std::string& command) : c_(c), command_(command) {
    if (!c_.config_path.empty()) c_.cfg = KeyValueConfig::from_file(c_.config_path);
    if (c_.seed_given) c_.cfg.set("seed", std::to_string(c_.seed));
    c_.seed = static_cast<std::uint64_t>(c_.cfg.get_int("seed", 0));
    if (c_.threads > 0) c_.cfg.set("threads", std::to_string(c_.threads));
    set_thread_count(static_cast<int>(c_.cfg.get_int("threads", 0)));
  }

  // Registers an input file in the manifest.
  void track_data(const std::string& path) {
    c_.data_hashes.emplace_back(path, to_hex(hash_file(path)));
  }

  // Flag-level override that also lands in the resolved config.
  void override_key(const std::string& key, const std::string& value) { c_.cfg.set(key, value); }

  std::uint64_t seed() const { return c_.seed; }
  const KeyValueConfig& cfg() const { return c_.cfg; }

  // Creates the output directory (named from content hashes when the
  // user gave none) and writes resolved_config + manifest.
  fs::path finalize_dir() {
    std::uint64_t h = fnv1a(c_.cfg.to_text());
    for (const auto& [p, hex] : c_.data_hashes) h = fnv1a(hex.data(), hex.size(), h);
    if (c_.out_dir.empty())
      c_.out_dir = "runs/" + command_ + "-" + to_hex(h).substr(8);
    fs::create_directories(c_.out_dir);
    c_.cfg.write_file((fs::path(c_.out_dir) / "resolved_config.txt").string());
    nlohmann::json manifest{{"command", command_},
                            {"version", kVersion},
                            {"seed", c_.seed},
                            {"threads", thread_count()},
                            {"config_hash", to_hex(fnv1a(c_.cfg.to_text()))}};
    nlohmann::json data = nlohmann::json::object();
    for (const auto& [p, hex] : c_.data_hashes) data[p] = hex;
    manifest["data_hashes"] = data;
    std::ofstream out(fs::path(c_.out_dir) / "manifest.json");
    out << manifest.dump(2) << "\n";
    return fs::path(c_.out_dir);
  }

 private:
  Common& c_;
  std::string command_;
};

PlayDataset load_dataset(Run& run, const std::string& path, bool apply_scheme) {
  run.track_data(path);
  const IngestConfig icfg = IngestConfig::from_config(run.cfg());
  PlayDataset ds = parse_play_csv(path, icfg);
  if (!apply_scheme) return ds;
  const WeightScheme scheme = weight_scheme_from_label(
      run.cfg().get_string("trainer.scheme", "inverse_drive_length"));
  return ds.with_weights(scheme);
}

int cmd_ingest(Common& c, const std::string& data) {
  Run run(c, "ingest");
  PlayDataset ds = load_dataset(run, data, false);
  const WeightScheme scheme =
      weight_scheme_from_label(run.cfg().get_string("weights.scheme", "inverse_drive_length"));
  ds = ds.with_weights(scheme);
  const fs::path dir = run.finalize_dir();
  write_play_csv((dir / "dataset.csv").string(), ds);
  nlohmann::json stats{{"n_plays", ds.n_plays()},
                       {"n_drives", ds.n_drives()},
                       {"weight_scheme", weight_scheme_label(scheme)},
                       {"total_weight", ds.total_weight()}};
  std::ofstream(dir / "stats.json") << stats.dump(2) << "\n";
  log_info("ingest: " + std::to_string(ds.n_plays()) + " plays, " +
           std::to_string(ds.n_drives()) + " drives -> " + (dir / "dataset.csv").string());
  return 0;
}

int cmd_simulate(Common& c) {
  Run run(c, "simulate");
  SynthConfig scfg = SynthConfig::from_config(run.cfg());
  if (!run.cfg().has("synth.seed")) scfg.seed = run.seed();
  const PlayDataset ds = generate_league(scfg);
  const fs::path dir = run.finalize_dir();
  write_play_csv((dir / "league.csv").string(), ds);
  log_info("simulate: " + std::to_string(ds.n_plays()) + " plays, " +
           std::to_string(ds.n_drives()) + " drives -> " + (dir / "league.csv").string());
  return 0;
}

int cmd_tune(Common& c, const std::string& data) {
  Run run(c, "tune");
  const PlayDataset ds = load_dataset(run, data, true);
  const TrainerSpec spec = trainer_from_config(run.cfg());
  const auto grid = default_tuning_grid(spec.gbdt);
  const TuneResult result = tune_grid(ds, grid, derive(run.seed(), fnv1a("tune")));
  const fs::path dir = run.finalize_dir();

  std::vector<std::vector<std::string>> rows;
  for (const auto& [params, ll] : result.table)
    rows.push_back({std::to_string(params.max_depth), format_double(params.learning_rate),
                    std::to_string(params.num_rounds), format_double(ll)});
  write_csv((dir / "tune_table.csv").string(),
            {"max_depth", "learning_rate", "num_rounds", "validation_logloss"}, rows);
  std::ofstream(dir / "best_params.json") << result.best.to_json().dump(2) << "\n";
  log_info("tune: best depth=" + std::to_string(result.best.max_depth) +
           " lr=" + std::to_string(result.best.learning_rate) +
           " rounds=" + std::to_string(result.best.num_rounds));
  return 0;
}

int cmd_train(Common& c, const std::string& data) {
  Run run(c, "train");
  const PlayDataset ds = load_dataset(run, data, false);
  const TrainerSpec spec = trainer_from_config(run.cfg());
  const fs::path dir = run.finalize_dir();
  if (spec.model == "gbdt_regression_monotone") {
    const GbdtModel model =
        fit_gbdt_regression_monotone(ds.with_weights(spec.scheme), spec.gbdt);
    std::ofstream(dir / "model.json") << model.to_json().dump(2) << "\n";
  } else {
    const ModelPtr model = fit_with_spec(ds, spec, run.seed());
    save_model((dir / "model.json").string(), *model);
  }
  log_info("train: model written to " + (dir / "model.json").string());
  return 0;
}

// True when the JSON at path is a squared-error gbdt dump (an EP
// regression model rather than an outcome probability model).
bool is_regression_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model file: " + path);
  nlohmann::json j;
  in >> j;
  return j.at("type").get<std::string>() == "gbdt" &&
         j.at("params").at("objective").get<std::string>() == "squared_error";
}

int cmd_evaluate(Common& c, const std::string& data, const std::string& model_path,
                 const std::string& ensemble_dir, bool dump_subsamples) {
  Run run(c, "evaluate");
  const PlayDataset test = load_dataset(run, data, false);
  const int M_test = static_cast<int>(run.cfg().get_int("eval.M_test", 100));
  const double alpha = run.cfg().get_real("eval.alpha", 0.95);
  const std::uint64_t eval_seed = derive(run.seed(), fnv1a("eval"));
  const auto subs = draw_test_subsamples(test, M_test, eval_seed);

  std::vector<MetricReport> reports;
  if (!model_path.empty()) {
    if (is_regression_model(model_path)) {
      std::ifstream in(model_path);
      nlohmann::json j;
      in >> j;
      const GbdtModel reg = GbdtModel::from_json(j);
      reports.push_back(
          rmse_ep([&reg](const GameState& x) { return reg.predict_value(x); }, test, subs));
    } else {
      const ModelPtr model = load_model(model_path);
      reports.push_back(rmse(*model, test, subs));
      reports.push_back(logloss(*model, test, subs));
      reports.push_back(coverage_single(*model, test, subs, alpha));
    }
  }
  if (!ensemble_dir.empty()) {
    const BootstrapEnsemble ens = BootstrapEnsemble::load(ensemble_dir);
    reports.push_back(coverage_boot(ens, test, subs, alpha, derive(eval_seed, fnv1a("boot"))));
  }
  if (reports.empty()) throw ConfigError("evaluate: need --model and/or --ensemble");

  const fs::path dir = run.finalize_dir();
  write_reports_csv((dir / "metrics.csv").string(), reports);
  std::ofstream(dir / "metrics.json") << reports_json(reports, false).dump(2) << "\n";
  if (dump_subsamples)
    write_subsample_values_csv((dir / "metric_subsamples.csv").string(), reports);
  for (const auto& r : reports)
    log_info("evaluate: " + r.metric + " = " + std::to_string(r.value) + " +- " +
             std::to_string(2.0 * r.se) + " (2se)");
  return 0;
}

int cmd_bootstrap(Common& c, const std::string& data) {
  Run run(c, "bootstrap");
  const PlayDataset ds = load_dataset(run, data, false);
  const TrainerSpec spec = trainer_from_config(run.cfg());
  if (spec.model == "gbdt_regression_monotone")
    throw ConfigError("bootstrap: regression models are not outcome probability models");
  const int B = static_cast<int>(run.cfg().get_int("bootstrap.B", 100));
  const BootstrapScheme scheme =
      bootstrap_scheme_from_label(run.cfg().get_string("bootstrap.scheme", "cluster_drives"));
  const FitFn member = [&spec](const PlayDataset& d, std::uint64_t s) {
    return fit_with_spec(d, spec, s);
  };
  const BootstrapEnsemble ens =
      fit_bootstrap_ensemble(ds, B, scheme, member, derive(run.seed(), fnv1a("bootstrap")));
  const fs::path dir = run.finalize_dir();
  ens.save((dir / "ensemble").string());
  log_info("bootstrap: " + std::to_string(B) + " members -> " + (dir / "ensemble").string());
  return 0;
}

int cmd_catalytic(Common& c, const std::string& data, const std::string& test_path,
                  std::vector<double> phi_grid, double phi_flag, bool phi_given) {
  Run run(c, "catalytic");
  if (phi_given) run.override_key("catalytic.phi", format_double(phi_flag));
  const PlayDataset ds = load_dataset(run, data, false);
  TrainerSpec spec = trainer_from_config(run.cfg());
  spec.strategy = "catalytic";
  const fs::path dir = run.finalize_dir();

  if (phi_grid.empty()) {
    const ModelPtr model = fit_with_spec(ds, spec, run.seed());
    save_model((dir / "model.json").string(), *model);
    log_info("catalytic: phi=" + std::to_string(spec.cat_phi) + " model written");
    return 0;
  }

  if (test_path.empty())
    throw ConfigError("catalytic: --phi-grid needs --test for the trade-off table");
  run.track_data(test_path);
  const PlayDataset test = parse_play_csv(test_path, IngestConfig::from_config(run.cfg()));
  const int M_test = static_cast<int>(run.cfg().get_int("eval.M_test", 100));
  const auto subs = draw_test_subsamples(test, M_test, derive(run.seed(), fnv1a("eval")));

  std::vector<std::vector<std::string>> rows;
  for (double phi : phi_grid) {
    TrainerSpec s = spec;
    s.cat_phi = phi;
    const ModelPtr model = fit_with_spec(ds, s, run.seed());
    const MetricReport ll = logloss(*model, test, subs);
    const MetricReport rm = rmse(*model, test, subs);
    rows.push_back({format_double(phi), format_double(ll.value), format_double(ll.se),
                    format_double(rm.value), format_double(rm.se)});
    char name[48];
    std::snprintf(name, sizeof(name), "model_phi_%g.json", phi);
    save_model((dir / name).string(), *model);
  }
  write_csv((dir / "catalytic_tradeoff.csv").string(),
            {"phi", "logloss", "logloss_se", "rmse", "rmse_se"}, rows);
  log_info("catalytic: trade-off table with " + std::to_string(phi_grid.size()) + " phi values");
  return 0;
}

int cmd_epa(Common& c, const std::string& data, const std::string& model_path,
            const std::string& ensemble_dir, const std::string& entity_name, int season,
            long long min_plays, bool plot_data) {
  Run run(c, "epa");
  const PlayDataset ds = load_dataset(run, data, false);
  const ModelPtr model = load_model(model_path);
  run.track_data(model_path);
  EpaEntity entity;
  if (entity_name == "team") entity = EpaEntity::Team;
  else if (entity_name == "passer_or_rusher") entity = EpaEntity::PasserOrRusher;
  else throw ConfigError("epa: --entity must be team|passer_or_rusher");
  const std::optional<int> season_filter =
      season >= 0 ? std::optional<int>(season) : std::nullopt;
  const double level = run.cfg().get_real("epa.level", 0.95);

  EpaTable table;
  if (!ensemble_dir.empty()) {
    const BootstrapEnsemble ens = BootstrapEnsemble::load(ensemble_dir);
    table = epa_confidence_intervals(ds, *model, ens, entity, season_filter, min_plays, level);
  } else {
    table = aggregate_epa(ds, *model, entity, season_filter, min_plays);
  }
  const fs::path dir = run.finalize_dir();
  write_epa_csv((dir / "epa.csv").string(), table);
  std::ofstream(dir / "epa.json") << epa_json(table).dump(2) << "\n";
  if (plot_data) write_epa_plot_csv((dir / "epa_plot.csv").string(), table);
  log_info("epa: " + std::to_string(table.rows.size()) + " entities");
  return 0;
}

// Selection-bias summary: play share and points per drive for good
// (spread < -3) versus bad (spread > +3) possessions, overall and near
// the opponent endzone.
int cmd_summary(Common& c, const std::string& data) {
  Run run(c, "summary");
  const PlayDataset ds = load_dataset(run, data, false);

  struct Bucket {
    long long plays = 0, drives = 0;
    double points = 0.0;
  };
  auto group_of = [](double spread) {
    if (spread < -3.0) return 0;  // good teams are favored
    if (spread > 3.0) return 1;
    return 2;
  };
  const std::array<std::string, 3> group_names = {"good", "bad", "neutral"};
  const std::array<std::string, 2> segment_names = {"all", "near_endzone"};
  std::array<std::array<Bucket, 3>, 2> buckets{};

  for (std::size_t i = 0; i < ds.n_drives(); ++i) {
    const DriveSpan& d = ds.drive(i);
    const PlayRecord& first = ds.play(d.begin);
    const int g = group_of(first.x.posteam_spread);
    buckets[0][g].drives += 1;
    buckets[0][g].points += points_of_outcome(first.outcome_drive);
    bool near = false;
    for (std::size_t r = d.begin; r < d.end; ++r) {
      buckets[0][g].plays += 1;
      if (ds.play(r).x.yardline_100 <= 20) near = true;
    }
    if (near) {
      buckets[1][g].drives += 1;
      buckets[1][g].points += points_of_outcome(first.outcome_drive);
      for (std::size_t r = d.begin; r < d.end; ++r)
        if (ds.play(r).x.yardline_100 <= 20) buckets[1][g].plays += 1;
    }
  }

  std::vector<std::vector<std::string>> rows;
  for (int seg = 0; seg < 2; ++seg) {
    long long total_plays = 0;
    for (const auto& b : buckets[seg]) total_plays += b.plays;
    for (int g = 0; g < 3; ++g) {
      const Bucket& b = buckets[seg][g];
      const double share = total_plays > 0 ? static_cast<double>(b.plays) / total_plays : 0.0;
      const double ppd = b.drives > 0 ? b.points / static_cast<double>(b.drives) : 0.0;
      rows.push_back({segment_names[seg], group_names[g], "play_share", format_double(share)});
      rows.push_back(
          {segment_names[seg], group_names[g], "drives", std::to_string(b.drives)});
      rows.push_back(
          {segment_names[seg], group_names[g], "points_per_drive", format_double(ppd)});
    }
  }
  const fs::path dir = run.finalize_dir();
  write_csv((dir / "summary.csv").string(), {"segment", "group", "metric", "value"}, rows);
  log_info("summary written to " + (dir / "summary.csv").string());
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"drive outcome probability and expected points toolkit"};
  app.require_subcommand(1);

  Common c;
  std::string data, test_path, model_path, ensemble_dir, entity = "team";
  std::vector<double> phi_grid;
  int season = -1;
  long long min_plays = 500;
  bool dump_subsamples = false, plot_data = false;

  auto* ingest = app.add_subcommand("ingest", "validate a play-by-play CSV");
  ingest->add_option("--data", data, "input CSV")->required();
  add_common(ingest, c);

  auto* simulate = app.add_subcommand("simulate", "generate a synthetic league CSV");
  add_common(simulate, c);

  auto* tune = app.add_subcommand("tune", "grid-search gbdt hyperparameters");
  tune->add_option("--data", data, "training CSV")->required();
  add_common(tune, c);

  auto* train = app.add_subcommand("train", "fit a model per the run config");
  train->add_option("--data", data, "training CSV")->required();
  add_common(train, c);

  auto* evaluate = app.add_subcommand("evaluate", "score a model on held-out drives");
  evaluate->add_option("--data", data, "test CSV")->required();
  evaluate->add_option("--model", model_path, "model JSON");
  evaluate->add_option("--ensemble", ensemble_dir, "bootstrap ensemble directory");
  evaluate->add_flag("--dump-subsamples", dump_subsamples, "emit per-subsample metric values");
  add_common(evaluate, c);

  auto* bootstrap = app.add_subcommand("bootstrap", "fit a bootstrap ensemble");
  bootstrap->add_option("--data", data, "training CSV")->required();
  add_common(bootstrap, c);

  auto* catalytic = app.add_subcommand("catalytic", "catalytic-prior fit (optionally a phi grid)");
  catalytic->add_option("--data", data, "training CSV")->required();
  double phi_flag = -1.0;
  bool phi_given = false;
  catalytic->add_option("--phi", phi_flag, "synthetic-to-observed weight ratio")
      ->each([&phi_given](const std::string&) { phi_given = true; });
  catalytic->add_option("--test", test_path, "test CSV for the phi-grid trade-off table");
  catalytic->add_option("--phi-grid", phi_grid, "phi values for the trade-off table");
  add_common(catalytic, c);

  auto* epa = app.add_subcommand("epa", "EPA per play by team or passer/rusher");
  epa->add_option("--data", data, "play CSV")->required();
  epa->add_option("--model", model_path, "model JSON")->required();
  epa->add_option("--ensemble", ensemble_dir, "bootstrap ensemble for confidence intervals");
  epa->add_option("--entity", entity, "team|passer_or_rusher");
  epa->add_option("--season", season, "season filter (-1 = all)");
  epa->add_option("--min-plays", min_plays, "minimum qualifying plays");
  epa->add_flag("--plot-data", plot_data, "emit long-format plot CSV");
  add_common(epa, c);

  auto* summary = app.add_subcommand("summary", "selection-bias summary tables");
  summary->add_option("--data", data, "play CSV")->required();
  add_common(summary, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: kind=config msg=\"%s\"\n", e.what());
    return 2;
  }

  try {
    if (ingest->parsed()) return cmd_ingest(c, data);
    if (simulate->parsed()) return cmd_simulate(c);
    if (tune->parsed()) return cmd_tune(c, data);
    if (train->parsed()) return cmd_train(c, data);
    if (evaluate->parsed())
      return cmd_evaluate(c, data, model_path, ensemble_dir, dump_subsamples);
    if (bootstrap->parsed()) return cmd_bootstrap(c, data);
    if (catalytic->parsed())
      return cmd_catalytic(c, data, test_path, phi_grid, phi_flag, phi_given);
    if (epa->parsed())
      return cmd_epa(c, data, model_path, ensemble_dir, entity, season, min_plays, plot_data);
    if (summary->parsed()) return cmd_summary(c, data);
    throw ConfigError("no subcommand given");
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: kind=config msg=\"%s\"\n", e.what());
    return 2;
  } catch (const DataError& e) {
    std::fprintf(stderr, "error: kind=data msg=\"%s\"\n", e.what());
    return 3;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "error: kind=numeric msg=\"%s\"\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: kind=internal msg=\"%s\"\n", e.what());
    return 1;
  }
}

int run(const std::vector<std::string>& args) {
  std::vector<std::string> full;
  full.push_back("drive_ep");
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : full) argv.push_back(s.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace ep::cli
