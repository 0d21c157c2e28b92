#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ep/cli.hpp"
#include "ep/csv.hpp"
#include "ep/ingest.hpp"
#include "ep/synth.hpp"
#include "ep/util.hpp"

using namespace ep;
namespace fs = std::filesystem;

namespace {

struct Workspace {
  fs::path root;
  Workspace() {
    root = fs::temp_directory_path() / ("ep_cli_" + std::to_string(::getpid()));
    fs::create_directories(root);
  }
  ~Workspace() { fs::remove_all(root); }
  std::string path(const std::string& name) const { return (root / name).string(); }
  void write(const std::string& name, const std::string& text) const {
    std::ofstream out(root / name);
    out << text;
  }
  std::string read(const std::string& name) const {
    std::ifstream in(root / name);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
};

std::string league_csv(const Workspace& ws, std::size_t drives, std::uint64_t seed,
                       const std::string& name) {
  SynthConfig cfg;
  cfg.n_drives = drives;
  cfg.seed = seed;
  const std::string path = ws.path(name);
  write_play_csv(path, generate_league(cfg));
  return path;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("simulate -> train -> evaluate pipeline") {
  Workspace ws;
  ws.write("run.cfg",
           "seed = 5\n"
           "synth.n_drives = 300\n"
           "trainer.model = mlr\n"
           "mlr.recipe = linear\n"
           "eval.M_test = 10\n");

  CHECK(cli::run({"simulate", "--config", ws.path("run.cfg"), "--out", ws.path("sim")}) == 0);
  CHECK(fs::exists(ws.path("sim/league.csv")));
  CHECK(fs::exists(ws.path("sim/manifest.json")));
  CHECK(fs::exists(ws.path("sim/resolved_config.txt")));

  CHECK(cli::run({"train", "--data", ws.path("sim/league.csv"), "--config", ws.path("run.cfg"),
                  "--out", ws.path("model")}) == 0);
  CHECK(fs::exists(ws.path("model/model.json")));

  const std::string test_csv = league_csv(ws, 200, 99, "test.csv");
  CHECK(cli::run({"evaluate", "--data", test_csv, "--model", ws.path("model/model.json"),
                  "--config", ws.path("run.cfg"), "--out", ws.path("eval")}) == 0);
  CHECK(fs::exists(ws.path("eval/metrics.csv")));

  const CsvTable metrics = read_csv(ws.path("eval/metrics.csv"));
  REQUIRE(metrics.rows.size() == 3);
  CHECK(metrics.rows[0][0] == "rmse");
  CHECK(metrics.rows[1][0] == "logloss");
  CHECK(metrics.rows[2][0] == "coverage_single");
}

TEST_CASE("ingest validates and emits the canonical schema") {
  Workspace ws;
  const std::string data = league_csv(ws, 50, 3, "raw.csv");
  CHECK(cli::run({"ingest", "--data", data, "--out", ws.path("ing")}) == 0);
  const PlayDataset ds = parse_play_csv(ws.path("ing/dataset.csv"));
  CHECK(ds.n_drives() == 50);
}

TEST_CASE("bootstrap then boot-coverage evaluation") {
  Workspace ws;
  ws.write("run.cfg",
           "seed = 11\n"
           "trainer.model = mlr\n"
           "mlr.recipe = linear\n"
           "bootstrap.B = 5\n"
           "eval.M_test = 5\n");
  const std::string train_csv = league_csv(ws, 150, 7, "train.csv");
  const std::string test_csv = league_csv(ws, 100, 8, "test.csv");

  CHECK(cli::run({"bootstrap", "--data", train_csv, "--config", ws.path("run.cfg"), "--out",
                  ws.path("boot")}) == 0);
  CHECK(fs::exists(ws.path("boot/ensemble/manifest.json")));
  CHECK(fs::exists(ws.path("boot/ensemble/member_0004.json")));

  CHECK(cli::run({"evaluate", "--data", test_csv, "--ensemble", ws.path("boot/ensemble"),
                  "--config", ws.path("run.cfg"), "--out", ws.path("bev")}) == 0);
  const CsvTable metrics = read_csv(ws.path("bev/metrics.csv"));
  REQUIRE(metrics.rows.size() == 1);
  CHECK(metrics.rows[0][0] == "coverage_boot");
}

TEST_CASE("catalytic at phi zero reproduces a plain training run") {
  Workspace ws;
  ws.write("run.cfg",
           "seed = 13\n"
           "trainer.model = gbdt\n"
           "trainer.scheme = inverse_drive_length\n"
           "gbdt.num_rounds = 6\n"
           "gbdt.max_depth = 2\n"
           "catalytic.M_synth = 200\n"
           "catalytic.prior.recipe = linear\n");
  const std::string train_csv = league_csv(ws, 120, 17, "train.csv");

  CHECK(cli::run({"catalytic", "--data", train_csv, "--phi", "0", "--config", ws.path("run.cfg"),
                  "--out", ws.path("cat")}) == 0);
  CHECK(cli::run({"train", "--data", train_csv, "--config", ws.path("run.cfg"), "--out",
                  ws.path("plain")}) == 0);
  CHECK(ws.read("cat/model.json") == ws.read("plain/model.json"));
}

TEST_CASE("catalytic phi grid emits the trade-off table") {
  Workspace ws;
  ws.write("run.cfg",
           "seed = 19\n"
           "trainer.model = gbdt\n"
           "gbdt.num_rounds = 5\n"
           "gbdt.max_depth = 2\n"
           "catalytic.M_synth = 150\n"
           "catalytic.prior.recipe = linear\n"
           "eval.M_test = 4\n");
  const std::string train_csv = league_csv(ws, 80, 23, "train.csv");
  const std::string test_csv = league_csv(ws, 60, 29, "test.csv");
  CHECK(cli::run({"catalytic", "--data", train_csv, "--test", test_csv, "--phi-grid", "0",
                  "0.5", "1", "--config", ws.path("run.cfg"), "--out", ws.path("grid")}) == 0);
  const CsvTable table = read_csv(ws.path("grid/catalytic_tradeoff.csv"));
  CHECK(table.rows.size() == 3);
  CHECK(table.header[0] == "phi");
}

TEST_CASE("epa emits tables and plot data") {
  Workspace ws;
  ws.write("run.cfg",
           "seed = 31\n"
           "trainer.model = mlr\n"
           "mlr.recipe = linear\n");
  const std::string data = league_csv(ws, 200, 37, "plays.csv");
  CHECK(cli::run({"train", "--data", data, "--config", ws.path("run.cfg"), "--out",
                  ws.path("model")}) == 0);
  CHECK(cli::run({"epa", "--data", data, "--model", ws.path("model/model.json"), "--entity",
                  "team", "--min-plays", "1", "--plot-data", "--out", ws.path("epa")}) == 0);
  CHECK(fs::exists(ws.path("epa/epa.csv")));
  CHECK(fs::exists(ws.path("epa/epa_plot.csv")));
  const CsvTable table = read_csv(ws.path("epa/epa.csv"));
  CHECK(table.header[0] == "entity_id");
  CHECK(table.rows.size() > 0);
}

TEST_CASE("summary reports play shares by spread group") {
  Workspace ws;
  const std::string data = league_csv(ws, 150, 41, "plays.csv");
  CHECK(cli::run({"summary", "--data", data, "--out", ws.path("sum")}) == 0);
  const CsvTable table = read_csv(ws.path("sum/summary.csv"));
  CHECK(table.header == std::vector<std::string>{"segment", "group", "metric", "value"});
  double share = 0.0;
  for (const auto& row : table.rows)
    if (row[0] == "all" && row[2] == "play_share") share += std::stod(row[3]);
  CHECK(share == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("tune writes a grid table") {
  Workspace ws;
  ws.write("run.cfg",
           "seed = 43\n"
           "gbdt.min_child_weight = 1.0\n");
  const std::string data = league_csv(ws, 120, 47, "train.csv");
  // Shrink runtime: the default grid re-fits shared-round groups once.
  CHECK(cli::run({"tune", "--data", data, "--config", ws.path("run.cfg"), "--out",
                  ws.path("tune")}) == 0);
  const CsvTable table = read_csv(ws.path("tune/tune_table.csv"));
  CHECK(table.rows.size() == 12);
  CHECK(fs::exists(ws.path("tune/best_params.json")));
}

TEST_CASE("error paths map to documented exit codes") {
  Workspace ws;
  // Unknown flag -> 2.
  CHECK(cli::run({"simulate", "--no-such-flag"}) == 2);
  // Unknown subcommand -> 2.
  CHECK(cli::run({"frobnicate"}) == 2);
  // Missing data file -> 3.
  CHECK(cli::run({"ingest", "--data", ws.path("absent.csv"), "--out", ws.path("x")}) == 3);
  // Bad config value -> 2.
  ws.write("bad.cfg", "trainer.model = perceptron\n");
  const std::string data = league_csv(ws, 30, 53, "train.csv");
  CHECK(cli::run({"train", "--data", data, "--config", ws.path("bad.cfg"), "--out",
                  ws.path("y")}) == 2);
}

TEST_CASE("runs are reproducible from the resolved config") {
  Workspace ws;
  ws.write("run.cfg",
           "seed = 59\n"
           "synth.n_drives = 60\n");
  CHECK(cli::run({"simulate", "--config", ws.path("run.cfg"), "--out", ws.path("a")}) == 0);
  // Re-run from the emitted resolved config alone.
  CHECK(cli::run({"simulate", "--config", ws.path("a/resolved_config.txt"), "--out",
                  ws.path("b")}) == 0);
  CHECK(ws.read("a/league.csv") == ws.read("b/league.csv"));
}

}  // TEST_SUITE
