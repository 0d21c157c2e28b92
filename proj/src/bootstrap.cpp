#include "ep/bootstrap.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "ep/rng.hpp"
#include "ep/util.hpp"

namespace ep {

namespace {
const std::array<std::string, 2> kSchemeLabels = {"iid_plays", "cluster_drives"};
constexpr double kAlphaSlack = 1e-12;
}  // namespace

const std::string& bootstrap_scheme_label(BootstrapScheme s) {
  return kSchemeLabels[static_cast<int>(s)];
}

BootstrapScheme bootstrap_scheme_from_label(const std::string& label) {
  for (int i = 0; i < 2; ++i)
    if (kSchemeLabels[i] == label) return static_cast<BootstrapScheme>(i);
  throw ConfigError("unknown bootstrap scheme: \"" + label + "\"");
}

PlayDataset resample_iid(const PlayDataset& ds, std::uint64_t seed) {
  if (ds.n_plays() == 0) throw DataError("resample_iid: empty dataset");
  Rng rng(derive(seed, fnv1a("resample_iid")));
  std::vector<PlayRecord> rows;
  rows.reserve(ds.n_plays());
  for (std::size_t i = 0; i < ds.n_plays(); ++i) {
    const auto pick = static_cast<std::size_t>(rng.next_below(ds.n_plays()));
    PlayRecord p = ds.play(pick);
    p.drive_id = "b" + std::to_string(i) + ":" + p.drive_id;
    p.play_index_in_drive = 1;
    rows.push_back(std::move(p));
  }
  return PlayDataset::from_plays(std::move(rows));
}

PlayDataset resample_cluster(const PlayDataset& ds, std::uint64_t seed) {
  if (ds.n_plays() == 0) throw DataError("resample_cluster: empty dataset");
  Rng rng(derive(seed, fnv1a("resample_cluster")));
  std::vector<PlayRecord> rows;
  rows.reserve(ds.n_plays());
  for (std::size_t i = 0; i < ds.n_drives(); ++i) {
    const auto pick = static_cast<std::size_t>(rng.next_below(ds.n_drives()));
    const DriveSpan& d = ds.drive(pick);
    const std::string new_id = "b" + std::to_string(i) + ":" + ds.drive_id(pick);
    for (std::size_t r = d.begin; r < d.end; ++r) {
      PlayRecord p = ds.play(r);
      p.drive_id = new_id;
      rows.push_back(std::move(p));
    }
  }
  return PlayDataset::from_plays(std::move(rows));
}

BootstrapEnsemble fit_bootstrap_ensemble(const PlayDataset& train, int B, BootstrapScheme scheme,
                                         const FitFn& trainer, std::uint64_t seed) {
  if (B < 1) throw ConfigError("fit_bootstrap_ensemble: B must be >= 1");
  if (!trainer) throw ConfigError("fit_bootstrap_ensemble: trainer is required");
  BootstrapEnsemble ens;
  ens.scheme = scheme;
  ens.seed = seed;
  ens.data_hash = dataset_fingerprint(train);
  ens.members.reserve(B);
  for (int b = 0; b < B; ++b) {
    const std::uint64_t member_seed = derive(seed, static_cast<std::uint64_t>(b));
    try {
      const PlayDataset resampled = scheme == BootstrapScheme::IidPlays
                                        ? resample_iid(train, member_seed)
                                        : resample_cluster(train, member_seed);
      ens.members.push_back(trainer(resampled, member_seed));
    } catch (const std::exception& e) {
      throw NumericError("fit_bootstrap_ensemble: member " + std::to_string(b) +
                         " failed: " + e.what());
    }
  }
  return ens;
}

bool PredictionSet::contains(DriveOutcome o) const {
  return std::find(outcomes.begin(), outcomes.end(), o) != outcomes.end();
}

PredictionSet prediction_set_single(const ProbVector& p, double alpha) {
  if (!p.valid()) throw NumericError("prediction_set_single: invalid probability vector");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw ConfigError("prediction_set_single: alpha must be in (0, 1]");
  std::array<int, kNumOutcomes> order{0, 1, 2, 3, 4};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return p[a] > p[b]; });
  PredictionSet set;
  set.alpha = alpha;
  double cum = 0.0;
  for (int k : order) {
    set.outcomes.push_back(static_cast<DriveOutcome>(k));
    cum += p[k];
    if (cum >= alpha - kAlphaSlack) break;
  }
  return set;
}

int draw_from_probs(const ProbVector& p, double u) {
  double cum = 0.0;
  for (int k = 0; k < kNumOutcomes; ++k) {
    cum += p[k];
    if (u < cum) return k;
  }
  return kNumOutcomes - 1;
}

PredictionSet prediction_set_from_draws(const std::vector<int>& drawn_outcomes, double alpha) {
  if (drawn_outcomes.empty()) throw ConfigError("prediction_set_from_draws: no draws");
  ProbVector empirical;
  for (int k : drawn_outcomes) empirical[static_cast<std::size_t>(k)] += 1.0;
  for (int k = 0; k < kNumOutcomes; ++k)
    empirical[k] /= static_cast<double>(drawn_outcomes.size());
  return prediction_set_single(empirical, alpha);
}

PredictionSet prediction_set_boot(const BootstrapEnsemble& ens, const GameState& x, double alpha,
                                  std::uint64_t seed) {
  if (ens.members.empty()) throw ConfigError("prediction_set_boot: empty ensemble");
  std::vector<int> draws(ens.members.size());
  for (std::size_t b = 0; b < ens.members.size(); ++b)
    draws[b] = draw_from_probs(ens.members[b]->predict_probs(x), unit_uniform(seed, b));
  return prediction_set_from_draws(draws, alpha);
}

void BootstrapEnsemble::save(const std::string& dir) const {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::vector<std::string> files;
  for (std::size_t b = 0; b < members.size(); ++b) {
    char name[32];
    std::snprintf(name, sizeof(name), "member_%04zu.json", b);
    files.emplace_back(name);
    save_model((fs::path(dir) / name).string(), *members[b]);
  }
  nlohmann::json manifest{{"format_version", 1},
                          {"type", "bootstrap_ensemble"},
                          {"scheme", bootstrap_scheme_label(scheme)},
                          {"B", members.size()},
                          {"seed", seed},
                          {"data_hash", data_hash},
                          {"member_files", files}};
  std::ofstream out(fs::path(dir) / "manifest.json");
  if (!out) throw ConfigError("cannot write ensemble manifest under " + dir);
  out << manifest.dump(2) << "\n";
}

BootstrapEnsemble BootstrapEnsemble::load(const std::string& dir) {
  namespace fs = std::filesystem;
  std::ifstream in(fs::path(dir) / "manifest.json");
  if (!in) throw DataError("cannot open ensemble manifest under " + dir);
  nlohmann::json manifest;
  in >> manifest;
  BootstrapEnsemble ens;
  ens.scheme = bootstrap_scheme_from_label(manifest.at("scheme").get<std::string>());
  ens.seed = manifest.at("seed").get<std::uint64_t>();
  ens.data_hash = manifest.value("data_hash", "");
  for (const auto& f : manifest.at("member_files"))
    ens.members.push_back(load_model((fs::path(dir) / f.get<std::string>()).string()));
  if (ens.members.empty()) throw DataError("ensemble has no members: " + dir);
  return ens;
}

}  // namespace ep
