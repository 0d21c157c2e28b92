#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "ep/epa.hpp"
#include "ep/synth.hpp"
#include "ep/trainers.hpp"
#include "ep/util.hpp"
#include "helpers.hpp"

using namespace ep;

namespace {

// Linear-recipe logit model with hand-set coefficients; sensitive to
// yardline and spread.
ModelPtr hand_model(double td_yard = -0.02, double td_spread = -0.08) {
  const PlayDataset tiny = testing::random_dataset(2, 1);
  FeatureRecipe recipe = FeatureRecipe::build(tiny, RecipeMode::Linear);
  Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(kMlrClasses, 3);
  theta(0, 0) = 0.8;
  theta(0, 1) = td_yard;
  theta(0, 2) = td_spread;
  theta(1, 0) = 0.2;
  theta(1, 1) = -0.01;
  theta(3, 0) = -2.0;
  theta(3, 2) = 0.05;
  return std::make_shared<MlrOutcomeModel>(MlrModel(std::move(recipe), std::move(theta), {}, {}));
}

ModelPtr const_ep_model(const ProbVector& p) {
  struct Const final : OutcomeModel {
    ProbVector p;
    explicit Const(ProbVector pv) : p(pv) {}
    ProbVector predict_probs(const GameState&) const override { return p; }
    std::string kind() const override { return "const"; }
    nlohmann::json to_json() const override { return {{"type", "const"}}; }
  };
  return std::make_shared<Const>(p);
}

}  // namespace

TEST_SUITE("epa") {

TEST_CASE("spread override pins the point spread") {
  const ModelPtr model = hand_model();
  GameState a;
  a.yardline_100 = 40;
  a.posteam_spread = -7.0;
  GameState b = a;
  b.posteam_spread = 5.0;

  CHECK(ep_of_state(*model, a) != ep_of_state(*model, b));
  CHECK(ep_of_state(*model, a, 0.0) == doctest::Approx(ep_of_state(*model, b, 0.0)));

  GameState zeroed = a;
  zeroed.posteam_spread = 0.0;
  CHECK(ep_of_state(*model, a, 0.0) == doctest::Approx(ep_of_state(*model, zeroed)));
}

TEST_CASE("epa of drive-ending and interior plays") {
  const ModelPtr model = hand_model();
  const auto drive = testing::make_drive("A", 3, DriveOutcome::Touchdown, 60, -3.0);
  const PlayRecord& p1 = drive[0];
  const PlayRecord& p2 = drive[1];
  const PlayRecord& p3 = drive[2];

  const double ep1 = ep_of_state(*model, p1.x);
  const double epa_end = epa_of_play(*model, p3, nullptr);
  CHECK(epa_end == doctest::Approx(7.0 - ep_of_state(*model, p3.x)).epsilon(1e-12));

  const double epa_12 = epa_of_play(*model, p1, &p2);
  CHECK(epa_12 ==
        doctest::Approx(ep_of_state(*model, p2.x) - ep1).epsilon(1e-12));

  // Identical start and end state gives zero.
  PlayRecord same = p2;
  same.play_index_in_drive = p1.play_index_in_drive + 1;
  same.x = p1.x;
  CHECK(epa_of_play(*model, p1, &same) == doctest::Approx(0.0));

  // Next play from another drive is rejected.
  PlayRecord foreign = p2;
  foreign.drive_id = "B";
  CHECK_THROWS_AS(epa_of_play(*model, p1, &foreign), DataError);
}

TEST_CASE("per-drive epa telescopes to points minus first EP") {
  const ModelPtr model = hand_model();
  SynthConfig scfg;
  scfg.n_drives = 200;
  scfg.seed = 71;
  const PlayDataset ds = generate_league(scfg);
  for (std::size_t i = 0; i < ds.n_drives(); ++i) {
    const DriveSpan& d = ds.drive(i);
    double total = 0.0;
    for (std::size_t r = d.begin; r < d.end; ++r) {
      const PlayRecord* next = r + 1 < d.end ? &ds.play(r + 1) : nullptr;
      total += epa_of_play(*model, ds.play(r), next);
    }
    const double expected =
        points_of_outcome(ds.drive_outcome(i)) - ep_of_state(*model, ds.play(d.begin).x);
    CHECK(std::abs(total - expected) <= 1e-12);
  }
}

TEST_CASE("aggregation matches hand means and honors min_plays") {
  // Two teams with disjoint single-play pass drives.
  std::vector<std::vector<PlayRecord>> drives;
  for (int i = 0; i < 6; ++i) {
    auto d = testing::make_drive("A" + std::to_string(i), 1,
                                 i % 2 == 0 ? DriveOutcome::Touchdown : DriveOutcome::NoScore,
                                 30 + i, -2.0);
    d[0].posteam_id = "AAA";
    d[0].play_type = PlayType::Pass;
    drives.push_back(d);
  }
  for (int i = 0; i < 4; ++i) {
    auto d = testing::make_drive("B" + std::to_string(i), 1, DriveOutcome::FieldGoal, 50 + i, 3.0);
    d[0].posteam_id = "BBB";
    d[0].play_type = PlayType::Run;
    drives.push_back(d);
  }
  const PlayDataset ds = testing::make_dataset(drives);
  const ModelPtr model = hand_model();

  const EpaTable table = aggregate_epa(ds, *model, EpaEntity::Team, std::nullopt, 1);
  REQUIRE(table.rows.size() == 2);

  // Group-by oracle: recompute each team's mean by hand.
  std::map<std::string, std::pair<double, int>> hand;
  for (std::size_t i = 0; i < ds.n_drives(); ++i) {
    const PlayRecord& p = ds.play(ds.drive(i).begin);
    const double epa = points_of_outcome(p.outcome_drive) - ep_of_state(*model, p.x, 0.0);
    hand[p.posteam_id].first += epa;
    hand[p.posteam_id].second += 1;
  }
  for (const auto& row : table.rows) {
    const auto& [sum, n] = hand.at(row.entity_id);
    CHECK(row.n_plays == n);
    CHECK(row.epa_per_play == doctest::Approx(sum / n).epsilon(1e-12));
    CHECK_FALSE(row.ci_lo.has_value());
  }

  // min_plays excludes the 4-play team.
  const EpaTable strict = aggregate_epa(ds, *model, EpaEntity::Team, std::nullopt, 5);
  REQUIRE(strict.rows.size() == 1);
  CHECK(strict.rows[0].entity_id == "AAA");

  // An entity with 499 qualifying plays is excluded at min_plays=500.
  const EpaTable none = aggregate_epa(ds, *model, EpaEntity::Team, std::nullopt, 500);
  CHECK(none.rows.empty());
}

TEST_CASE("spread differences vanish under the zero override") {
  SynthConfig scfg;
  scfg.n_drives = 60;
  scfg.seed = 73;
  const PlayDataset ds = generate_league(scfg);
  std::vector<PlayRecord> shifted = ds.plays();
  for (auto& p : shifted) p.x.posteam_spread += 4.5;
  const PlayDataset ds2 = PlayDataset::from_plays(std::move(shifted));

  const ModelPtr model = hand_model();
  const EpaTable a = aggregate_epa(ds, *model, EpaEntity::Team, std::nullopt, 1);
  const EpaTable b = aggregate_epa(ds2, *model, EpaEntity::Team, std::nullopt, 1);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i)
    CHECK(a.rows[i].epa_per_play == doctest::Approx(b.rows[i].epa_per_play).epsilon(1e-12));
}

TEST_CASE("identical ensemble members give zero-width intervals") {
  SynthConfig scfg;
  scfg.n_drives = 50;
  scfg.seed = 77;
  const PlayDataset ds = generate_league(scfg);
  const ModelPtr model = hand_model();
  BootstrapEnsemble ens;
  ens.scheme = BootstrapScheme::ClusterDrives;
  for (int b = 0; b < 20; ++b) ens.members.push_back(model);

  const EpaTable table =
      epa_confidence_intervals(ds, *model, ens, EpaEntity::Team, std::nullopt, 1, 0.95);
  for (const auto& row : table.rows) {
    REQUIRE(row.ci_lo.has_value());
    CHECK(*row.ci_lo == doctest::Approx(row.epa_per_play).epsilon(1e-12));
    CHECK(*row.ci_hi == doctest::Approx(row.epa_per_play).epsilon(1e-12));
  }
}

TEST_CASE("percentile intervals use nearest-rank order statistics") {
  // 100 members whose EP at every state is a distinct known constant:
  // member means are then 7 - c_b on an all-touchdown single-play league.
  std::vector<std::vector<PlayRecord>> drives;
  for (int i = 0; i < 5; ++i) {
    auto d = testing::make_drive("d" + std::to_string(i), 1, DriveOutcome::Touchdown, 40 + i);
    d[0].play_type = PlayType::Pass;
    drives.push_back(d);
  }
  const PlayDataset ds = testing::make_dataset(drives);

  BootstrapEnsemble ens;
  ens.scheme = BootstrapScheme::ClusterDrives;
  std::vector<double> member_eps;
  for (int b = 0; b < 100; ++b) {
    // EP values distinct per member.
    const double w_td = 0.2 + 0.005 * b;
    const ProbVector p{{w_td, 0.05, 0.9 - w_td, 0.05, 0.0}};
    ens.members.push_back(const_ep_model(p));
    member_eps.push_back(ep_from_probs(p));
  }

  const ModelPtr full = const_ep_model(ProbVector::uniform());
  const EpaTable table =
      epa_confidence_intervals(ds, *full, ens, EpaEntity::Team, std::nullopt, 1, 0.95);
  REQUIRE(table.rows.size() == 1);

  std::vector<double> means;
  for (double ep : member_eps) means.push_back(7.0 - ep);
  std::sort(means.begin(), means.end());
  // Nearest-rank rule at level 0.95 and B=100: 3rd and 98th order stats.
  CHECK(*table.rows[0].ci_lo == doctest::Approx(means[2]).epsilon(1e-12));
  CHECK(*table.rows[0].ci_hi == doctest::Approx(means[97]).epsilon(1e-12));
  // Point estimate comes from the full-data model.
  CHECK(table.rows[0].epa_per_play == doctest::Approx(7.0 - 0.2).epsilon(1e-12));
}

TEST_CASE("epa aggregation is permutation-invariant") {
  SynthConfig scfg;
  scfg.n_drives = 80;
  scfg.seed = 79;
  const PlayDataset ds = generate_league(scfg);
  const ModelPtr model = hand_model();
  std::vector<std::size_t> order(ds.n_drives());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(81);
  rng.shuffle(order);
  const PlayDataset permuted = ds.select_drives(order);

  const EpaTable a = aggregate_epa(ds, *model, EpaEntity::PasserOrRusher, std::nullopt, 1);
  const EpaTable b = aggregate_epa(permuted, *model, EpaEntity::PasserOrRusher, std::nullopt, 1);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].entity_id == b.rows[i].entity_id);
    CHECK(a.rows[i].epa_per_play == doctest::Approx(b.rows[i].epa_per_play).epsilon(1e-9));
  }
}

}  // TEST_SUITE
