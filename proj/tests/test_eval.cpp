#include <doctest.h>

#include <cmath>

#include "ep/eval.hpp"
#include "ep/synth.hpp"
#include "ep/trainers.hpp"
#include "ep/util.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace ep;

namespace {

class FixedModel final : public OutcomeModel {
 public:
  explicit FixedModel(ProbVector p) : p_(p) {}
  ProbVector predict_probs(const GameState&) const override { return p_; }
  std::string kind() const override { return "const"; }
  nlohmann::json to_json() const override { return {{"type", "const"}}; }

 private:
  ProbVector p_;
};

// Probabilities that depend on the state, for nontrivial oracle checks.
class StateModel final : public OutcomeModel {
 public:
  ProbVector predict_probs(const GameState& g) const override {
    std::array<double, kNumOutcomes> logits{};
    logits[0] = 1.0 - 0.02 * g.yardline_100;
    logits[1] = 0.5 - 0.01 * g.yardline_100;
    logits[2] = 0.3;
    logits[3] = -2.0 + 0.01 * g.yardline_100;
    logits[4] = -1.5 + 0.03 * g.posteam_spread;
    return softmax5(logits);
  }
  std::string kind() const override { return "state"; }
  nlohmann::json to_json() const override { return {{"type", "state"}}; }
};

oracle::Selections to_selections(const std::vector<SubsampleIndicator>& subs) {
  oracle::Selections sel;
  for (const auto& s : subs) sel.push_back(s.selected);
  return sel;
}

}  // namespace

TEST_SUITE("eval") {

TEST_CASE("subsample draws select one play per drive") {
  const PlayDataset ds = testing::random_dataset(30, 3, 4);
  const auto subs = draw_test_subsamples(ds, 10, 5);
  REQUIRE(subs.size() == 10);
  for (const auto& s : subs) {
    CHECK(s.selected.size() == ds.n_drives());
    for (std::size_t i = 0; i < ds.n_drives(); ++i) {
      const DriveSpan& d = ds.drive(i);
      CHECK(s.selected[i] >= d.begin);
      CHECK(s.selected[i] < d.end);
    }
  }

  // Single-play drives leave no choice.
  const PlayDataset ones = testing::random_dataset(10, 7, 1);
  const auto fixed = draw_test_subsamples(ones, 5, 9);
  for (const auto& s : fixed)
    for (std::size_t i = 0; i < ones.n_drives(); ++i) CHECK(s.selected[i] == ones.drive(i).begin);

  // Uniformity: play 1 of a 4-play drive is chosen about a quarter of
  // the time.
  const PlayDataset quad = testing::make_dataset({
      testing::make_drive("A", 4, DriveOutcome::Touchdown),
  });
  const auto many = draw_test_subsamples(quad, 1000, 11);
  int first = 0;
  for (const auto& s : many)
    if (s.selected[0] == 0) ++first;
  const double rate = first / 1000.0;
  CHECK(std::abs(rate - 0.25) <= 3.0 * std::sqrt(0.25 * 0.75 / 1000.0));
}

TEST_CASE("rmse on degenerate predictions") {
  // Predicted EP is 0 everywhere (one-hot NoScore); a TD drive misses by 7.
  const PlayDataset td = testing::make_dataset({
      testing::make_drive("A", 1, DriveOutcome::Touchdown),
  });
  const FixedModel zero_ep(ProbVector::one_hot(DriveOutcome::NoScore));
  const auto subs = draw_test_subsamples(td, 3, 1);
  const MetricReport rep = rmse(zero_ep, td, subs);
  CHECK(rep.value == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(rep.se == doctest::Approx(0.0));

  // Perfect one-hot predictions score zero.
  const PlayDataset mixed = testing::random_dataset(12, 3, 3);
  class Oracle final : public OutcomeModel {
   public:
    explicit Oracle(const PlayDataset& ds) : ds_(&ds) {}
    ProbVector predict_probs(const GameState& g) const override {
      for (const auto& p : ds_->plays())
        if (p.x == g) return ProbVector::one_hot(p.outcome_drive);
      return ProbVector::uniform();
    }
    std::string kind() const override { return "oracle"; }
    nlohmann::json to_json() const override { return {}; }

   private:
    const PlayDataset* ds_;
  } perfect(mixed);
  const auto subs2 = draw_test_subsamples(mixed, 4, 3);
  CHECK(rmse(perfect, mixed, subs2).value == doctest::Approx(0.0));
  CHECK(logloss(perfect, mixed, subs2).value == doctest::Approx(0.0));
  CHECK(coverage_single(perfect, mixed, subs2, 0.95).value == doctest::Approx(1.0));
}

TEST_CASE("uniform predictions give ln 5 logloss") {
  const PlayDataset ds = testing::random_dataset(20, 5, 3);
  const FixedModel uniform(ProbVector::uniform());
  const auto subs = draw_test_subsamples(ds, 6, 7);
  CHECK(logloss(uniform, ds, subs).value == doctest::Approx(std::log(5.0)).epsilon(1e-12));
}

TEST_CASE("coverage at alpha=1 with strictly positive probabilities is full") {
  const PlayDataset ds = testing::random_dataset(15, 9, 3);
  const FixedModel m(testing::normalized({5, 4, 3, 2, 1}));
  const auto subs = draw_test_subsamples(ds, 4, 11);
  CHECK(coverage_single(m, ds, subs, 1.0).value == doctest::Approx(1.0));

  // One-hot on the wrong outcome never covers.
  const PlayDataset td = testing::make_dataset({
      testing::make_drive("A", 2, DriveOutcome::Touchdown),
      testing::make_drive("B", 3, DriveOutcome::Touchdown),
  });
  const FixedModel wrong(ProbVector::one_hot(DriveOutcome::FieldGoal));
  const auto subs2 = draw_test_subsamples(td, 4, 13);
  CHECK(coverage_single(wrong, td, subs2, 0.95).value == doctest::Approx(0.0));
}

TEST_CASE("rmse, logloss, coverage match the brute-force oracle") {
  const PlayDataset ds = testing::random_dataset(25, 21, 4);  // <= 100 plays
  REQUIRE(ds.n_plays() <= 100);
  const StateModel model;
  const auto subs = draw_test_subsamples(ds, 5, 17);
  const auto sel = to_selections(subs);

  const auto probs_fn = [&model](const GameState& g) { return model.predict_probs(g); };
  const auto ep_fn = [&model](const GameState& g) {
    return ep_from_probs(model.predict_probs(g));
  };

  const MetricReport r = rmse(model, ds, subs);
  const auto r_oracle = oracle::rmse(ep_fn, ds, sel);
  CHECK(std::abs(r.value - r_oracle.value) <= 1e-12);
  CHECK(std::abs(r.se - r_oracle.se) <= 1e-12);
  for (std::size_t m = 0; m < sel.size(); ++m)
    CHECK(std::abs(r.per_subsample[m] - r_oracle.per_subsample[m]) <= 1e-12);

  const MetricReport ll = logloss(model, ds, subs);
  const auto ll_oracle = oracle::logloss(probs_fn, ds, sel);
  CHECK(std::abs(ll.value - ll_oracle.value) <= 1e-12);
  CHECK(std::abs(ll.se - ll_oracle.se) <= 1e-12);

  for (double alpha : {0.5, 0.8, 0.95}) {
    const MetricReport cov = coverage_single(model, ds, subs, alpha);
    const auto cov_oracle = oracle::coverage_single(probs_fn, ds, sel, alpha);
    CHECK(std::abs(cov.value - cov_oracle.value) <= 1e-12);
    CHECK(std::abs(cov.se - cov_oracle.se) <= 1e-12);
  }
}

TEST_CASE("coverage_boot equals the oracle on shared draws") {
  const PlayDataset ds = testing::random_dataset(10, 23, 2);  // ~20 plays
  REQUIRE(ds.n_plays() <= 25);
  BootstrapEnsemble ens;
  ens.scheme = BootstrapScheme::ClusterDrives;
  ens.members = {
      std::make_shared<FixedModel>(testing::normalized({6, 2, 1, 0.5, 0.5})),
      std::make_shared<FixedModel>(testing::normalized({1, 1, 6, 1, 1})),
      std::make_shared<FixedModel>(testing::normalized({2, 5, 2, 0.5, 0.5})),
  };
  const auto subs = draw_test_subsamples(ds, 4, 29);
  const auto sel = to_selections(subs);

  // Shared uniform table, indexed by (m, drive ordinal, member).
  std::vector<std::vector<std::vector<double>>> uniforms(sel.size());
  Rng rng(31);
  for (std::size_t m = 0; m < sel.size(); ++m) {
    uniforms[m].resize(ds.n_drives());
    for (auto& per_play : uniforms[m]) {
      per_play.resize(ens.members.size());
      for (auto& u : per_play) u = rng.next_unit();
    }
  }

  std::vector<std::size_t> row_to_drive(ds.n_plays());
  for (std::size_t r = 0; r < ds.n_plays(); ++r) row_to_drive[r] = ds.drive_of_row(r);
  const UniformFn uniform_fn = [&](int m, std::size_t row, int b) {
    return uniforms[static_cast<std::size_t>(m)][row_to_drive[row]][static_cast<std::size_t>(b)];
  };
  const MetricReport got = coverage_boot_with_uniforms(ens, ds, subs, 0.95, uniform_fn);

  std::vector<oracle::ProbFn> members;
  for (const auto& m : ens.members)
    members.emplace_back([m](const GameState& g) { return m->predict_probs(g); });
  const auto want = oracle::coverage_boot(members, ds, sel, 0.95, uniforms);
  CHECK(std::abs(got.value - want.value) <= 1e-12);
  CHECK(std::abs(got.se - want.se) <= 1e-12);
  for (std::size_t m = 0; m < sel.size(); ++m)
    CHECK(std::abs(got.per_subsample[m] - want.per_subsample[m]) <= 1e-12);
}

TEST_CASE("coverage_boot edge ensembles") {
  // Identical perfect members cover everything.
  const PlayDataset td = testing::make_dataset({
      testing::make_drive("A", 2, DriveOutcome::Touchdown),
      testing::make_drive("B", 1, DriveOutcome::Touchdown),
  });
  BootstrapEnsemble perfect;
  perfect.scheme = BootstrapScheme::ClusterDrives;
  for (int b = 0; b < 4; ++b)
    perfect.members.push_back(
        std::make_shared<FixedModel>(ProbVector::one_hot(DriveOutcome::Touchdown)));
  const auto subs = draw_test_subsamples(td, 3, 37);
  CHECK(coverage_boot(perfect, td, subs, 0.95, 41).value == doctest::Approx(1.0));

  // B=1 uniform member: singleton random set covers about 20%.
  std::vector<std::vector<PlayRecord>> drives;
  for (int i = 0; i < 400; ++i)
    drives.push_back(testing::make_drive(
        "d" + std::to_string(i), 1,
        static_cast<DriveOutcome>(i % kNumOutcomes), 10 + (i % 80)));
  const PlayDataset big = testing::make_dataset(drives);
  BootstrapEnsemble lone;
  lone.scheme = BootstrapScheme::IidPlays;
  lone.members = {std::make_shared<FixedModel>(ProbVector::uniform())};
  const auto subs2 = draw_test_subsamples(big, 10, 43);
  const MetricReport rep = coverage_boot(lone, big, subs2, 0.95, 47);
  CHECK(std::abs(rep.value - 0.2) <= 3.0 * std::sqrt(0.2 * 0.8 / 400.0));
}

TEST_CASE("reports are deterministic and order-insensitive") {
  const PlayDataset ds = testing::random_dataset(20, 31, 4);
  const StateModel model;
  const auto subs = draw_test_subsamples(ds, 8, 51);
  const MetricReport a = rmse(model, ds, subs);
  const MetricReport b = rmse(model, ds, subs);
  CHECK(a.value == b.value);
  CHECK(a.se == b.se);

  // Permuting whole drives (and remapping selections) leaves the
  // metrics unchanged.
  std::vector<std::size_t> order(ds.n_drives());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(53);
  rng.shuffle(order);
  const PlayDataset permuted = ds.select_drives(order);
  std::vector<SubsampleIndicator> mapped(subs.size());
  for (std::size_t m = 0; m < subs.size(); ++m) {
    mapped[m].m = subs[m].m;
    mapped[m].selected.resize(ds.n_drives());
    for (std::size_t new_i = 0; new_i < order.size(); ++new_i) {
      const std::size_t old_i = order[new_i];
      const std::size_t offset = subs[m].selected[old_i] - ds.drive(old_i).begin;
      mapped[m].selected[new_i] = permuted.drive(new_i).begin + offset;
    }
  }
  const MetricReport c = rmse(model, permuted, mapped);
  CHECK(std::abs(a.value - c.value) <= 1e-12);
  const MetricReport ll_a = logloss(model, ds, subs);
  const MetricReport ll_c = logloss(model, permuted, mapped);
  CHECK(std::abs(ll_a.value - ll_c.value) <= 1e-12);
}

TEST_CASE("synthetic rows are refused by evaluation") {
  PlayRecord p = testing::make_drive("A", 1, DriveOutcome::Touchdown)[0];
  p.synthetic = true;
  const PlayDataset ds = PlayDataset::from_plays({p});
  CHECK_THROWS_AS(draw_test_subsamples(ds, 2, 1), DataError);
}

TEST_CASE("report serialization") {
  const PlayDataset ds = testing::random_dataset(10, 61, 2);
  const FixedModel m(ProbVector::uniform());
  const auto subs = draw_test_subsamples(ds, 3, 63);
  const std::vector<MetricReport> reports = {logloss(m, ds, subs)};
  const auto j = reports_json(reports, true);
  CHECK(j[0]["metric"] == "logloss");
  CHECK(j[0]["M_test"] == 3);
  CHECK(j[0]["per_subsample"].size() == 3);
}

}  // TEST_SUITE
