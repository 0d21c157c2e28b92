#include "ep/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "ep/csv.hpp"
#include "ep/rng.hpp"
#include "ep/util.hpp"

namespace ep {

namespace {

constexpr double kProbFloor = 1e-15;

void check_test_set(const PlayDataset& test) {
  if (test.n_drives() == 0) throw DataError("evaluation: empty test set");
  for (const PlayRecord& p : test.plays())
    if (p.synthetic)
      throw DataError("evaluation: test set contains catalytic augmentation rows");
}

// Rows selected by at least one subsample, for prediction caching.
std::vector<std::size_t> unique_selected_rows(const std::vector<SubsampleIndicator>& subs,
                                              std::size_t n_rows) {
  std::vector<char> hit(n_rows, 0);
  for (const auto& s : subs)
    for (std::size_t r : s.selected) hit[r] = 1;
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < n_rows; ++r)
    if (hit[r]) rows.push_back(r);
  return rows;
}

MetricReport summarize(std::string name, std::vector<double> per_subsample) {
  MetricReport rep;
  rep.metric = std::move(name);
  rep.M_test = static_cast<int>(per_subsample.size());
  rep.value = pairwise_sum(per_subsample) / static_cast<double>(per_subsample.size());
  rep.se = sample_sd(per_subsample) / std::sqrt(static_cast<double>(per_subsample.size()));
  rep.per_subsample = std::move(per_subsample);
  return rep;
}

std::vector<ProbVector> cache_probs(const OutcomeModel& model, const PlayDataset& test,
                                    const std::vector<std::size_t>& rows) {
  std::vector<ProbVector> cache(test.n_plays());
  parallel_for(rows.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i)
      cache[rows[i]] = model.predict_probs(test.play(rows[i]).x);
  });
  return cache;
}

}  // namespace

std::vector<SubsampleIndicator> draw_test_subsamples(const PlayDataset& test, int M_test,
                                                     std::uint64_t seed) {
  if (M_test < 1) throw ConfigError("draw_test_subsamples: M_test must be >= 1");
  check_test_set(test);
  std::vector<SubsampleIndicator> subs(M_test);
  for (int m = 0; m < M_test; ++m) {
    subs[m].m = m;
    subs[m].selected.resize(test.n_drives());
    for (std::size_t i = 0; i < test.n_drives(); ++i) {
      const DriveSpan& d = test.drive(i);
      const double u = unit_uniform(seed, static_cast<std::uint64_t>(m), i);
      subs[m].selected[i] = d.begin + std::min(d.size() - 1,
                                               static_cast<std::size_t>(u * d.size()));
    }
  }
  return subs;
}

MetricReport rmse_ep(const EpFn& ep, const PlayDataset& test,
                     const std::vector<SubsampleIndicator>& subs) {
  check_test_set(test);
  std::vector<double> ep_cache(test.n_plays(), 0.0);
  const auto rows = unique_selected_rows(subs, test.n_plays());
  parallel_for(rows.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) ep_cache[rows[i]] = ep(test.play(rows[i]).x);
  });

  std::vector<double> per(subs.size());
  parallel_for(subs.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t s = lo; s < hi; ++s) {
      std::vector<double> sq(subs[s].selected.size());
      for (std::size_t i = 0; i < subs[s].selected.size(); ++i) {
        const std::size_t r = subs[s].selected[i];
        const double diff = ep_cache[r] - points_of_outcome(test.play(r).outcome_drive);
        sq[i] = diff * diff;
      }
      per[s] = std::sqrt(pairwise_sum(sq) / static_cast<double>(test.n_drives()));
    }
  }, 1);
  return summarize("rmse", std::move(per));
}

MetricReport rmse(const OutcomeModel& model, const PlayDataset& test,
                  const std::vector<SubsampleIndicator>& subs) {
  return rmse_ep([&model](const GameState& x) { return ep_from_probs(model.predict_probs(x)); },
                 test, subs);
}

MetricReport logloss(const OutcomeModel& model, const PlayDataset& test,
                     const std::vector<SubsampleIndicator>& subs) {
  check_test_set(test);
  const auto rows = unique_selected_rows(subs, test.n_plays());
  const auto cache = cache_probs(model, test, rows);

  std::vector<double> per(subs.size());
  parallel_for(subs.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t s = lo; s < hi; ++s) {
      std::vector<double> losses(subs[s].selected.size());
      for (std::size_t i = 0; i < subs[s].selected.size(); ++i) {
        const std::size_t r = subs[s].selected[i];
        const double p = cache[r].of(test.play(r).outcome_drive);
        losses[i] = -std::log(std::max(p, kProbFloor));
      }
      per[s] = pairwise_sum(losses) / static_cast<double>(test.n_drives());
    }
  }, 1);
  return summarize("logloss", std::move(per));
}

MetricReport coverage_single(const OutcomeModel& model, const PlayDataset& test,
                             const std::vector<SubsampleIndicator>& subs, double alpha) {
  check_test_set(test);
  const auto rows = unique_selected_rows(subs, test.n_plays());
  const auto cache = cache_probs(model, test, rows);

  // Set membership is fixed per row; resolve once.
  std::vector<char> covered(test.n_plays(), 0);
  for (std::size_t r : rows)
    covered[r] = prediction_set_single(cache[r], alpha).contains(test.play(r).outcome_drive);

  std::vector<double> per(subs.size());
  for (std::size_t s = 0; s < subs.size(); ++s) {
    double hits = 0.0;
    for (std::size_t r : subs[s].selected) hits += covered[r];
    per[s] = hits / static_cast<double>(test.n_drives());
  }
  return summarize("coverage_single", std::move(per));
}

MetricReport coverage_boot_with_uniforms(const BootstrapEnsemble& ens, const PlayDataset& test,
                                         const std::vector<SubsampleIndicator>& subs, double alpha,
                                         const UniformFn& uniform) {
  check_test_set(test);
  if (ens.members.empty()) throw ConfigError("coverage_boot: empty ensemble");
  const auto rows = unique_selected_rows(subs, test.n_plays());

  // Member probabilities per unique selected row, cached up front.
  std::vector<std::vector<ProbVector>> member_probs(ens.members.size());
  parallel_for(ens.members.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t b = lo; b < hi; ++b) {
      member_probs[b].resize(test.n_plays());
      for (std::size_t r : rows)
        member_probs[b][r] = ens.members[b]->predict_probs(test.play(r).x);
    }
  }, 1);

  const int B = ens.B();
  std::vector<double> per(subs.size());
  parallel_for(subs.size(), [&](std::size_t lo, std::size_t hi) {
    std::vector<int> draws(B);
    for (std::size_t s = lo; s < hi; ++s) {
      double hits = 0.0;
      for (std::size_t r : subs[s].selected) {
        for (int b = 0; b < B; ++b)
          draws[b] = draw_from_probs(member_probs[b][r], uniform(subs[s].m, r, b));
        if (prediction_set_from_draws(draws, alpha).contains(test.play(r).outcome_drive))
          hits += 1.0;
      }
      per[s] = hits / static_cast<double>(test.n_drives());
    }
  }, 1);
  return summarize("coverage_boot", std::move(per));
}

MetricReport coverage_boot(const BootstrapEnsemble& ens, const PlayDataset& test,
                           const std::vector<SubsampleIndicator>& subs, double alpha,
                           std::uint64_t seed) {
  return coverage_boot_with_uniforms(
      ens, test, subs, alpha, [seed](int m, std::size_t row, int b) {
        return unit_uniform(seed, static_cast<std::uint64_t>(m), row,
                            static_cast<std::uint64_t>(b));
      });
}

void write_reports_csv(const std::string& path, const std::vector<MetricReport>& reports) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : reports)
    rows.push_back({r.metric, format_double(r.value), format_double(r.se),
                    std::to_string(r.M_test)});
  write_csv(path, {"metric", "value", "se", "M_test"}, rows);
}

void write_subsample_values_csv(const std::string& path,
                                const std::vector<MetricReport>& reports) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : reports)
    for (std::size_t m = 0; m < r.per_subsample.size(); ++m)
      rows.push_back({r.metric, std::to_string(m), format_double(r.per_subsample[m])});
  write_csv(path, {"metric", "subsample", "value"}, rows);
}

nlohmann::json reports_json(const std::vector<MetricReport>& reports, bool per_subsample) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json j{{"metric", r.metric}, {"value", r.value}, {"se", r.se},
                     {"M_test", r.M_test}};
    if (per_subsample) j["per_subsample"] = r.per_subsample;
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace ep
