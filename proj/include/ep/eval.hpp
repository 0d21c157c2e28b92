#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ep/bootstrap.hpp"
#include "ep/model.hpp"

#include <json.hpp>

namespace ep {

// One-play-per-drive test subsample; selected[i] is the chosen row of
// the i-th drive.
struct SubsampleIndicator {
  int m = 0;
  std::vector<std::size_t> selected;
};

std::vector<SubsampleIndicator> draw_test_subsamples(const PlayDataset& test, int M_test,
                                                     std::uint64_t seed);

struct MetricReport {
  std::string metric;
  double value = 0.0;
  double se = 0.0;  // sample SD of per-subsample values / sqrt(M_test)
  int M_test = 0;
  std::vector<double> per_subsample;
};

using EpFn = std::function<double(const GameState&)>;

// Per-subsample rmse of predicted EP against realized drive points,
// averaged across subsamples.
MetricReport rmse(const OutcomeModel& model, const PlayDataset& test,
                  const std::vector<SubsampleIndicator>& subs);
MetricReport rmse_ep(const EpFn& ep, const PlayDataset& test,
                     const std::vector<SubsampleIndicator>& subs);

// Natural-log multiclass logloss with probabilities floored at 1e-15.
MetricReport logloss(const OutcomeModel& model, const PlayDataset& test,
                     const std::vector<SubsampleIndicator>& subs);

// Fraction of selected plays whose outcome falls in the single-model
// prediction set at level alpha.
MetricReport coverage_single(const OutcomeModel& model, const PlayDataset& test,
                             const std::vector<SubsampleIndicator>& subs, double alpha);

// Same with bootstrap prediction sets; one outcome drawn per member per
// (subsample, play) via counter-based uniforms, so results do not depend
// on evaluation order.
MetricReport coverage_boot(const BootstrapEnsemble& ens, const PlayDataset& test,
                           const std::vector<SubsampleIndicator>& subs, double alpha,
                           std::uint64_t seed);

// Draw-injection variant: uniforms come from the caller. Test hook that
// lets an independent oracle consume identical randomness.
using UniformFn = std::function<double(int m, std::size_t row, int b)>;
MetricReport coverage_boot_with_uniforms(const BootstrapEnsemble& ens, const PlayDataset& test,
                                         const std::vector<SubsampleIndicator>& subs, double alpha,
                                         const UniformFn& uniform);

void write_reports_csv(const std::string& path, const std::vector<MetricReport>& reports);
void write_subsample_values_csv(const std::string& path,
                                const std::vector<MetricReport>& reports);
nlohmann::json reports_json(const std::vector<MetricReport>& reports, bool per_subsample);

}  // namespace ep
