#include "oracles.hpp"

#include <cmath>

namespace ep::oracle {

namespace {

OracleReport finish(std::vector<double> per) {
  OracleReport rep;
  const auto M = static_cast<double>(per.size());
  double sum = 0.0;
  for (double v : per) sum += v;
  rep.value = sum / M;
  double sq = 0.0;
  for (double v : per) sq += (v - rep.value) * (v - rep.value);
  rep.se = per.size() > 1 ? std::sqrt(sq / (M - 1.0)) / std::sqrt(M) : 0.0;
  rep.per_subsample = std::move(per);
  return rep;
}

}  // namespace

OracleReport rmse(const ValueFn& ep, const PlayDataset& test, const Selections& sel) {
  std::vector<double> per;
  for (const auto& chosen : sel) {
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < test.n_drives(); ++i) {
      const PlayRecord& play = test.play(chosen[i]);
      const double diff = ep(play.x) - points_of_outcome(play.outcome_drive);
      sum_sq += diff * diff;
    }
    per.push_back(std::sqrt(sum_sq / static_cast<double>(test.n_drives())));
  }
  return finish(std::move(per));
}

OracleReport logloss(const ProbFn& probs, const PlayDataset& test, const Selections& sel) {
  std::vector<double> per;
  for (const auto& chosen : sel) {
    double sum = 0.0;
    for (std::size_t i = 0; i < test.n_drives(); ++i) {
      const PlayRecord& play = test.play(chosen[i]);
      double p = probs(play.x).of(play.outcome_drive);
      if (p < 1e-15) p = 1e-15;
      sum += -std::log(p);
    }
    per.push_back(sum / static_cast<double>(test.n_drives()));
  }
  return finish(std::move(per));
}

bool set_contains(const ProbVector& p, DriveOutcome y, double alpha) {
  const int yk = static_cast<int>(y);
  double preferred_mass = 0.0;
  for (int k = 0; k < kNumOutcomes; ++k) {
    if (k == yk) continue;
    if (p[k] > p[yk] || (p[k] == p[yk] && k < yk)) preferred_mass += p[k];
  }
  return preferred_mass < alpha - 1e-12;
}

OracleReport coverage_single(const ProbFn& probs, const PlayDataset& test, const Selections& sel,
                             double alpha) {
  std::vector<double> per;
  for (const auto& chosen : sel) {
    double hits = 0.0;
    for (std::size_t i = 0; i < test.n_drives(); ++i) {
      const PlayRecord& play = test.play(chosen[i]);
      if (set_contains(probs(play.x), play.outcome_drive, alpha)) hits += 1.0;
    }
    per.push_back(hits / static_cast<double>(test.n_drives()));
  }
  return finish(std::move(per));
}

OracleReport coverage_boot(const std::vector<ProbFn>& members, const PlayDataset& test,
                           const Selections& sel, double alpha,
                           const std::vector<std::vector<std::vector<double>>>& uniforms) {
  const auto B = members.size();
  std::vector<double> per;
  for (std::size_t m = 0; m < sel.size(); ++m) {
    double hits = 0.0;
    for (std::size_t i = 0; i < test.n_drives(); ++i) {
      const PlayRecord& play = test.play(sel[m][i]);
      ProbVector empirical;
      for (std::size_t b = 0; b < B; ++b) {
        const ProbVector pb = members[b](play.x);
        const double u = uniforms[m][i][b];
        double cum = 0.0;
        int drawn = kNumOutcomes - 1;
        for (int k = 0; k < kNumOutcomes; ++k) {
          cum += pb[k];
          if (u < cum) {
            drawn = k;
            break;
          }
        }
        empirical[drawn] += 1.0 / static_cast<double>(B);
      }
      if (set_contains(empirical, play.outcome_drive, alpha)) hits += 1.0;
    }
    per.push_back(hits / static_cast<double>(test.n_drives()));
  }
  return finish(std::move(per));
}

}  // namespace ep::oracle
