#include "ep/domain.hpp"

#include <algorithm>

namespace ep {

namespace {
const std::array<std::string, kNumOutcomes> kLabels = {"TD", "FG", "NO_SCORE", "OPP_SAFETY",
                                                       "OPP_TD"};
}

const std::string& outcome_label(DriveOutcome o) { return kLabels[static_cast<int>(o)]; }

bool is_outcome_label(const std::string& label) {
  return std::find(kLabels.begin(), kLabels.end(), label) != kLabels.end();
}

DriveOutcome outcome_from_label(const std::string& label) {
  for (int k = 0; k < kNumOutcomes; ++k)
    if (kLabels[k] == label) return static_cast<DriveOutcome>(k);
  throw DataError("unknown outcome label: \"" + label + "\"");
}

ProbVector softmax5(const std::array<double, kNumOutcomes>& logits) {
  double m = logits[0];
  for (double v : logits) m = std::max(m, v);
  ProbVector pv;
  double sum = 0.0;
  for (int k = 0; k < kNumOutcomes; ++k) {
    pv.p[k] = std::exp(logits[k] - m);
    sum += pv.p[k];
  }
  for (int k = 0; k < kNumOutcomes; ++k) pv.p[k] /= sum;
  return pv;
}

double tv_distance(const ProbVector& a, const ProbVector& b) {
  double s = 0.0;
  for (int k = 0; k < kNumOutcomes; ++k) s += std::abs(a.p[k] - b.p[k]);
  return 0.5 * s;
}

}  // namespace ep
