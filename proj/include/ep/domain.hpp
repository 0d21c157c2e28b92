#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "ep/util.hpp"

namespace ep {

// Drive outcomes in canonical order. This ordering is total and stable:
// it fixes category indices in every model, file, and tie-break below.
enum class DriveOutcome : int {
  Touchdown = 0,
  FieldGoal = 1,
  NoScore = 2,
  OppSafety = 3,
  OppTouchdown = 4,
};

inline constexpr int kNumOutcomes = 5;

inline constexpr std::array<DriveOutcome, kNumOutcomes> kAllOutcomes = {
    DriveOutcome::Touchdown, DriveOutcome::FieldGoal, DriveOutcome::NoScore,
    DriveOutcome::OppSafety, DriveOutcome::OppTouchdown};

// Net points of each outcome, from the possessing team's perspective.
inline constexpr std::array<int, kNumOutcomes> kOutcomePoints = {7, 3, 0, -2, -7};

inline constexpr int points_of_outcome(DriveOutcome o) {
  return kOutcomePoints[static_cast<int>(o)];
}

// Wire labels used in every CSV/JSON surface.
const std::string& outcome_label(DriveOutcome o);
DriveOutcome outcome_from_label(const std::string& label);  // throws DataError on unknown label
bool is_outcome_label(const std::string& label);

// Point on the 5-simplex over drive outcomes.
struct ProbVector {
  std::array<double, kNumOutcomes> p{0.0, 0.0, 0.0, 0.0, 0.0};

  double operator[](std::size_t k) const { return p[k]; }
  double& operator[](std::size_t k) { return p[k]; }
  double of(DriveOutcome o) const { return p[static_cast<std::size_t>(o)]; }

  bool valid(double tol = 1e-9) const {
    double sum = 0.0;
    for (double v : p) {
      if (!(v >= -1e-12) || !(v <= 1.0 + 1e-12) || std::isnan(v)) return false;
      sum += v;
    }
    return std::abs(sum - 1.0) <= tol;
  }

  static ProbVector uniform() { return ProbVector{{0.2, 0.2, 0.2, 0.2, 0.2}}; }

  static ProbVector one_hot(DriveOutcome o) {
    ProbVector pv;
    pv.p[static_cast<std::size_t>(o)] = 1.0;
    return pv;
  }
};

// EP as the points-weighted sum of outcome probabilities. Rejects invalid
// simplex vectors since those indicate an upstream model bug.
inline double ep_from_probs(const ProbVector& pv) {
  if (!pv.valid()) throw NumericError("ep_from_probs: probability vector violates simplex invariants");
  double ep = 0.0;
  for (int k = 0; k < kNumOutcomes; ++k) ep += kOutcomePoints[k] * pv.p[k];
  return ep;
}

// Numerically safe softmax over 5 logits.
ProbVector softmax5(const std::array<double, kNumOutcomes>& logits);

// Total variation distance between two outcome distributions.
double tv_distance(const ProbVector& a, const ProbVector& b);

}  // namespace ep
