#include "ep/features.hpp"

#include <algorithm>
#include <cmath>

#include "ep/util.hpp"

namespace ep {

std::vector<double> quantile_knots(std::vector<double> x, int n_knots) {
  if (x.empty()) throw ConfigError("quantile_knots: empty data");
  std::sort(x.begin(), x.end());
  std::vector<double> knots;
  knots.reserve(n_knots);
  const auto n = x.size();
  for (int i = 1; i <= n_knots; ++i) {
    const double q = static_cast<double>(i) / (n_knots + 1);
    const double pos = q * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(lo);
    const double v = lo + 1 < n ? x[lo] * (1.0 - frac) + x[lo + 1] * frac : x[lo];
    knots.push_back(v);
  }
  return knots;
}

std::vector<double> bspline_full_row(double x, int degree, const std::vector<double>& knots,
                                     double lo, double hi) {
  // Clamped knot vector: lo and hi repeated degree+1 times.
  std::vector<double> t;
  t.reserve(knots.size() + 2 * (degree + 1));
  for (int i = 0; i <= degree; ++i) t.push_back(lo);
  t.insert(t.end(), knots.begin(), knots.end());
  for (int i = 0; i <= degree; ++i) t.push_back(hi);

  const std::size_t n_basis = t.size() - degree - 1;
  // Degree-0 seed: indicator of the half-open knot interval, except the
  // last non-empty interval which is closed so that x == hi is covered.
  std::vector<double> b(t.size() - 1, 0.0);
  std::size_t last = 0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i)
    if (t[i] < t[i + 1]) last = i;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    if (i == last ? (x >= t[i] && x <= t[i + 1]) : (x >= t[i] && x < t[i + 1])) b[i] = 1.0;
  }

  for (int k = 1; k <= degree; ++k) {
    for (std::size_t i = 0; i + k + 1 < t.size(); ++i) {
      double left = 0.0, right = 0.0;
      if (t[i + k] > t[i]) left = (x - t[i]) / (t[i + k] - t[i]) * b[i];
      if (t[i + k + 1] > t[i + 1]) right = (t[i + k + 1] - x) / (t[i + k + 1] - t[i + 1]) * b[i + 1];
      b[i] = left + right;
    }
  }
  b.resize(n_basis);
  return b;
}

namespace {

struct ResolvedSpline {
  int degree;
  std::vector<double> knots;
  double lo, hi;
  int n_cols;  // after dropping the constant column
};

ResolvedSpline resolve_spline(const SplineSpec& spec, const std::vector<double>* data) {
  if (spec.degree < 1) throw ConfigError("SplineSpec: degree must be >= 1");
  if (!(spec.lo < spec.hi)) throw ConfigError("SplineSpec: boundary lo must be < hi");
  ResolvedSpline r;
  r.degree = spec.degree;
  r.lo = spec.lo;
  r.hi = spec.hi;
  if (spec.interior_knots) {
    r.knots = *spec.interior_knots;
    std::sort(r.knots.begin(), r.knots.end());
    for (double k : r.knots)
      if (k <= spec.lo || k >= spec.hi)
        throw ConfigError("SplineSpec: interior knot outside boundary");
    if (spec.df && *spec.df != spec.degree + static_cast<int>(r.knots.size()))
      throw ConfigError("SplineSpec: df inconsistent with interior knot count");
  } else if (spec.df) {
    if (*spec.df < spec.degree + 1)
      throw ConfigError("SplineSpec: df must be >= degree + 1");
    if (!data) throw ConfigError("SplineSpec: df-based knots need data");
    r.knots = quantile_knots(*data, *spec.df - spec.degree);
    for (double& k : r.knots) k = std::clamp(k, spec.lo, spec.hi);
  } else {
    throw ConfigError("SplineSpec: one of df / interior_knots is required");
  }
  r.n_cols = r.degree + static_cast<int>(r.knots.size());
  return r;
}

std::vector<double> spline_row(double x, const ResolvedSpline& s, bool clamp,
                               const char* what) {
  if (x < s.lo || x > s.hi) {
    if (!clamp)
      throw DataError(std::string(what) + ": value " + std::to_string(x) +
                      " outside spline boundary");
    warn_once(std::string("clamp:") + what,
              std::string(what) + ": values outside spline boundary are clamped");
    x = std::clamp(x, s.lo, s.hi);
  }
  std::vector<double> full = bspline_full_row(x, s.degree, s.knots, s.lo, s.hi);
  return {full.begin() + 1, full.end()};
}

}  // namespace

DesignMatrix bspline_basis(const std::vector<double>& x, const SplineSpec& spec, bool clamp) {
  const ResolvedSpline s = resolve_spline(spec, &x);
  DesignMatrix dm;
  for (int c = 1; c <= s.n_cols; ++c) dm.col_names.push_back("bs" + std::to_string(c));
  dm.values.resize(static_cast<Eigen::Index>(x.size()), s.n_cols);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto row = spline_row(x[i], s, clamp, "bspline_basis");
    for (int c = 0; c < s.n_cols; ++c) dm.values(static_cast<Eigen::Index>(i), c) = row[c];
  }
  return dm;
}

namespace {

constexpr int kYardlineDf = 5;
constexpr double kYardlineLo = 1.0, kYardlineHi = 99.0;
constexpr double kClockLo = 0.0, kClockHi = 1800.0;
const std::vector<double> kClockKnots = {30.0};

const std::vector<std::string> kModelFeatures = {
    "yardline_100",
    "down",
    "ydstogo",
    "half_seconds_remaining",
    "era",
    "posteam_timeouts_remaining",
    "defteam_timeouts_remaining",
    "score_differential",
    "posteam_spread",
};

}  // namespace

double state_feature(const GameState& g, const std::string& name) {
  if (name == "yardline_100") return g.yardline_100;
  if (name == "down") return g.down;
  if (name == "ydstogo") return g.ydstogo;
  if (name == "half_seconds_remaining") return g.half_seconds_remaining;
  if (name == "game_seconds_remaining") return g.game_seconds_remaining;
  if (name == "era") return g.era;
  if (name == "posteam_timeouts_remaining") return g.posteam_timeouts_remaining;
  if (name == "defteam_timeouts_remaining") return g.defteam_timeouts_remaining;
  if (name == "score_differential") return g.score_differential;
  if (name == "posteam_spread") return g.posteam_spread;
  throw ConfigError("unknown feature name: \"" + name + "\"");
}

const std::vector<std::string>& default_model_features() { return kModelFeatures; }

FeatureRecipe FeatureRecipe::build(const PlayDataset& ds, RecipeMode mode,
                                   std::vector<std::string> linear_cols) {
  FeatureRecipe r;
  r.mode_ = mode;
  if (mode == RecipeMode::Linear) {
    for (const auto& c : linear_cols) state_feature(GameState{}, c);  // name check
    r.linear_cols_ = std::move(linear_cols);
    r.finalize_columns();
    return r;
  }
  if (ds.n_plays() == 0) throw DataError("FeatureRecipe: cannot build on an empty dataset");

  std::vector<double> yardline;
  yardline.reserve(ds.n_plays());
  std::vector<int> eras;
  for (const PlayRecord& p : ds.plays()) {
    yardline.push_back(p.x.yardline_100);
    eras.push_back(p.x.era);
  }
  r.yardline_knots_ = quantile_knots(yardline, kYardlineDf - 3);
  for (double& k : r.yardline_knots_) k = std::clamp(k, kYardlineLo + 1e-9, kYardlineHi - 1e-9);
  r.clock_knots_ = kClockKnots;
  std::sort(eras.begin(), eras.end());
  eras.erase(std::unique(eras.begin(), eras.end()), eras.end());
  r.era_levels_ = std::move(eras);
  r.finalize_columns();
  return r;
}

void FeatureRecipe::finalize_columns() {
  column_names_.clear();
  column_names_.push_back("intercept");
  if (mode_ == RecipeMode::Linear) {
    for (const auto& c : linear_cols_) column_names_.push_back(c);
    return;
  }
  for (int d = 1; d <= 4; ++d)
    for (int b = 1; b <= kYardlineDf; ++b)
      column_names_.push_back("down" + std::to_string(d) + ":yardline_bs" + std::to_string(b));
  const int clock_cols = 3 + static_cast<int>(clock_knots_.size());
  for (int d = 1; d <= 4; ++d)
    for (int b = 1; b <= clock_cols; ++b)
      column_names_.push_back("down" + std::to_string(d) + ":clock_bs" + std::to_string(b));
  column_names_.push_back("log_ydstogo");
  column_names_.push_back("utm_no_timeouts");
  for (std::size_t i = 1; i < era_levels_.size(); ++i)
    column_names_.push_back("era_" + std::to_string(era_levels_[i]));
  column_names_.push_back("posteam_spread");
  column_names_.push_back("spread_x_yardline");
  column_names_.push_back("sd_le_m11");
  column_names_.push_back("sd_ge_11");
  column_names_.push_back("sd_le_m4_late");
  column_names_.push_back("sd_m3_0_late");
  column_names_.push_back("sd_1_3_late");
  column_names_.push_back("sd_4_10_late");
}

Eigen::VectorXd FeatureRecipe::row(const GameState& g) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(column_names_.size()));
  Eigen::Index c = 0;
  out[c++] = 1.0;
  if (mode_ == RecipeMode::Linear) {
    for (const auto& name : linear_cols_) out[c++] = state_feature(g, name);
    return out;
  }

  const ResolvedSpline yard{3, yardline_knots_, kYardlineLo, kYardlineHi,
                            3 + static_cast<int>(yardline_knots_.size())};
  const ResolvedSpline clock{3, clock_knots_, kClockLo, kClockHi,
                             3 + static_cast<int>(clock_knots_.size())};
  const auto yard_row = spline_row(g.yardline_100, yard, true, "yardline_100");
  const auto clock_row = spline_row(g.half_seconds_remaining, clock, true,
                                    "half_seconds_remaining");

  for (int d = 1; d <= 4; ++d)
    for (double v : yard_row) out[c++] = (g.down == d) ? v : 0.0;
  for (int d = 1; d <= 4; ++d)
    for (double v : clock_row) out[c++] = (g.down == d) ? v : 0.0;

  if (g.ydstogo <= 0) throw DataError("ydstogo must be >= 1 (log term undefined)");
  out[c++] = std::log(static_cast<double>(g.ydstogo));

  const bool utm = g.half_seconds_remaining <= 120.0;
  out[c++] = (utm && g.posteam_timeouts_remaining == 0) ? 1.0 : 0.0;

  if (!era_levels_.empty()) {
    const auto it = std::find(era_levels_.begin(), era_levels_.end(), g.era);
    if (it == era_levels_.end()) {
      warn_once("era_unseen", "era level " + std::to_string(g.era) +
                                  " unseen at fit time; mapped to reference level");
    } else {
      for (std::size_t i = 1; i < era_levels_.size(); ++i)
        if (era_levels_[i] == g.era) out[c + static_cast<Eigen::Index>(i) - 1] = 1.0;
    }
    c += static_cast<Eigen::Index>(era_levels_.size()) - 1;
  }

  out[c++] = g.posteam_spread;
  out[c++] = g.posteam_spread * g.yardline_100;

  const double sd = g.score_differential;
  const bool late = g.game_seconds_remaining <= 900.0;
  out[c++] = sd <= -11 ? 1.0 : 0.0;
  out[c++] = sd >= 11 ? 1.0 : 0.0;
  out[c++] = (sd <= -4 && late) ? 1.0 : 0.0;
  out[c++] = (sd >= -3 && sd <= 0 && late) ? 1.0 : 0.0;
  out[c++] = (sd >= 1 && sd <= 3 && late) ? 1.0 : 0.0;
  out[c++] = (sd >= 4 && sd <= 10 && late) ? 1.0 : 0.0;
  return out;
}

DesignMatrix FeatureRecipe::design(const PlayDataset& ds) const {
  DesignMatrix dm;
  dm.col_names = column_names_;
  dm.values.resize(static_cast<Eigen::Index>(ds.n_plays()),
                   static_cast<Eigen::Index>(column_names_.size()));
  parallel_for(ds.n_plays(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i)
      dm.values.row(static_cast<Eigen::Index>(i)) = row(ds.play(i).x).transpose();
  });
  if (!dm.values.allFinite()) throw NumericError("design matrix contains non-finite entries");
  return dm;
}

nlohmann::json FeatureRecipe::to_json() const {
  return nlohmann::json{{"mode", mode_ == RecipeMode::Linear ? "linear" : "appendix_design"},
                        {"linear_cols", linear_cols_},
                        {"yardline_knots", yardline_knots_},
                        {"clock_knots", clock_knots_},
                        {"era_levels", era_levels_},
                        {"column_names", column_names_}};
}

FeatureRecipe FeatureRecipe::from_json(const nlohmann::json& j) {
  FeatureRecipe r;
  const std::string mode = j.at("mode").get<std::string>();
  if (mode == "linear") r.mode_ = RecipeMode::Linear;
  else if (mode == "appendix_design") r.mode_ = RecipeMode::AppendixDesign;
  else throw ConfigError("FeatureRecipe: unknown mode \"" + mode + "\"");
  r.linear_cols_ = j.at("linear_cols").get<std::vector<std::string>>();
  r.yardline_knots_ = j.at("yardline_knots").get<std::vector<double>>();
  r.clock_knots_ = j.at("clock_knots").get<std::vector<double>>();
  r.era_levels_ = j.at("era_levels").get<std::vector<int>>();
  const auto names = j.at("column_names").get<std::vector<std::string>>();
  r.finalize_columns();
  if (names != r.column_names_)
    throw ConfigError("FeatureRecipe: serialized column order does not match this build");
  return r;
}

bool FeatureRecipe::operator==(const FeatureRecipe& other) const {
  return mode_ == other.mode_ && linear_cols_ == other.linear_cols_ &&
         yardline_knots_ == other.yardline_knots_ && clock_knots_ == other.clock_knots_ &&
         era_levels_ == other.era_levels_ && column_names_ == other.column_names_;
}

}  // namespace ep
