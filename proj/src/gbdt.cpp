#include "ep/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ep/rng.hpp"
#include "ep/util.hpp"

namespace ep {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kHessFloor = 1e-16;
constexpr double kProbFloor = 1e-15;
constexpr double kMinGain = 1e-12;

// Loss reduction of a leaf carrying value w (optimal when unclipped).
inline double leaf_score(double G, double H, double lambda, double w) {
  return -(2.0 * G * w + (H + lambda) * w * w);
}

inline double clip(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

struct BuildContext {
  const std::vector<std::vector<double>>& cols;     // [F][n]
  const std::vector<std::vector<int>>& sorted_idx;  // [F][n], by (value, row)
  const std::vector<int>& constraint_dir;           // per feature
  double lambda;
  double min_child_weight;
  double learning_rate;
  int max_depth;
};

struct NodeState {
  int tree_node;
  double G, H;
  double lb, ub;
};

struct SplitCandidate {
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;
  double GL = 0.0, HL = 0.0, GR = 0.0, HR = 0.0;
  double wL = 0.0, wR = 0.0;
};

// Scans one feature over every active node in a single pass of the
// presorted order, returning the per-node best candidate.
void scan_feature(const BuildContext& ctx, int f, const std::vector<NodeState>& active,
                  const std::vector<int>& slot_of_node, const std::vector<int>& node_of_row,
                  const std::vector<double>& grad, const std::vector<double>& hess,
                  std::vector<SplitCandidate>& out) {
  const std::size_t n_active = active.size();
  std::vector<double> run_g(n_active, 0.0), run_h(n_active, 0.0), prev_val(n_active, 0.0);
  std::vector<char> has_prev(n_active, 0);
  out.assign(n_active, SplitCandidate{});
  const int dir = ctx.constraint_dir[f];

  for (int r : ctx.sorted_idx[f]) {
    const int node = node_of_row[r];
    if (node < 0) continue;
    const int slot = slot_of_node[node];
    if (slot < 0) continue;
    const double v = ctx.cols[f][static_cast<std::size_t>(r)];
    const NodeState& ns = active[slot];
    if (has_prev[slot] && v > prev_val[slot]) {
      const double GL = run_g[slot], HL = run_h[slot];
      const double GR = ns.G - GL, HR = ns.H - HL;
      if (HL >= ctx.min_child_weight && HR >= ctx.min_child_weight) {
        const double wL = clip(-GL / (HL + ctx.lambda), ns.lb, ns.ub);
        const double wR = clip(-GR / (HR + ctx.lambda), ns.lb, ns.ub);
        const bool ok = dir == 0 || (dir > 0 ? wL <= wR : wL >= wR);
        if (ok) {
          const double wP = clip(-ns.G / (ns.H + ctx.lambda), ns.lb, ns.ub);
          const double gain = 0.5 * (leaf_score(GL, HL, ctx.lambda, wL) +
                                     leaf_score(GR, HR, ctx.lambda, wR) -
                                     leaf_score(ns.G, ns.H, ctx.lambda, wP));
          if (gain > out[slot].gain) {
            out[slot] = SplitCandidate{gain, f, 0.5 * (prev_val[slot] + v),
                                       GL, HL, GR, HR, wL, wR};
          }
        }
      }
    }
    run_g[slot] += grad[static_cast<std::size_t>(r)];
    run_h[slot] += hess[static_cast<std::size_t>(r)];
    prev_val[slot] = v;
    has_prev[slot] = 1;
  }
}

Tree build_tree(const BuildContext& ctx, const std::vector<double>& grad,
                const std::vector<double>& hess, const std::vector<char>& in_sample,
                const std::vector<int>& feature_subset) {
  const std::size_t n = ctx.cols.empty() ? 0 : ctx.cols[0].size();
  Tree tree;
  tree.nodes.emplace_back();

  std::vector<int> node_of_row(n, -1);
  NodeState root{0, 0.0, 0.0, -kInf, kInf};
  for (std::size_t r = 0; r < n; ++r) {
    if (!in_sample[r]) continue;
    node_of_row[r] = 0;
    root.G += grad[r];
    root.H += hess[r];
  }
  std::vector<NodeState> active{root};
  auto set_leaf_value = [&](const NodeState& ns) {
    tree.nodes[ns.tree_node].value =
        ctx.learning_rate * clip(-ns.G / (ns.H + ctx.lambda), ns.lb, ns.ub);
  };

  for (int depth = 0; depth < ctx.max_depth && !active.empty(); ++depth) {
    std::vector<int> slot_of_node(tree.nodes.size(), -1);
    for (std::size_t s = 0; s < active.size(); ++s) slot_of_node[active[s].tree_node] = static_cast<int>(s);

    // Per-feature scans are independent; merge in feature order so the
    // result does not depend on scheduling.
    std::vector<std::vector<SplitCandidate>> per_feature(feature_subset.size());
    parallel_for(feature_subset.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t fi = lo; fi < hi; ++fi)
        scan_feature(ctx, feature_subset[fi], active, slot_of_node, node_of_row, grad, hess,
                     per_feature[fi]);
    }, 1);

    std::vector<SplitCandidate> best(active.size());
    for (std::size_t fi = 0; fi < feature_subset.size(); ++fi)
      for (std::size_t s = 0; s < active.size(); ++s)
        if (per_feature[fi][s].gain > best[s].gain) best[s] = per_feature[fi][s];

    std::vector<NodeState> next;
    for (std::size_t s = 0; s < active.size(); ++s) {
      const NodeState& ns = active[s];
      const SplitCandidate& c = best[s];
      if (c.feature < 0 || c.gain <= kMinGain) {
        set_leaf_value(ns);
        continue;
      }
      TreeNode& parent = tree.nodes[ns.tree_node];
      parent.feature = c.feature;
      parent.threshold = c.threshold;
      parent.gain = c.gain;
      parent.left = static_cast<int>(tree.nodes.size());
      parent.right = parent.left + 1;
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();

      NodeState left{parent.left, c.GL, c.HL, ns.lb, ns.ub};
      NodeState right{parent.right, c.GR, c.HR, ns.lb, ns.ub};
      const int dir = ctx.constraint_dir[c.feature];
      if (dir != 0) {
        const double mid = 0.5 * (c.wL + c.wR);
        if (dir > 0) {
          left.ub = std::min(left.ub, mid);
          right.lb = std::max(right.lb, mid);
        } else {
          left.lb = std::max(left.lb, mid);
          right.ub = std::min(right.ub, mid);
        }
      }
      next.push_back(left);
      next.push_back(right);
    }

    for (std::size_t r = 0; r < n; ++r) {
      const int node = node_of_row[r];
      if (node < 0) continue;
      const TreeNode& tn = tree.nodes[node];
      if (tn.feature < 0) continue;
      node_of_row[r] = ctx.cols[tn.feature][r] <= tn.threshold ? tn.left : tn.right;
    }
    active = std::move(next);
  }
  for (const NodeState& ns : active) set_leaf_value(ns);
  return tree;
}

struct Frame {
  std::vector<std::vector<double>> cols;     // [F][n]
  std::vector<std::vector<int>> sorted_idx;  // [F][n]
  std::vector<double> weights;
  std::vector<int> labels;       // multiclass
  std::vector<double> targets;   // regression
  std::size_t n = 0;
};

Frame make_frame(const PlayDataset& ds, const std::vector<std::string>& features,
                 GbdtObjective objective) {
  // Zero-weight rows contribute nothing to any gradient or hessian;
  // dropping them keeps candidate thresholds free of inert rows.
  std::vector<std::size_t> rows;
  rows.reserve(ds.n_plays());
  for (std::size_t i = 0; i < ds.n_plays(); ++i)
    if (ds.weight(i) > 0.0) rows.push_back(i);
  if (rows.empty()) throw DataError("gbdt: no rows with positive weight");

  Frame fr;
  fr.n = rows.size();
  fr.cols.assign(features.size(), std::vector<double>(fr.n));
  for (std::size_t f = 0; f < features.size(); ++f)
    for (std::size_t i = 0; i < fr.n; ++i)
      fr.cols[f][i] = state_feature(ds.play(rows[i]).x, features[f]);

  fr.sorted_idx.assign(features.size(), {});
  parallel_for(features.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t f = lo; f < hi; ++f) {
      auto& idx = fr.sorted_idx[f];
      idx.resize(fr.n);
      std::iota(idx.begin(), idx.end(), 0);
      std::stable_sort(idx.begin(), idx.end(),
                       [&](int a, int b) { return fr.cols[f][a] < fr.cols[f][b]; });
    }
  }, 1);

  fr.weights.resize(fr.n);
  for (std::size_t i = 0; i < fr.n; ++i) fr.weights[i] = ds.weight(rows[i]);
  if (objective == GbdtObjective::MulticlassSoftmax) {
    fr.labels.resize(fr.n);
    for (std::size_t i = 0; i < fr.n; ++i)
      fr.labels[i] = static_cast<int>(ds.play(rows[i]).outcome_drive);
  } else {
    fr.targets.resize(fr.n);
    for (std::size_t i = 0; i < fr.n; ++i)
      fr.targets[i] = points_of_outcome(ds.play(rows[i]).outcome_drive);
  }
  return fr;
}

void validate_params(const GbdtParams& p, const std::vector<std::string>& features) {
  if (p.num_rounds < 0) throw ConfigError("gbdt: num_rounds must be >= 0");
  if (p.max_depth < 1) throw ConfigError("gbdt: max_depth must be >= 1");
  if (!(p.learning_rate > 0.0)) throw ConfigError("gbdt: learning_rate must be > 0");
  if (!(p.row_subsample > 0.0 && p.row_subsample <= 1.0))
    throw ConfigError("gbdt: row_subsample must be in (0, 1]");
  if (!(p.col_subsample > 0.0 && p.col_subsample <= 1.0))
    throw ConfigError("gbdt: col_subsample must be in (0, 1]");
  if (p.l2_leaf_penalty < 0.0) throw ConfigError("gbdt: l2_leaf_penalty must be >= 0");
  if (p.min_child_weight < 0.0) throw ConfigError("gbdt: min_child_weight must be >= 0");
  for (const auto& [name, dir] : p.monotone_constraints) {
    if (dir != -1 && dir != 1)
      throw ConfigError("gbdt: monotone constraint direction must be -1 or +1");
    if (std::find(features.begin(), features.end(), name) == features.end())
      throw ConfigError("gbdt: monotone constraint on unknown feature \"" + name + "\"");
  }
  if (!p.monotone_constraints.empty() && p.objective != GbdtObjective::SquaredError)
    throw ConfigError("gbdt: monotone constraints require the squared_error objective");
}

std::vector<char> draw_row_sample(std::size_t n, double fraction, std::uint64_t seed, int round) {
  std::vector<char> in(n, 1);
  if (fraction >= 1.0) return in;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive(seed, fnv1a("rowsub"), static_cast<std::uint64_t>(round)));
  rng.shuffle(order);
  const auto keep = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
  std::fill(in.begin(), in.end(), 0);
  for (std::size_t i = 0; i < std::max<std::size_t>(keep, 1); ++i) in[order[i]] = 1;
  return in;
}

std::vector<int> draw_col_sample(std::size_t n_features, double fraction, std::uint64_t seed,
                                 int round, int klass) {
  std::vector<int> all(n_features);
  std::iota(all.begin(), all.end(), 0);
  if (fraction >= 1.0) return all;
  Rng rng(derive(seed, fnv1a("colsub"), static_cast<std::uint64_t>(round),
                 static_cast<std::uint64_t>(klass)));
  rng.shuffle(all);
  const auto keep = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n_features))));
  all.resize(keep);
  std::sort(all.begin(), all.end());
  return all;
}

double watch_logloss_from_margins(const std::vector<std::array<double, kNumOutcomes>>& margins,
                                  const std::vector<int>& labels) {
  std::vector<double> losses(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    std::array<double, kNumOutcomes> lg = margins[i];
    const ProbVector p = softmax5(lg);
    losses[i] = -std::log(std::max(p[labels[i]], kProbFloor));
  }
  return pairwise_sum(losses) / static_cast<double>(losses.size());
}

struct FitOutputs {
  GbdtModel model;
  std::vector<double> train_logloss;  // weighted, per round boundary
  std::vector<double> watch_logloss;  // per checkpoint
};

FitOutputs fit_internal(const PlayDataset& ds, const std::vector<std::string>& features,
                        const GbdtParams& params, const PlayDataset* watch,
                        const std::vector<int>& checkpoints, bool want_train_curve) {
  for (const auto& f : features) state_feature(GameState{}, f);  // name check
  validate_params(params, features);
  if (ds.n_plays() == 0) throw DataError("gbdt: empty dataset");

  const Frame fr = make_frame(ds, features, params.objective);
  std::vector<int> constraint_dir(features.size(), 0);
  for (const auto& [name, dir] : params.monotone_constraints)
    constraint_dir[std::find(features.begin(), features.end(), name) - features.begin()] = dir;

  const BuildContext ctx{fr.cols,  fr.sorted_idx,         constraint_dir,
                         params.l2_leaf_penalty, params.min_child_weight,
                         params.learning_rate,   params.max_depth};

  const double total_w = pairwise_sum(fr.weights);
  FitOutputs out;
  std::vector<std::vector<Tree>> rounds;

  if (params.objective == GbdtObjective::SquaredError) {
    double base = 0.0;
    for (std::size_t i = 0; i < fr.n; ++i) base += fr.weights[i] * fr.targets[i];
    base /= total_w;

    std::vector<double> margin(fr.n, base);
    std::vector<double> grad(fr.n), hess(fr.n);
    for (int t = 0; t < params.num_rounds; ++t) {
      const auto in = draw_row_sample(fr.n, params.row_subsample, params.seed, t);
      for (std::size_t i = 0; i < fr.n; ++i) {
        grad[i] = fr.weights[i] * (margin[i] - fr.targets[i]);
        hess[i] = fr.weights[i];
      }
      const auto feats = draw_col_sample(features.size(), params.col_subsample, params.seed, t, 0);
      Tree tree = build_tree(ctx, grad, hess, in, feats);
      std::vector<double> x(features.size());
      for (std::size_t i = 0; i < fr.n; ++i) {
        for (std::size_t f = 0; f < features.size(); ++f) x[f] = fr.cols[f][i];
        margin[i] += tree.predict(x);
      }
      rounds.push_back({std::move(tree)});
    }
    out.model = GbdtModel(params, features, {base}, std::move(rounds));
    return out;
  }

  // Multiclass softmax.
  std::array<double, kNumOutcomes> base{};
  {
    std::array<double, kNumOutcomes> mass{};
    for (std::size_t i = 0; i < fr.n; ++i) mass[fr.labels[i]] += fr.weights[i];
    int present = 0;
    for (double m : mass) present += m > 0.0 ? 1 : 0;
    if (present < 2)
      throw DataError("gbdt: multiclass objective needs at least 2 outcome classes present");
    for (int k = 0; k < kNumOutcomes; ++k)
      base[k] = std::log(std::max(mass[k] / total_w, 1e-12));
  }

  std::vector<std::array<double, kNumOutcomes>> margin(fr.n, base);
  std::vector<std::array<double, kNumOutcomes>> watch_margin;
  std::vector<int> watch_labels;
  std::vector<std::vector<double>> watch_x;
  if (watch) {
    watch_margin.assign(watch->n_plays(), base);
    watch_labels.resize(watch->n_plays());
    watch_x.assign(watch->n_plays(), std::vector<double>(features.size()));
    for (std::size_t i = 0; i < watch->n_plays(); ++i) {
      watch_labels[i] = static_cast<int>(watch->play(i).outcome_drive);
      for (std::size_t f = 0; f < features.size(); ++f)
        watch_x[i][f] = state_feature(watch->play(i).x, features[f]);
    }
  }
  auto maybe_checkpoint = [&](int completed_rounds) {
    if (!watch) return;
    if (std::find(checkpoints.begin(), checkpoints.end(), completed_rounds) != checkpoints.end())
      out.watch_logloss.push_back(watch_logloss_from_margins(watch_margin, watch_labels));
  };
  auto train_curve_point = [&]() {
    if (!want_train_curve) return;
    std::vector<double> losses(fr.n);
    for (std::size_t i = 0; i < fr.n; ++i) {
      const ProbVector p = softmax5(margin[i]);
      losses[i] = -fr.weights[i] * std::log(std::max(p[fr.labels[i]], kProbFloor));
    }
    out.train_logloss.push_back(pairwise_sum(losses) / total_w);
  };

  maybe_checkpoint(0);
  train_curve_point();

  std::vector<double> grad(fr.n), hess(fr.n);
  std::vector<ProbVector> probs(fr.n);
  for (int t = 0; t < params.num_rounds; ++t) {
    for (std::size_t i = 0; i < fr.n; ++i) probs[i] = softmax5(margin[i]);
    const auto in = draw_row_sample(fr.n, params.row_subsample, params.seed, t);
    std::vector<Tree> class_trees;
    class_trees.reserve(kNumOutcomes);
    for (int k = 0; k < kNumOutcomes; ++k) {
      for (std::size_t i = 0; i < fr.n; ++i) {
        const double p = probs[i][k];
        grad[i] = fr.weights[i] * (p - (fr.labels[i] == k ? 1.0 : 0.0));
        hess[i] = std::max(fr.weights[i] * p * (1.0 - p), kHessFloor);
      }
      const auto feats = draw_col_sample(features.size(), params.col_subsample, params.seed, t, k);
      class_trees.push_back(build_tree(ctx, grad, hess, in, feats));
    }
    std::vector<double> x(features.size());
    for (std::size_t i = 0; i < fr.n; ++i) {
      for (std::size_t f = 0; f < features.size(); ++f) x[f] = fr.cols[f][i];
      for (int k = 0; k < kNumOutcomes; ++k) margin[i][k] += class_trees[k].predict(x);
    }
    if (watch) {
      parallel_for(watch_margin.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
          for (int k = 0; k < kNumOutcomes; ++k)
            watch_margin[i][k] += class_trees[k].predict(watch_x[i]);
      });
    }
    rounds.push_back(std::move(class_trees));
    maybe_checkpoint(t + 1);
    train_curve_point();
  }

  std::vector<double> base_vec(base.begin(), base.end());
  out.model = GbdtModel(params, features, std::move(base_vec), std::move(rounds));
  return out;
}

}  // namespace

double Tree::predict(const std::vector<double>& x) const {
  int node = 0;
  while (nodes[node].feature >= 0) {
    const TreeNode& tn = nodes[node];
    node = x[tn.feature] <= tn.threshold ? tn.left : tn.right;
  }
  return nodes[node].value;
}

std::vector<double> GbdtModel::extract(const GameState& g) const {
  std::vector<double> x(feature_names_.size());
  for (std::size_t f = 0; f < feature_names_.size(); ++f)
    x[f] = state_feature(g, feature_names_[f]);
  return x;
}

ProbVector GbdtModel::predict_probs_features(const std::vector<double>& x) const {
  if (params_.objective != GbdtObjective::MulticlassSoftmax)
    throw ConfigError("gbdt: predict_probs called on a regression model");
  std::array<double, kNumOutcomes> logits{};
  for (int k = 0; k < kNumOutcomes; ++k) logits[k] = base_scores_[k];
  for (const auto& round : rounds_)
    for (int k = 0; k < kNumOutcomes; ++k) logits[k] += round[k].predict(x);
  return softmax5(logits);
}

double GbdtModel::predict_value_features(const std::vector<double>& x) const {
  if (params_.objective != GbdtObjective::SquaredError)
    throw ConfigError("gbdt: predict_value called on a classification model");
  double v = base_scores_[0];
  for (const auto& round : rounds_) v += round[0].predict(x);
  if (!std::isfinite(v)) throw NumericError("gbdt: non-finite regression prediction");
  return v;
}

ProbVector GbdtModel::predict_probs(const GameState& g) const {
  return predict_probs_features(extract(g));
}

double GbdtModel::predict_value(const GameState& g) const {
  return predict_value_features(extract(g));
}

GbdtModel fit_gbdt(const PlayDataset& ds, const std::vector<std::string>& features,
                   const GbdtParams& params) {
  return fit_internal(ds, features, params, nullptr, {}, false).model;
}

GbdtModel fit_gbdt_watched(const PlayDataset& ds, const std::vector<std::string>& features,
                           const GbdtParams& params, const PlayDataset& watch,
                           const std::vector<int>& checkpoints,
                           std::vector<double>* checkpoint_logloss) {
  auto out = fit_internal(ds, features, params, &watch, checkpoints, false);
  if (checkpoint_logloss) *checkpoint_logloss = std::move(out.watch_logloss);
  return std::move(out.model);
}

GbdtModel fit_gbdt_regression_monotone(const PlayDataset& ds, GbdtParams params) {
  if (params.objective != GbdtObjective::SquaredError)
    throw ConfigError("gbdt: fit_gbdt_regression_monotone requires the squared_error objective");
  if (params.monotone_constraints.empty()) {
    params.monotone_constraints = {
        {"yardline_100", -1},
        {"ydstogo", -1},
        {"posteam_spread", -1},
        {"defteam_timeouts_remaining", -1},
        {"posteam_timeouts_remaining", 1},
    };
  }
  return fit_gbdt(ds, default_model_features(), params);
}

std::vector<double> gbdt_training_logloss_curve(const PlayDataset& ds,
                                                const std::vector<std::string>& features,
                                                const GbdtParams& params) {
  return fit_internal(ds, features, params, nullptr, {}, true).train_logloss;
}

namespace {
// Grid key that ignores num_rounds so those entries can share a fit.
std::string rounds_free_key(const GbdtParams& p) {
  GbdtParams q = p;
  q.num_rounds = 0;
  return q.to_json().dump();
}
}  // namespace

TuneResult tune_grid(const PlayDataset& train, const std::vector<GbdtParams>& grid,
                     std::uint64_t seed) {
  if (grid.empty()) throw ConfigError("tune_grid: empty grid");
  if (train.n_drives() < 2) throw DataError("tune_grid: need at least 2 drives");
  const TrainTestSplit split = split_by_drives(train, 0.5, derive(seed, fnv1a("tune_grid")));

  std::vector<double> score(grid.size(), 0.0);
  std::vector<char> done(grid.size(), 0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (done[i]) continue;
    std::vector<std::size_t> members{i};
    for (std::size_t j = i + 1; j < grid.size(); ++j)
      if (!done[j] && rounds_free_key(grid[j]) == rounds_free_key(grid[i])) members.push_back(j);

    std::vector<int> sorted_cp;
    for (std::size_t m : members) sorted_cp.push_back(grid[m].num_rounds);
    std::sort(sorted_cp.begin(), sorted_cp.end());
    sorted_cp.erase(std::unique(sorted_cp.begin(), sorted_cp.end()), sorted_cp.end());

    GbdtParams fit_params = grid[i];
    fit_params.num_rounds = sorted_cp.back();
    std::vector<double> cp_logloss;
    fit_gbdt_watched(split.train, default_model_features(), fit_params, split.test, sorted_cp,
                     &cp_logloss);
    for (std::size_t m : members) {
      const auto pos = std::find(sorted_cp.begin(), sorted_cp.end(), grid[m].num_rounds) -
                       sorted_cp.begin();
      score[m] = cp_logloss[static_cast<std::size_t>(pos)];
      done[m] = 1;
    }
  }

  TuneResult result;
  std::size_t best = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    result.table.emplace_back(grid[i], score[i]);
    if (score[i] < score[best]) best = i;  // ties keep grid order
  }
  result.best = grid[best];
  return result;
}

std::vector<GbdtParams> default_tuning_grid(const GbdtParams& base) {
  std::vector<GbdtParams> grid;
  for (int depth : {3, 4, 5})
    for (double lr : {0.05, 0.1})
      for (int rounds : {100, 300}) {
        GbdtParams p = base;
        p.max_depth = depth;
        p.learning_rate = lr;
        p.num_rounds = rounds;
        grid.push_back(p);
      }
  return grid;
}

nlohmann::json GbdtParams::to_json() const {
  return nlohmann::json{
      {"num_rounds", num_rounds},
      {"max_depth", max_depth},
      {"learning_rate", learning_rate},
      {"min_child_weight", min_child_weight},
      {"row_subsample", row_subsample},
      {"col_subsample", col_subsample},
      {"l2_leaf_penalty", l2_leaf_penalty},
      {"monotone_constraints", monotone_constraints},
      {"objective",
       objective == GbdtObjective::MulticlassSoftmax ? "multiclass_softmax" : "squared_error"},
      {"seed", seed},
  };
}

GbdtParams GbdtParams::from_json(const nlohmann::json& j) {
  GbdtParams p;
  p.num_rounds = j.at("num_rounds").get<int>();
  p.max_depth = j.at("max_depth").get<int>();
  p.learning_rate = j.at("learning_rate").get<double>();
  p.min_child_weight = j.at("min_child_weight").get<double>();
  p.row_subsample = j.at("row_subsample").get<double>();
  p.col_subsample = j.at("col_subsample").get<double>();
  p.l2_leaf_penalty = j.at("l2_leaf_penalty").get<double>();
  p.monotone_constraints = j.at("monotone_constraints").get<std::map<std::string, int>>();
  const std::string obj = j.at("objective").get<std::string>();
  if (obj == "multiclass_softmax") p.objective = GbdtObjective::MulticlassSoftmax;
  else if (obj == "squared_error") p.objective = GbdtObjective::SquaredError;
  else throw ConfigError("gbdt: unknown objective \"" + obj + "\"");
  p.seed = j.at("seed").get<std::uint64_t>();
  return p;
}

nlohmann::json GbdtModel::to_json() const {
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& round : rounds_) {
    nlohmann::json per_class = nlohmann::json::array();
    for (const Tree& t : round) {
      nlohmann::json nodes = nlohmann::json::array();
      for (const TreeNode& n : t.nodes)
        nodes.push_back({n.feature, n.threshold, n.left, n.right, n.value, n.gain});
      per_class.push_back(std::move(nodes));
    }
    trees.push_back(std::move(per_class));
  }
  return nlohmann::json{{"format_version", 1},
                        {"type", "gbdt"},
                        {"params", params_.to_json()},
                        {"feature_names", feature_names_},
                        {"base_scores", base_scores_},
                        {"rounds", trees}};
}

GbdtModel GbdtModel::from_json(const nlohmann::json& j) {
  if (j.at("type").get<std::string>() != "gbdt")
    throw ConfigError("GbdtModel: wrong model type in JSON");
  GbdtModel m;
  m.params_ = GbdtParams::from_json(j.at("params"));
  m.feature_names_ = j.at("feature_names").get<std::vector<std::string>>();
  m.base_scores_ = j.at("base_scores").get<std::vector<double>>();
  for (const auto& round : j.at("rounds")) {
    std::vector<Tree> per_class;
    for (const auto& tree : round) {
      Tree t;
      for (const auto& n : tree) {
        TreeNode tn;
        tn.feature = n.at(0).get<int>();
        tn.threshold = n.at(1).get<double>();
        tn.left = n.at(2).get<int>();
        tn.right = n.at(3).get<int>();
        tn.value = n.at(4).get<double>();
        tn.gain = n.at(5).get<double>();
        t.nodes.push_back(tn);
      }
      per_class.push_back(std::move(t));
    }
    m.rounds_.push_back(std::move(per_class));
  }
  return m;
}

}  // namespace ep
