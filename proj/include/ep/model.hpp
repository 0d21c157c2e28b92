#pragma once

#include <memory>
#include <string>

#include "ep/dataset.hpp"
#include "ep/gbdt.hpp"
#include "ep/mlr.hpp"

#include <json.hpp>

namespace ep {

// Fitted drive outcome probability model: game-state -> ProbVector.
class OutcomeModel {
 public:
  virtual ~OutcomeModel() = default;
  virtual ProbVector predict_probs(const GameState& x) const = 0;
  virtual std::string kind() const = 0;
  virtual nlohmann::json to_json() const = 0;
};

using ModelPtr = std::shared_ptr<const OutcomeModel>;

class MlrOutcomeModel final : public OutcomeModel {
 public:
  explicit MlrOutcomeModel(MlrModel model) : model_(std::move(model)) {}
  ProbVector predict_probs(const GameState& x) const override { return model_.predict_probs(x); }
  std::string kind() const override { return "mlr"; }
  nlohmann::json to_json() const override { return model_.to_json(); }
  const MlrModel& inner() const { return model_; }

 private:
  MlrModel model_;
};

class GbdtOutcomeModel final : public OutcomeModel {
 public:
  explicit GbdtOutcomeModel(GbdtModel model) : model_(std::move(model)) {}
  ProbVector predict_probs(const GameState& x) const override { return model_.predict_probs(x); }
  std::string kind() const override { return "gbdt"; }
  nlohmann::json to_json() const override { return model_.to_json(); }
  const GbdtModel& inner() const { return model_; }

 private:
  GbdtModel model_;
};

// Mean of M member predictions, each member fit on an independent
// one-play-per-drive subsample.
class AveragedSubsampleModel final : public OutcomeModel {
 public:
  explicit AveragedSubsampleModel(std::vector<ModelPtr> members) : members_(std::move(members)) {
    if (members_.empty()) throw ConfigError("AveragedSubsampleModel: no members");
  }
  ProbVector predict_probs(const GameState& x) const override;
  std::string kind() const override { return "averaged_subsample"; }
  nlohmann::json to_json() const override;
  const std::vector<ModelPtr>& members() const { return members_; }

 private:
  std::vector<ModelPtr> members_;
};

ModelPtr model_from_json(const nlohmann::json& j);
void save_model(const std::string& path, const OutcomeModel& model);
ModelPtr load_model(const std::string& path);

}  // namespace ep
