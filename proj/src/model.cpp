#include "ep/model.hpp"

#include <fstream>

namespace ep {

ProbVector AveragedSubsampleModel::predict_probs(const GameState& x) const {
  ProbVector mean;
  for (const ModelPtr& m : members_) {
    const ProbVector p = m->predict_probs(x);
    for (int k = 0; k < kNumOutcomes; ++k) mean[k] += p[k];
  }
  const double inv = 1.0 / static_cast<double>(members_.size());
  for (int k = 0; k < kNumOutcomes; ++k) mean[k] *= inv;
  return mean;
}

nlohmann::json AveragedSubsampleModel::to_json() const {
  nlohmann::json members = nlohmann::json::array();
  for (const ModelPtr& m : members_) members.push_back(m->to_json());
  return nlohmann::json{{"format_version", 1},
                        {"type", "averaged_subsample"},
                        {"members", std::move(members)}};
}

ModelPtr model_from_json(const nlohmann::json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "mlr") return std::make_shared<MlrOutcomeModel>(MlrModel::from_json(j));
  if (type == "gbdt") return std::make_shared<GbdtOutcomeModel>(GbdtModel::from_json(j));
  if (type == "averaged_subsample") {
    std::vector<ModelPtr> members;
    for (const auto& mj : j.at("members")) members.push_back(model_from_json(mj));
    return std::make_shared<AveragedSubsampleModel>(std::move(members));
  }
  throw ConfigError("unknown model type in JSON: \"" + type + "\"");
}

void save_model(const std::string& path, const OutcomeModel& model) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write model file: " + path);
  out << model.to_json().dump(2) << "\n";
}

ModelPtr load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model file: " + path);
  nlohmann::json j;
  in >> j;
  return model_from_json(j);
}

}  // namespace ep
