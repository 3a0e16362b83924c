#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "emoint/error.h"
#include "emoint/ranker.h"

namespace emoint {
namespace {

using nlohmann::json;

std::vector<double> ToJson(const Eigen::VectorXd& v) {
  return (std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd VectorFrom(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                           static_cast<Eigen::Index>(values.size()));
}

}  // namespace

std::string ModelToJson(const RankingModel& model) {
  const SolverReport& r = model.solver_report;
  nlohmann::ordered_json j;
  j["version"] = kModelSchemaVersion;
  j["emotion"] = model.emotion;
  j["C"] = model.c;
  j["weights"] = ToJson(model.weights);
  j["feature_mean"] = ToJson(model.feature_mean);
  j["feature_std"] = ToJson(model.feature_std);
  j["attr_min"] = model.attr_min;
  j["attr_max"] = model.attr_max;
  j["solver_report"] = {{"iterations", r.iterations},
                        {"final_objective", r.final_objective},
                        {"gradient_norm", r.gradient_norm},
                        {"converged", r.converged},
                        {"objective_history", r.objective_history}};
  return j.dump(2) + "\n";
}

RankingModel ModelFromJson(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, std::string("model JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("version") || !j["version"].is_number_integer() ||
      j["version"].get<int>() != kModelSchemaVersion) {
    throw Error(ErrorCode::kSchemaVersionMismatch,
                "expected model schema version " +
                    std::to_string(kModelSchemaVersion));
  }
  RankingModel model;
  try {
    model.emotion = j.at("emotion").get<std::string>();
    model.c = j.at("C").get<double>();
    model.weights = VectorFrom(j.at("weights"));
    model.feature_mean = VectorFrom(j.at("feature_mean"));
    model.feature_std = VectorFrom(j.at("feature_std"));
    model.attr_min = j.at("attr_min").get<double>();
    model.attr_max = j.at("attr_max").get<double>();
    const json& r = j.at("solver_report");
    model.solver_report.iterations = r.at("iterations").get<int>();
    model.solver_report.final_objective = r.at("final_objective").get<double>();
    model.solver_report.gradient_norm = r.at("gradient_norm").get<double>();
    model.solver_report.converged = r.at("converged").get<bool>();
    model.solver_report.objective_history =
        r.at("objective_history").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("model JSON: ") + e.what());
  }
  if (model.feature_mean.size() != model.weights.size() ||
      model.feature_std.size() != model.weights.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "model vectors disagree on dimension");
  }
  if ((model.feature_std.array() <= 0.0).any() || model.attr_max < model.attr_min) {
    throw Error(ErrorCode::kParseError, "model violates std > 0 or attr_max >= attr_min");
  }
  return model;
}

void SaveModel(const RankingModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << ModelToJson(model);
  if (!out) throw Error(ErrorCode::kIoError, "short write to " + path.string());
}

RankingModel LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return ModelFromJson(buf.str());
}

}  // namespace emoint
