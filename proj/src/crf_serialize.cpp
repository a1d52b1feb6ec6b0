#include <nlohmann/json.hpp>

#include "sdqc/crf.hpp"
#include "sdqc/error.hpp"

namespace sdqc {

namespace {
using nlohmann::json;
constexpr const char* kModelFormat = "sdqc-model/1";
}  // namespace

std::string CrfModel::to_json() const {
  json j;
  j["format"] = kModelFormat;
  j["mode"] = std::string(train_mode_name(mode_));
  j["lambda"] = lambda_;
  json order = json::array();
  for (StanceLabel y : kLabelOrder) order.push_back(std::string(label_name(y)));
  j["label_order"] = std::move(order);
  json layout = json::array();
  for (const auto& block : layout_.blocks())
    layout.push_back(json{{"name", block.name}, {"width", block.width}});
  j["feature_layout"] = std::move(layout);
  j["bias"] = bias_;
  j["transition_buckets"] = transition_buckets_;
  json transitions = json::array();
  for (int b = 0; b < transition_buckets_; ++b) {
    json matrix = json::array();
    for (int yp = 0; yp < kNumLabels; ++yp) {
      json row = json::array();
      for (int yc = 0; yc < kNumLabels; ++yc)
        row.push_back(transition_[b * 16 + yp * kNumLabels + yc]);
      matrix.push_back(std::move(row));
    }
    transitions.push_back(std::move(matrix));
  }
  j["transition_weights"] = std::move(transitions);
  json weights = json::array();
  for (int y = 0; y < kNumLabels; ++y) {
    json row = json::array();
    for (int f = 0; f < feature_width_; ++f)
      row.push_back(node_weights_[static_cast<std::size_t>(y) * feature_width_ + f]);
    weights.push_back(std::move(row));
  }
  j["node_weights"] = std::move(weights);
  return j.dump(2) + "\n";
}

CrfModel CrfModel::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaViolation,
                std::string("model is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != kModelFormat)
      throw Error(ErrorCode::SchemaViolation, "unknown model format");
    const auto mode = parse_train_mode(j.at("mode").get<std::string>());
    if (!mode) throw Error(ErrorCode::SchemaViolation, "unknown train mode");
    const auto& order = j.at("label_order");
    if (order.size() != kLabelOrder.size())
      throw Error(ErrorCode::SchemaViolation, "wrong label order length");
    for (std::size_t k = 0; k < kLabelOrder.size(); ++k)
      if (order[k].get<std::string>() != label_name(kLabelOrder[k]))
        throw Error(ErrorCode::SchemaViolation, "label order mismatch");

    FeatureLayout layout;
    for (const auto& block : j.at("feature_layout"))
      layout.add(block.at("name").get<std::string>(),
                 block.at("width").get<int>());
    const int buckets = j.at("transition_buckets").get<int>();
    if (buckets < 1)
      throw Error(ErrorCode::SchemaViolation, "need at least one transition bucket");
    CrfModel model(std::move(layout), *mode, j.at("lambda").get<double>(),
                   buckets);

    const auto& bias = j.at("bias");
    const auto& transitions = j.at("transition_weights");
    const auto& weights = j.at("node_weights");
    if (bias.size() != 4 || weights.size() != 4)
      throw Error(ErrorCode::SchemaViolation, "parameter blocks must have 4 rows");
    if (static_cast<int>(transitions.size()) != buckets)
      throw Error(ErrorCode::SchemaViolation,
                  "transition matrices do not match the bucket count");
    for (int b = 0; b < buckets; ++b) {
      const auto& matrix = transitions[b];
      if (matrix.size() != 4)
        throw Error(ErrorCode::SchemaViolation, "transition matrices must have 4 rows");
      for (int yp = 0; yp < kNumLabels; ++yp) {
        if (matrix[yp].size() != 4)
          throw Error(ErrorCode::SchemaViolation,
                      "transition rows must have 4 columns");
        for (int yc = 0; yc < kNumLabels; ++yc)
          model.transition_[b * 16 + yp * kNumLabels + yc] =
              matrix[yp][yc].get<double>();
      }
    }
    for (int y = 0; y < kNumLabels; ++y) {
      model.bias_[y] = bias[y].get<double>();
      if (static_cast<int>(weights[y].size()) != model.feature_width_)
        throw Error(ErrorCode::DimensionMismatch,
                    "node weight rows do not match the feature layout width");
      for (int f = 0; f < model.feature_width_; ++f)
        model.node_weights_[static_cast<std::size_t>(y) * model.feature_width_ + f] =
            weights[y][f].get<double>();
    }
    return model;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaViolation,
                std::string("malformed model JSON: ") + e.what());
  }
}

}  // namespace sdqc
