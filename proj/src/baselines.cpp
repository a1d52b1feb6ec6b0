#include "sdqc/baselines.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sdqc/error.hpp"

namespace sdqc {

namespace {
using nlohmann::json;
constexpr int P = kNumLabels;
constexpr const char* kMajorityFormat = "sdqc-majority-model/1";
constexpr const char* kNbFormat = "sdqc-nb-model/1";
}  // namespace

MajorityModel train_majority(std::span<const StanceLabel> labels) {
  if (labels.empty())
    throw Error(ErrorCode::EmptyTrainingSet, "no labels to count");
  MajorityModel model;
  for (StanceLabel y : labels) model.training_counts[label_index(y)]++;
  int best = 0;
  for (int y = 1; y < P; ++y)
    if (model.training_counts[y] > model.training_counts[best]) best = y;
  model.label = kLabelOrder[best];
  return model;
}

std::vector<StanceLabel> predict_majority(const MajorityModel& model,
                                          std::size_t count) {
  return std::vector<StanceLabel>(count, model.label);
}

std::string MajorityModel::to_json() const {
  json j;
  j["format"] = kMajorityFormat;
  j["label"] = std::string(label_name(label));
  j["training_counts"] = training_counts;
  return j.dump(2) + "\n";
}

MajorityModel MajorityModel::from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    if (j.at("format").get<std::string>() != kMajorityFormat)
      throw Error(ErrorCode::SchemaViolation, "unknown model format");
    MajorityModel model;
    const auto label = parse_label(j.at("label").get<std::string>());
    if (!label) throw Error(ErrorCode::UnknownLabel, "bad majority label");
    model.label = *label;
    const auto& counts = j.at("training_counts");
    if (counts.size() != kNumLabels)
      throw Error(ErrorCode::SchemaViolation, "wrong count vector length");
    for (int y = 0; y < P; ++y) model.training_counts[y] = counts[y].get<long long>();
    return model;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaViolation,
                std::string("malformed model JSON: ") + e.what());
  }
}

GaussianNbModel train_nb(std::span<const std::vector<double>> features,
                         std::span<const StanceLabel> labels,
                         double variance_floor) {
  if (features.empty())
    throw Error(ErrorCode::EmptyTrainingSet, "no feature rows");
  if (features.size() != labels.size())
    throw Error(ErrorCode::LengthMismatch,
                "feature rows do not match label count");
  const int width = static_cast<int>(features[0].size());
  for (const auto& row : features)
    if (static_cast<int>(row.size()) != width)
      throw Error(ErrorCode::DimensionMismatch, "ragged feature rows");

  GaussianNbModel model;
  model.feature_width = width;
  model.variance_floor = variance_floor;
  model.means.assign(static_cast<std::size_t>(P) * width, 0.0);
  model.variances.assign(static_cast<std::size_t>(P) * width, 0.0);

  std::array<long long, P> counts{};
  for (StanceLabel y : labels) counts[label_index(y)]++;
  const double denom = static_cast<double>(labels.size()) + P;
  for (int y = 0; y < P; ++y)
    model.class_priors[y] = (static_cast<double>(counts[y]) + 1.0) / denom;

  // Pooled statistics double as the fallback for classes with no
  // training examples.
  std::vector<double> global_mean(width, 0.0);
  std::vector<double> global_var(width, 0.0);
  for (const auto& row : features)
    for (int f = 0; f < width; ++f) global_mean[f] += row[f];
  for (int f = 0; f < width; ++f)
    global_mean[f] /= static_cast<double>(features.size());
  for (const auto& row : features)
    for (int f = 0; f < width; ++f) {
      const double d = row[f] - global_mean[f];
      global_var[f] += d * d;
    }
  for (int f = 0; f < width; ++f) {
    global_var[f] /= static_cast<double>(features.size());
    if (global_var[f] < variance_floor) global_var[f] = variance_floor;
  }

  for (int y = 0; y < P; ++y) {
    double* mean = model.means.data() + static_cast<std::size_t>(y) * width;
    double* var = model.variances.data() + static_cast<std::size_t>(y) * width;
    if (counts[y] == 0) {
      for (int f = 0; f < width; ++f) {
        mean[f] = global_mean[f];
        var[f] = global_var[f];
      }
      continue;
    }
    for (std::size_t r = 0; r < features.size(); ++r)
      if (label_index(labels[r]) == y)
        for (int f = 0; f < width; ++f) mean[f] += features[r][f];
    for (int f = 0; f < width; ++f) mean[f] /= static_cast<double>(counts[y]);
    for (std::size_t r = 0; r < features.size(); ++r)
      if (label_index(labels[r]) == y)
        for (int f = 0; f < width; ++f) {
          const double d = features[r][f] - mean[f];
          var[f] += d * d;
        }
    for (int f = 0; f < width; ++f) {
      var[f] /= static_cast<double>(counts[y]);
      if (var[f] < variance_floor) var[f] = variance_floor;
    }
  }
  return model;
}

StanceLabel predict_nb(const GaussianNbModel& model,
                       std::span<const double> features) {
  if (static_cast<int>(features.size()) != model.feature_width)
    throw Error(ErrorCode::DimensionMismatch,
                "feature width does not match model width");
  constexpr double kLog2Pi = 1.8378770664093454836;  // log(2*pi)
  int best = 0;
  double best_score = 0.0;
  for (int y = 0; y < P; ++y) {
    double score = std::log(model.class_priors[y]);
    const double* mean =
        model.means.data() + static_cast<std::size_t>(y) * model.feature_width;
    const double* var = model.variances.data() +
                        static_cast<std::size_t>(y) * model.feature_width;
    for (int f = 0; f < model.feature_width; ++f) {
      const double d = features[f] - mean[f];
      score += -0.5 * (kLog2Pi + std::log(var[f])) - d * d / (2.0 * var[f]);
    }
    if (y == 0 || score > best_score) {
      best = y;
      best_score = score;
    }
  }
  return kLabelOrder[best];
}

std::vector<StanceLabel> predict_nb(
    const GaussianNbModel& model,
    std::span<const std::vector<double>> features) {
  std::vector<StanceLabel> out;
  out.reserve(features.size());
  for (const auto& row : features) out.push_back(predict_nb(model, row));
  return out;
}

std::string GaussianNbModel::to_json() const {
  json j;
  j["format"] = kNbFormat;
  j["feature_width"] = feature_width;
  j["variance_floor"] = variance_floor;
  j["class_priors"] = class_priors;
  json means_rows = json::array();
  json var_rows = json::array();
  for (int y = 0; y < P; ++y) {
    json m = json::array();
    json v = json::array();
    for (int f = 0; f < feature_width; ++f) {
      m.push_back(means[static_cast<std::size_t>(y) * feature_width + f]);
      v.push_back(variances[static_cast<std::size_t>(y) * feature_width + f]);
    }
    means_rows.push_back(std::move(m));
    var_rows.push_back(std::move(v));
  }
  j["means"] = std::move(means_rows);
  j["variances"] = std::move(var_rows);
  return j.dump(2) + "\n";
}

GaussianNbModel GaussianNbModel::from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    if (j.at("format").get<std::string>() != kNbFormat)
      throw Error(ErrorCode::SchemaViolation, "unknown model format");
    GaussianNbModel model;
    model.feature_width = j.at("feature_width").get<int>();
    model.variance_floor = j.at("variance_floor").get<double>();
    const auto& priors = j.at("class_priors");
    const auto& means = j.at("means");
    const auto& variances = j.at("variances");
    if (priors.size() != P || means.size() != P || variances.size() != P)
      throw Error(ErrorCode::SchemaViolation, "parameter blocks must have 4 rows");
    model.means.assign(static_cast<std::size_t>(P) * model.feature_width, 0.0);
    model.variances.assign(static_cast<std::size_t>(P) * model.feature_width, 0.0);
    for (int y = 0; y < P; ++y) {
      model.class_priors[y] = priors[y].get<double>();
      if (static_cast<int>(means[y].size()) != model.feature_width ||
          static_cast<int>(variances[y].size()) != model.feature_width)
        throw Error(ErrorCode::DimensionMismatch,
                    "parameter rows do not match feature width");
      for (int f = 0; f < model.feature_width; ++f) {
        model.means[static_cast<std::size_t>(y) * model.feature_width + f] =
            means[y][f].get<double>();
        model.variances[static_cast<std::size_t>(y) * model.feature_width + f] =
            variances[y][f].get<double>();
      }
    }
    return model;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaViolation,
                std::string("malformed model JSON: ") + e.what());
  }
}

std::map<std::string, StanceLabel> import_external_predictions(
    const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::IoError, "cannot open predictions file: " + path);
  std::map<std::string, StanceLabel> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw Error(ErrorCode::MalformedLine,
                  path + ":" + std::to_string(line_no) + ": expected `id TAB label`");
    const std::string id = line.substr(0, tab);
    const std::string name = line.substr(tab + 1);
    if (id.empty())
      throw Error(ErrorCode::MissingTweetId,
                  path + ":" + std::to_string(line_no) + ": empty tweet id");
    const auto label = parse_label(name);
    if (!label)
      throw Error(ErrorCode::UnknownLabel,
                  path + ":" + std::to_string(line_no) + ": unknown label `" +
                      name + "`");
    const auto [it, inserted] = out.emplace(id, *label);
    if (!inserted && it->second != *label)
      throw Error(ErrorCode::LabelConflict,
                  path + ":" + std::to_string(line_no) +
                      ": conflicting labels for tweet " + id);
  }
  return out;
}

}  // namespace sdqc
