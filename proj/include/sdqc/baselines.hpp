#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "sdqc/labels.hpp"

namespace sdqc {

// Dummy classifier that always emits the modal training label.
struct MajorityModel {
  StanceLabel label = StanceLabel::Supporting;
  std::array<long long, kNumLabels> training_counts{};

  std::string to_json() const;
  static MajorityModel from_json(const std::string& text);
};

MajorityModel train_majority(std::span<const StanceLabel> labels);
std::vector<StanceLabel> predict_majority(const MajorityModel& model,
                                          std::size_t count);

// Gaussian Naive Bayes over the standardized feature vector: add-one
// smoothed class priors, one Gaussian per (class, feature column).
struct GaussianNbModel {
  int feature_width = 0;
  double variance_floor = 1e-9;
  std::array<double, kNumLabels> class_priors{};
  // Row-major 4 x F.
  std::vector<double> means;
  std::vector<double> variances;

  std::string to_json() const;
  static GaussianNbModel from_json(const std::string& text);
};

// Classes absent from training keep their smoothed prior and fall back to
// the pooled global mean/variance for the likelihood.
GaussianNbModel train_nb(std::span<const std::vector<double>> features,
                         std::span<const StanceLabel> labels,
                         double variance_floor = 1e-9);

StanceLabel predict_nb(const GaussianNbModel& model,
                       std::span<const double> features);
std::vector<StanceLabel> predict_nb(
    const GaussianNbModel& model, std::span<const std::vector<double>> features);

// One `tweet_id TAB label` per line; labels in either short or long form.
// Throws MalformedLine, MissingTweetId, UnknownLabel, LabelConflict, IoError.
std::map<std::string, StanceLabel> import_external_predictions(
    const std::string& path);

}  // namespace sdqc
