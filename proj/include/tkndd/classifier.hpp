#pragma once

// One-vs-rest linear SVM over standardized similarity vectors.
//
// Each binary problem is the L2-regularized hinge-loss SVM
//   min_w  1/2 |w|^2 + sum_i C_i max(0, 1 - y_i w.x_i)
// with the bias folded in as a constant feature, solved in the dual by
// coordinate descent. Samples are visited in input order from alpha = 0, so
// training is bit-for-bit reproducible.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tkndd/class_label.hpp"
#include "tkndd/errors.hpp"
#include "tkndd/features.hpp"

namespace tkndd {

struct LabeledPair {
  SimilarityVector vector;
  ClassLabel label;
};

struct Hyperparams {
  double c = 1.0;
  int epochs = 1000;
  // Stop once the projected-gradient spread of an epoch falls below this.
  double tolerance = 1e-3;
  // Per-class multipliers on C; inverse class frequency when unset.
  std::optional<std::array<double, kClassCount>> class_weights;
};

struct TrainedModel {
  static constexpr int kFormatVersion = 1;

  int format_version = kFormatVersion;
  FeatureArray feature_means{};
  FeatureArray feature_stddevs{};
  // Zero-variance features; their stddev is stored as 1.
  std::array<bool, kFeatureCount> constant_features{};
  std::array<FeatureArray, kClassCount> weights{};
  std::array<double, kClassCount> biases{};
  double c = 1.0;
  int epochs = 0;
  double tolerance = 0.0;
  std::array<double, kClassCount> class_weights{};

  friend bool operator==(const TrainedModel&, const TrainedModel&) = default;
};

struct Prediction {
  ClassLabel label = ClassLabel::Clone;
  std::array<double, kClassCount> scores{};
};

namespace svm_detail {

inline FeatureArray standardize(const TrainedModel& m, const FeatureArray& x) {
  FeatureArray z;
  for (std::size_t f = 0; f < kFeatureCount; ++f)
    z[f] = (x[f] - m.feature_means[f]) / m.feature_stddevs[f];
  return z;
}

// Dual coordinate descent for one binary problem. `y` holds +1/-1 and
// `upper` the per-sample box bound C_i. Returns weights with the bias last.
inline std::array<double, kFeatureCount + 1> solve_binary(const std::vector<FeatureArray>& x,
                                                          const std::vector<double>& y,
                                                          const std::vector<double>& upper,
                                                          int epochs, double tolerance) {
  constexpr std::size_t d = kFeatureCount;
  std::array<double, d + 1> w{};
  const std::size_t n = x.size();
  std::vector<double> alpha(n, 0.0);
  std::vector<double> qii(n, 1.0);  // the bias feature contributes 1
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t f = 0; f < d; ++f) qii[i] += x[i][f] * x[i][f];

  for (int epoch = 0; epoch < epochs; ++epoch) {
    double max_pg = -std::numeric_limits<double>::infinity();
    double min_pg = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (upper[i] <= 0.0) continue;
      double margin = w[d];
      for (std::size_t f = 0; f < d; ++f) margin += w[f] * x[i][f];
      const double g = y[i] * margin - 1.0;
      double pg = g;
      if (alpha[i] == 0.0)
        pg = std::min(g, 0.0);
      else if (alpha[i] == upper[i])
        pg = std::max(g, 0.0);
      max_pg = std::max(max_pg, pg);
      min_pg = std::min(min_pg, pg);
      if (std::abs(pg) <= 1e-12) continue;
      const double old = alpha[i];
      alpha[i] = std::clamp(old - g / qii[i], 0.0, upper[i]);
      const double step = (alpha[i] - old) * y[i];
      for (std::size_t f = 0; f < d; ++f) w[f] += step * x[i][f];
      w[d] += step;
    }
    if (max_pg - min_pg < tolerance) break;
  }
  return w;
}

}  // namespace svm_detail

inline TrainedModel train(std::span<const LabeledPair> data, const Hyperparams& hp = {}) {
  if (data.empty()) throw DegenerateData("no training pairs");
  if (!(hp.c > 0.0)) throw Error("C must be positive");
  if (hp.epochs < 1) throw Error("epoch count must be at least 1");
  for (const auto& p : data)
    if (!p.vector.complete())
      throw DegenerateData("training pair '" + p.vector.pair_id + "' has missing components");

  std::array<std::size_t, kClassCount> counts{};
  for (const auto& p : data) ++counts[index_of(p.label)];
  const auto present = static_cast<std::size_t>(
      std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }));
  if (present < 2) throw DegenerateData("training data needs at least two distinct labels");
  if (std::all_of(data.begin(), data.end(),
                  [&](const LabeledPair& p) { return p.vector.values == data[0].vector.values; }))
    throw DegenerateData("all training vectors are identical");

  TrainedModel m;
  m.c = hp.c;
  m.epochs = hp.epochs;
  m.tolerance = hp.tolerance;
  const double n = static_cast<double>(data.size());
  if (hp.class_weights) {
    m.class_weights = *hp.class_weights;
  } else {
    for (std::size_t k = 0; k < kClassCount; ++k)
      m.class_weights[k] =
          counts[k] ? n / (static_cast<double>(present) * static_cast<double>(counts[k])) : 0.0;
  }

  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    double sum = 0.0;
    for (const auto& p : data) sum += p.vector.values[f];
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& p : data) ss += (p.vector.values[f] - mean) * (p.vector.values[f] - mean);
    const double sd = std::sqrt(ss / n);
    m.feature_means[f] = mean;
    m.constant_features[f] = !(sd > 1e-12);
    m.feature_stddevs[f] = m.constant_features[f] ? 1.0 : sd;
  }

  std::vector<FeatureArray> x;
  x.reserve(data.size());
  for (const auto& p : data) x.push_back(svm_detail::standardize(m, p.vector.values));

  // In each one-vs-rest problem the "rest" side would otherwise carry twice
  // the weight of the positive side, which pushes the middle class of an
  // ordered triple (clone, near-duplicate, distinct) below its neighbours.
  // Both sides are rescaled to equal total weight.
  std::vector<double> y(data.size());
  std::vector<double> upper(data.size());
  for (std::size_t k = 0; k < kClassCount; ++k) {
    double pos = 0.0, neg = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      const std::size_t c = index_of(data[i].label);
      y[i] = c == k ? 1.0 : -1.0;
      (c == k ? pos : neg) += m.class_weights[c];
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
      const double side = y[i] > 0 ? pos : neg;
      const double scale = side > 0.0 ? (pos + neg) / (2.0 * side) : 0.0;
      upper[i] = hp.c * m.class_weights[index_of(data[i].label)] * scale;
    }
    const auto w = svm_detail::solve_binary(x, y, upper, hp.epochs, hp.tolerance);
    std::copy_n(w.begin(), kFeatureCount, m.weights[k].begin());
    m.biases[k] = w[kFeatureCount];
  }
  return m;
}

inline Prediction predict(const TrainedModel& m, const FeatureArray& raw) {
  const FeatureArray z = svm_detail::standardize(m, raw);
  Prediction p;
  for (std::size_t k = 0; k < kClassCount; ++k) {
    double s = m.biases[k];
    for (std::size_t f = 0; f < kFeatureCount; ++f) s += m.weights[k][f] * z[f];
    p.scores[k] = s;
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < kClassCount; ++k)
    if (p.scores[k] > p.scores[best]) best = k;
  p.label = kAllLabels[best];
  return p;
}

inline Prediction predict(const TrainedModel& m, const SimilarityVector& v) {
  if (!v.complete()) throw Error("cannot classify incomplete vector '" + v.pair_id + "'");
  return predict(m, v.values);
}

// ---- serialization --------------------------------------------------------

inline std::string save_model(const TrainedModel& m) {
  using nlohmann::json;
  json j;
  j["format_version"] = m.format_version;
  json names = json::array();
  for (std::size_t f = 0; f < kFeatureCount; ++f) names.push_back(feature_name(f));
  j["feature_names"] = names;
  j["feature_means"] = m.feature_means;
  j["feature_stddevs"] = m.feature_stddevs;
  j["constant_features"] = m.constant_features;
  json classes = json::array();
  for (ClassLabel l : kAllLabels) classes.push_back(std::string(to_string(l)));
  j["classes"] = classes;
  j["weights"] = m.weights;
  j["biases"] = m.biases;
  j["hyperparams"] = {{"c", m.c},
                      {"epochs", m.epochs},
                      {"tolerance", m.tolerance},
                      {"class_weights", m.class_weights}};
  return j.dump(2) + "\n";
}

inline TrainedModel load_model(std::string_view bytes) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(bytes.begin(), bytes.end());
  } catch (const json::exception& e) {
    throw FormatError(std::string("model: malformed JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("format_version"))
    throw FormatError("model: missing field 'format_version'");
  if (!j["format_version"].is_number_integer() ||
      j["format_version"].get<int>() != TrainedModel::kFormatVersion)
    throw FormatError("model: unsupported format_version " + j["format_version"].dump());

  auto need = [&](const json& obj, const char* key) -> const json& {
    if (!obj.contains(key)) throw FormatError(std::string("model: missing field '") + key + "'");
    return obj.at(key);
  };
  TrainedModel m;
  try {
    m.feature_means = need(j, "feature_means").get<FeatureArray>();
    m.feature_stddevs = need(j, "feature_stddevs").get<FeatureArray>();
    m.constant_features = need(j, "constant_features").get<std::array<bool, kFeatureCount>>();
    m.weights = need(j, "weights").get<std::array<FeatureArray, kClassCount>>();
    m.biases = need(j, "biases").get<std::array<double, kClassCount>>();
    const json& hp = need(j, "hyperparams");
    m.c = need(hp, "c").get<double>();
    m.epochs = need(hp, "epochs").get<int>();
    m.tolerance = need(hp, "tolerance").get<double>();
    m.class_weights = need(hp, "class_weights").get<std::array<double, kClassCount>>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("model: bad field: ") + e.what());
  }
  for (double sd : m.feature_stddevs)
    if (!(sd > 0.0)) throw FormatError("model: feature stddevs must be positive");
  return m;
}

}  // namespace tkndd
