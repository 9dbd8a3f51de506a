#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tkndd/class_label.hpp"
#include "tkndd/classifier.hpp"
#include "tkndd/csv.hpp"
#include "tkndd/errors.hpp"
#include "tkndd/features.hpp"
#include "tkndd/html_parser.hpp"
#include "tkndd/parallel.hpp"

namespace tkndd {

// ---- manifests ------------------------------------------------------------

struct ManifestRow {
  std::size_t line = 0;
  std::string pair_id;
  std::filesystem::path file_a;
  std::filesystem::path file_b;
  ClassLabel label = ClassLabel::Clone;
};

struct PairManifest {
  // SS, DS, TS or any custom tag.
  std::string dataset_tag = "custom";
  std::vector<ManifestRow> rows;
};

// Reads `pair_id,file_a,file_b,label`. Relative file paths are resolved
// against the manifest's directory.
inline PairManifest load_manifest(const std::filesystem::path& path,
                                  std::string dataset_tag = "custom") {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ManifestError(0, "cannot open " + path.string());
  std::vector<csv::Record> records;
  try {
    records = csv::read(in);
  } catch (const FormatError& e) {
    throw ManifestError(0, e.what());
  }
  static const std::vector<std::string> kHeader{"pair_id", "file_a", "file_b", "label"};
  if (records.empty() || records.front().fields != kHeader)
    throw ManifestError(1, "expected header pair_id,file_a,file_b,label");

  PairManifest m;
  m.dataset_tag = std::move(dataset_tag);
  const auto base = path.parent_path();
  std::unordered_set<std::string> seen;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.fields.size() != 4)
      throw ManifestError(rec.line, "expected 4 fields, got " + std::to_string(rec.fields.size()));
    ManifestRow row;
    row.line = rec.line;
    row.pair_id = rec.fields[0];
    if (row.pair_id.empty()) throw ManifestError(rec.line, "empty pair_id");
    if (!seen.insert(row.pair_id).second)
      throw ManifestError(rec.line, "duplicate pair_id '" + row.pair_id + "'");
    const auto label = parse_label(rec.fields[3]);
    if (!label) throw ManifestError(rec.line, "unknown label '" + rec.fields[3] + "'");
    row.label = *label;
    for (auto [field, dest] : {std::pair{&rec.fields[1], &row.file_a},
                               std::pair{&rec.fields[2], &row.file_b}}) {
      std::filesystem::path p(*field);
      if (p.is_relative()) p = base / p;
      if (!std::filesystem::is_regular_file(p))
        throw ManifestError(rec.line, "missing file " + p.string());
      *dest = std::move(p);
    }
    m.rows.push_back(std::move(row));
  }
  return m;
}

// ---- per-pair extraction --------------------------------------------------

enum class FailureKind { Input, Budget, Internal };

inline FailureKind classify_failure(std::exception_ptr e) {
  try {
    std::rethrow_exception(e);
  } catch (const NodeBudgetExceeded&) {
    return FailureKind::Budget;
  } catch (const NumericOverflow&) {
    return FailureKind::Budget;
  } catch (const EmptyDocument&) {
    return FailureKind::Input;
  } catch (const DepthLimitExceeded&) {
    return FailureKind::Input;
  } catch (const std::ios_base::failure&) {
    return FailureKind::Input;
  } catch (...) {
    return FailureKind::Internal;
  }
}

// A pair that could not be processed, with its manifest position.
class PairFailure : public Error {
 public:
  PairFailure(const ManifestRow& row, FailureKind kind, const std::string& what)
      : Error("pair '" + row.pair_id + "' (manifest line " + std::to_string(row.line) + "): " +
              what),
        pair_id_(row.pair_id),
        line_(row.line),
        kind_(kind) {}

  const std::string& pair_id() const noexcept { return pair_id_; }
  std::size_t line() const noexcept { return line_; }
  FailureKind kind() const noexcept { return kind_; }

 private:
  std::string pair_id_;
  std::size_t line_;
  FailureKind kind_;
};

struct ExtractOptions {
  FeatureOptions features;
  ParseOptions parse;
  std::size_t jobs = 1;
};

struct PairOutcome {
  std::optional<SimilarityVector> vector;
  std::string error;  // set when the pair was skipped
  FailureKind failure = FailureKind::Internal;

  // Scored pairs have a complete vector.
  bool usable() const { return vector && vector->complete(); }
};

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Similarity vectors for every manifest row, in manifest order. In lenient
// mode failures are recorded per row; otherwise the first failing row (in
// manifest order) is raised as PairFailure.
inline std::vector<PairOutcome> extract_manifest(const PairManifest& manifest,
                                                 const KernelParams& params,
                                                 const ExtractOptions& options) {
  params.validate();
  std::vector<PairOutcome> out(manifest.rows.size());
  parallel_for(manifest.rows.size(), options.jobs, [&](std::size_t i) {
    const ManifestRow& row = manifest.rows[i];
    try {
      const DomTree a = parse_html(read_file(row.file_a), row.file_a.string(), options.parse);
      const DomTree b = parse_html(read_file(row.file_b), row.file_b.string(), options.parse);
      out[i].vector = similarity_vector(a, b, params, options.features, row.pair_id);
    } catch (const std::exception& e) {
      const FailureKind kind = classify_failure(std::current_exception());
      if (!options.features.lenient) throw PairFailure(row, kind, e.what());
      out[i].error = e.what();
      out[i].failure = kind;
    }
  });
  return out;
}

// ---- metrics ----------------------------------------------------------------

// Rows are true classes, columns predicted classes, both in ClassLabel order.
using ConfusionMatrix = std::array<std::array<std::size_t, kClassCount>, kClassCount>;

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
  bool zero_support = false;
  // Some ratio had a zero denominator and was taken as 0.
  bool undefined = false;
};

inline std::array<ClassMetrics, kClassCount> class_metrics(const ConfusionMatrix& cm) {
  std::array<ClassMetrics, kClassCount> out;
  for (std::size_t k = 0; k < kClassCount; ++k) {
    std::size_t tp = cm[k][k], predicted = 0, actual = 0;
    for (std::size_t j = 0; j < kClassCount; ++j) {
      predicted += cm[j][k];
      actual += cm[k][j];
    }
    ClassMetrics& m = out[k];
    m.support = actual;
    m.zero_support = actual == 0;
    if (predicted > 0)
      m.precision = static_cast<double>(tp) / static_cast<double>(predicted);
    else
      m.undefined = true;
    if (actual > 0)
      m.recall = static_cast<double>(tp) / static_cast<double>(actual);
    else
      m.undefined = true;
    if (m.precision + m.recall > 0.0)
      m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    else
      m.undefined = true;
  }
  return out;
}

inline double macro_f1(const std::array<ClassMetrics, kClassCount>& metrics) {
  double sum = 0.0;
  for (const auto& m : metrics) sum += m.f1;
  return sum / static_cast<double>(kClassCount);
}

inline double macro_f1(const ConfusionMatrix& cm) { return macro_f1(class_metrics(cm)); }

// ---- evaluation -------------------------------------------------------------

struct EvalReport {
  std::string dataset_tag;
  std::string model_id;
  ConfusionMatrix confusion{};
  std::array<ClassMetrics, kClassCount> per_class{};
  double macro_f1 = 0.0;
  std::size_t scored = 0;
  std::size_t skipped = 0;
  std::vector<std::string> skipped_pairs;
  double seconds = 0.0;
  double pairs_per_second = 0.0;
};

struct EvalOptions {
  ExtractOptions extract;
  std::string model_id;
};

inline void finalize_report(EvalReport& r) {
  r.per_class = class_metrics(r.confusion);
  r.macro_f1 = tkndd::macro_f1(r.per_class);
}

inline EvalReport evaluate(const TrainedModel& model, const PairManifest& manifest,
                           const KernelParams& params, const EvalOptions& options = {}) {
  const auto start = std::chrono::steady_clock::now();
  const auto outcomes = extract_manifest(manifest, params, options.extract);
  EvalReport r;
  r.dataset_tag = manifest.dataset_tag;
  r.model_id = options.model_id;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (!outcomes[i].usable()) {
      ++r.skipped;
      r.skipped_pairs.push_back(manifest.rows[i].pair_id);
      continue;
    }
    const Prediction p = predict(model, *outcomes[i].vector);
    ++r.confusion[index_of(manifest.rows[i].label)][index_of(p.label)];
    ++r.scored;
  }
  finalize_report(r);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.pairs_per_second = r.seconds > 0.0 ? static_cast<double>(outcomes.size()) / r.seconds : 0.0;
  return r;
}

// Timing is left out unless asked for so that reports of identical runs are
// byte-identical.
inline std::string report_to_json(const EvalReport& r, bool include_timing = false) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["dataset_tag"] = r.dataset_tag;
  j["model_id"] = r.model_id;
  j["macro_f1"] = r.macro_f1;
  ordered_json classes = ordered_json::object();
  for (ClassLabel l : kAllLabels) {
    const ClassMetrics& m = r.per_class[index_of(l)];
    classes[std::string(to_string(l))] = {{"precision", m.precision}, {"recall", m.recall},
                                          {"f1", m.f1},               {"support", m.support},
                                          {"zero_support", m.zero_support},
                                          {"undefined", m.undefined}};
  }
  j["per_class"] = classes;
  ordered_json labels = ordered_json::array();
  for (ClassLabel l : kAllLabels) labels.push_back(std::string(to_string(l)));
  j["confusion_labels"] = labels;
  j["confusion"] = r.confusion;
  j["scored_pairs"] = r.scored;
  j["skipped_pairs"] = r.skipped;
  j["skipped_pair_ids"] = r.skipped_pairs;
  if (include_timing) j["timing"] = {{"seconds", r.seconds}, {"pairs_per_second", r.pairs_per_second}};
  return j.dump(2) + "\n";
}

inline std::string format_report_table(const EvalReport& r) {
  std::ostringstream out;
  char buf[160];
  out << "dataset " << r.dataset_tag << "  model " << r.model_id << "\n";
  std::snprintf(buf, sizeof buf, "%-16s %9s %9s %9s %9s\n", "class", "precision", "recall", "f1",
                "support");
  out << buf;
  for (ClassLabel l : kAllLabels) {
    const ClassMetrics& m = r.per_class[index_of(l)];
    std::snprintf(buf, sizeof buf, "%-16s %9.4f %9.4f %9.4f %9zu%s\n",
                  std::string(to_string(l)).c_str(), m.precision, m.recall, m.f1, m.support,
                  m.undefined ? "  *" : "");
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "macro-F1 %.4f  scored %zu  skipped %zu  (%.1f pairs/s)\n",
                r.macro_f1, r.scored, r.skipped, r.pairs_per_second);
  out << buf;
  return out.str();
}

}  // namespace tkndd
