#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "tkndd/class_label.hpp"
#include "tkndd/csv.hpp"
#include "tkndd/dom_repr.hpp"
#include "tkndd/dom_tree.hpp"
#include "tkndd/errors.hpp"
#include "tkndd/tree_kernels.hpp"

namespace tkndd {

inline constexpr std::size_t kFeatureCount = kAllStrategies.size() * kAllKernels.size();

// Strategy-major, kernel-minor: index = 3 * strategy + kernel.
inline constexpr std::size_t feature_index(ReprStrategy s, KernelKind k) {
  return 3 * static_cast<std::size_t>(s) + static_cast<std::size_t>(k);
}

inline std::string feature_name(std::size_t i) {
  return std::string(to_string(kAllStrategies[i / 3])) + "." +
         std::string(to_string(kAllKernels[i % 3]));
}

using FeatureArray = std::array<double, kFeatureCount>;

struct SimilarityVector {
  std::string pair_id;
  FeatureArray values{};
  // Components that could not be computed (lenient mode only); their value
  // is NaN.
  std::array<bool, kFeatureCount> missing{};

  bool complete() const {
    for (bool m : missing)
      if (m) return false;
    return true;
  }
};

struct FeatureOptions {
  std::size_t pair_budget = kDefaultPairBudget;
  // Record budget failures as missing components instead of throwing.
  bool lenient = false;
};

// The three strategy views of one page, built once and reused for every
// kernel and every pair the page takes part in.
class PageViews {
 public:
  explicit PageViews(const DomTree& page) {
    for (ReprStrategy s : kAllStrategies)
      views_[static_cast<std::size_t>(s)] = apply_strategy(page, s);
  }

  const DomTree& view(ReprStrategy s) const { return views_[static_cast<std::size_t>(s)]; }

 private:
  std::array<DomTree, kAllStrategies.size()> views_;
};

inline SimilarityVector similarity_vector(const PageViews& a, const PageViews& b,
                                          const KernelParams& params,
                                          const FeatureOptions& options = {},
                                          std::string pair_id = {}) {
  SimilarityVector out;
  out.pair_id = std::move(pair_id);
  for (ReprStrategy s : kAllStrategies) {
    const DomTree& ta = a.view(s);
    const DomTree& tb = b.view(s);
    for (KernelKind k : kAllKernels) {
      const std::size_t i = feature_index(s, k);
      try {
        out.values[i] = normalized_kernel(k, params, ta, tb, options.pair_budget);
      } catch (const NodeBudgetExceeded& e) {
        if (!options.lenient) throw NodeBudgetExceeded(e.pairs(), e.budget(), i);
        out.values[i] = std::numeric_limits<double>::quiet_NaN();
        out.missing[i] = true;
      }
    }
  }
  return out;
}

inline SimilarityVector similarity_vector(const DomTree& a, const DomTree& b,
                                          const KernelParams& params,
                                          const FeatureOptions& options = {},
                                          std::string pair_id = {}) {
  return similarity_vector(PageViews(a), PageViews(b), params, options, std::move(pair_id));
}

// ---- feature dump CSV -----------------------------------------------------

struct FeatureRow {
  SimilarityVector vector;
  std::optional<ClassLabel> label;
};

inline std::vector<std::string> feature_header() {
  std::vector<std::string> h{"pair_id", "label"};
  for (std::size_t i = 0; i < kFeatureCount; ++i) h.push_back("f" + std::to_string(i));
  return h;
}

inline void write_feature_row(std::ostream& out, const FeatureRow& row) {
  std::vector<std::string> fields{row.vector.pair_id,
                                  row.label ? std::string(to_string(*row.label)) : std::string{}};
  for (std::size_t i = 0; i < kFeatureCount; ++i)
    fields.push_back(row.vector.missing[i] ? std::string{} : csv::format_double(row.vector.values[i]));
  csv::write_row(out, fields);
}

inline void write_feature_csv(std::ostream& out, const std::vector<FeatureRow>& rows) {
  csv::write_row(out, feature_header());
  for (const auto& r : rows) write_feature_row(out, r);
}

inline std::vector<FeatureRow> read_feature_csv(std::istream& in) {
  const auto records = csv::read(in);
  if (records.empty() || records.front().fields != feature_header())
    throw FormatError("feature csv: expected header pair_id,label,f0,...,f8");
  std::vector<FeatureRow> rows;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.fields.size() != kFeatureCount + 2)
      throw FormatError("feature csv line " + std::to_string(rec.line) + ": expected " +
                        std::to_string(kFeatureCount + 2) + " fields");
    FeatureRow row;
    row.vector.pair_id = rec.fields[0];
    if (!rec.fields[1].empty()) {
      row.label = parse_label(rec.fields[1]);
      if (!row.label)
        throw FormatError("feature csv line " + std::to_string(rec.line) + ": unknown label '" +
                          rec.fields[1] + "'");
    }
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      const std::string& f = rec.fields[i + 2];
      if (f.empty()) {
        row.vector.missing[i] = true;
        row.vector.values[i] = std::numeric_limits<double>::quiet_NaN();
      } else {
        row.vector.values[i] = csv::parse_double(f, rec.line);
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace tkndd
