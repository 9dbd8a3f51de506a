#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace tkndd {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyDocument : public Error {
 public:
  explicit EmptyDocument(const std::string& source_id)
      : Error("empty document: " + source_id) {}
};

class DepthLimitExceeded : public Error {
 public:
  DepthLimitExceeded(const std::string& source_id, std::size_t depth, std::size_t limit)
      : Error("tree depth " + std::to_string(depth) + " exceeds limit " + std::to_string(limit) +
              " in " + source_id) {}
};

// Raised when a pairwise computation would touch more node pairs than allowed.
// `component` is set by the feature extractor to the index of the failing
// similarity-vector cell.
class NodeBudgetExceeded : public Error {
 public:
  NodeBudgetExceeded(std::size_t pairs, std::size_t budget,
                     std::optional<std::size_t> component = std::nullopt)
      : Error(describe(pairs, budget, component)),
        pairs_(pairs),
        budget_(budget),
        component_(component) {}

  std::size_t pairs() const noexcept { return pairs_; }
  std::size_t budget() const noexcept { return budget_; }
  std::optional<std::size_t> component() const noexcept { return component_; }

 private:
  static std::string describe(std::size_t pairs, std::size_t budget,
                              std::optional<std::size_t> component) {
    std::string msg = "node pair budget exceeded: " + std::to_string(pairs) + " > " +
                      std::to_string(budget);
    if (component) msg += " (component f" + std::to_string(*component) + ")";
    return msg;
  }

  std::size_t pairs_;
  std::size_t budget_;
  std::optional<std::size_t> component_;
};

// Kernel value left the finite double range (very large trees at decay 1).
class NumericOverflow : public Error {
 public:
  using Error::Error;
};

class DegenerateData : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class ManifestError : public Error {
 public:
  ManifestError(std::size_t row, const std::string& what)
      : Error("manifest row " + std::to_string(row) + ": " + what), row_(row) {}

  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

}  // namespace tkndd
