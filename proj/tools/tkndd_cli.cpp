// tkndd: near-duplicate web page classification from DOM tree kernels.
//
//   tkndd compare a.html b.html [--model m.json]
//   tkndd extract manifest.csv --out features.csv
//   tkndd train features.csv --out model.json
//   tkndd evaluate --model model.json manifest.csv --out report.json
//   tkndd baselines manifest.csv --out baselines.csv
//
// Exit codes: 0 success, 2 input error, 3 resource budget, 4 internal error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tkndd/tkndd.hpp"

namespace {

using namespace tkndd;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitBudget = 3;
constexpr int kExitInternal = 4;

struct CliConfig {
  double lambda = 0.4;
  double mu = 0.4;
  std::size_t budget = kDefaultPairBudget;
  std::size_t jobs = 1;
  std::size_t max_depth = 512;
  bool lenient = false;
  std::string model;
  std::string out;
  std::string config;
  std::string dataset_tag = "custom";

  KernelParams params() const { return {lambda, mu}; }

  ExtractOptions extract() const {
    ExtractOptions o;
    o.features.pair_budget = budget;
    o.features.lenient = lenient;
    o.parse.max_depth = max_depth;
    o.jobs = jobs;
    return o;
  }
};

class InputError : public Error {
 public:
  using Error::Error;
};

// Values present in the config file replace whatever the flags said.
void apply_config_file(CliConfig& cfg) {
  if (cfg.config.empty()) return;
  std::ifstream in(cfg.config);
  if (!in) throw InputError("cannot read config " + cfg.config);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
    if (j.contains("lambda")) cfg.lambda = j["lambda"].get<double>();
    if (j.contains("mu")) cfg.mu = j["mu"].get<double>();
    if (j.contains("budget")) cfg.budget = j["budget"].get<std::size_t>();
    if (j.contains("jobs")) cfg.jobs = j["jobs"].get<std::size_t>();
    if (j.contains("max_depth")) cfg.max_depth = j["max_depth"].get<std::size_t>();
    if (j.contains("lenient")) cfg.lenient = j["lenient"].get<bool>();
    if (j.contains("model")) cfg.model = j["model"].get<std::string>();
    if (j.contains("out")) cfg.out = j["out"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError("config " + cfg.config + ": " + e.what());
  }
}

void validate(const CliConfig& cfg) {
  try {
    cfg.params().validate();
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  if (cfg.jobs < 1) throw InputError("--jobs must be at least 1");
}

// Writes to --out when given, stdout otherwise. Files are written in one go
// after the content is complete.
void emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path);
  out << content;
}

DomTree load_page(const std::string& path, const CliConfig& cfg) {
  std::string bytes;
  try {
    bytes = read_file(path);
  } catch (const std::ios_base::failure& e) {
    throw InputError(e.what());
  }
  ParseOptions po;
  po.max_depth = cfg.max_depth;
  return parse_html(bytes, path, po);
}

TrainedModel load_model_file(const std::string& path) {
  if (path.empty()) throw InputError("--model is required");
  std::string bytes;
  try {
    bytes = read_file(path);
  } catch (const std::ios_base::failure& e) {
    throw InputError(e.what());
  }
  return load_model(bytes);
}

std::string skip_sidecar(const PairManifest& m, const std::vector<std::string>& errors) {
  std::ostringstream out;
  csv::write_row(out, {"pair_id", "line", "error"});
  for (std::size_t i = 0; i < errors.size(); ++i)
    if (!errors[i].empty())
      csv::write_row(out, {m.rows[i].pair_id, std::to_string(m.rows[i].line), errors[i]});
  return out.str();
}

void report_skips(const CliConfig& cfg, const PairManifest& m,
                  const std::vector<std::string>& errors) {
  std::size_t n = 0;
  for (const auto& e : errors) n += !e.empty();
  if (n == 0) return;
  if (cfg.out.empty()) {
    for (std::size_t i = 0; i < errors.size(); ++i)
      if (!errors[i].empty())
        std::cerr << "skipped " << m.rows[i].pair_id << " (line " << m.rows[i].line
                  << "): " << errors[i] << "\n";
  } else {
    emit(cfg.out + ".skipped.csv", skip_sidecar(m, errors));
    std::cerr << "skipped " << n << " pair(s); see " << cfg.out << ".skipped.csv\n";
  }
}

int cmd_compare(const CliConfig& cfg, const std::string& file_a, const std::string& file_b) {
  const DomTree a = load_page(file_a, cfg);
  const DomTree b = load_page(file_b, cfg);
  FeatureOptions fo;
  fo.pair_budget = cfg.budget;
  const SimilarityVector v = similarity_vector(a, b, cfg.params(), fo);
  std::ostringstream out;
  for (std::size_t i = 0; i < kFeatureCount; ++i)
    out << "f" << i << ' ' << feature_name(i) << ' ' << csv::format_double(v.values[i]) << "\n";
  if (!cfg.model.empty()) {
    const TrainedModel m = load_model_file(cfg.model);
    const Prediction p = predict(m, v);
    out << "prediction " << to_string(p.label) << "\n";
    for (ClassLabel l : kAllLabels)
      out << "score " << to_string(l) << ' ' << csv::format_double(p.scores[index_of(l)]) << "\n";
  }
  std::cout << out.str();
  return kExitOk;
}

int cmd_extract(const CliConfig& cfg, const std::string& manifest_path) {
  const PairManifest m = load_manifest(manifest_path, cfg.dataset_tag);
  const auto outcomes = extract_manifest(m, cfg.params(), cfg.extract());
  std::ostringstream out;
  csv::write_row(out, feature_header());
  std::vector<std::string> errors(outcomes.size());
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (!outcomes[i].vector) {
      errors[i] = outcomes[i].error;
      continue;
    }
    write_feature_row(out, FeatureRow{*outcomes[i].vector, m.rows[i].label});
  }
  emit(cfg.out, out.str());
  report_skips(cfg, m, errors);
  return kExitOk;
}

int cmd_train(const CliConfig& cfg, const std::string& features_path, const Hyperparams& hp) {
  std::ifstream in(features_path, std::ios::binary);
  if (!in) throw InputError("cannot read " + features_path);
  const auto rows = read_feature_csv(in);
  std::vector<LabeledPair> data;
  std::size_t excluded = 0;
  for (const auto& r : rows) {
    if (!r.label || !r.vector.complete()) {
      ++excluded;
      continue;
    }
    data.push_back(LabeledPair{r.vector, *r.label});
  }
  if (excluded) std::cerr << "excluded " << excluded << " unlabeled or incomplete row(s)\n";
  const TrainedModel model = train(data, hp);
  std::size_t correct = 0;
  for (const auto& p : data) correct += predict(model, p.vector).label == p.label;
  std::fprintf(stderr, "trained on %zu pairs; training accuracy %.4f\n", data.size(),
               static_cast<double>(correct) / static_cast<double>(data.size()));
  if (cfg.out.empty()) throw InputError("--out is required for train");
  emit(cfg.out, save_model(model));
  return kExitOk;
}

int cmd_evaluate(const CliConfig& cfg, const std::string& manifest_path, bool timing) {
  const TrainedModel model = load_model_file(cfg.model);
  const PairManifest m = load_manifest(manifest_path, cfg.dataset_tag);
  EvalOptions eo;
  eo.extract = cfg.extract();
  eo.model_id = std::filesystem::path(cfg.model).filename().string();
  const EvalReport r = evaluate(model, m, cfg.params(), eo);
  const std::string json = report_to_json(r, timing);
  if (cfg.out.empty()) {
    std::cout << json;
    std::cerr << format_report_table(r);
  } else {
    emit(cfg.out, json);
    std::cout << format_report_table(r);
  }
  return kExitOk;
}

int cmd_baselines(const CliConfig& cfg, const std::string& manifest_path) {
  const PairManifest m = load_manifest(manifest_path, cfg.dataset_tag);
  struct Row {
    std::array<std::optional<double>, 3> values;
    std::string error;
  };
  std::vector<Row> rows(m.rows.size());
  parallel_for(m.rows.size(), cfg.jobs, [&](std::size_t i) {
    const ManifestRow& row = m.rows[i];
    try {
      ParseOptions po;
      po.max_depth = cfg.max_depth;
      const DomTree a = parse_html(read_file(row.file_a), row.file_a.string(), po);
      const DomTree b = parse_html(read_file(row.file_b), row.file_b.string(), po);
      for (BaselineKind k : kAllBaselines) {
        try {
          rows[i].values[static_cast<std::size_t>(k)] = baseline_similarity(k, a, b, cfg.budget);
        } catch (const NodeBudgetExceeded&) {
          if (!cfg.lenient) throw;
        }
      }
    } catch (const std::exception& e) {
      const FailureKind kind = classify_failure(std::current_exception());
      if (!cfg.lenient) throw PairFailure(row, kind, e.what());
      rows[i].error = e.what();
    }
  });
  std::ostringstream out;
  std::vector<std::string> header{"pair_id", "label"};
  for (BaselineKind k : kAllBaselines) header.emplace_back(to_string(k));
  csv::write_row(out, header);
  std::vector<std::string> errors(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].error.empty()) {
      errors[i] = rows[i].error;
      continue;
    }
    std::vector<std::string> fields{m.rows[i].pair_id, std::string(to_string(m.rows[i].label))};
    for (const auto& v : rows[i].values) fields.push_back(v ? csv::format_double(*v) : "");
    csv::write_row(out, fields);
  }
  emit(cfg.out, out.str());
  report_skips(cfg, m, errors);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Near-duplicate web page classification with DOM tree kernels"};
  app.require_subcommand(1);
  CliConfig cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--lambda", cfg.lambda, "Kernel decay lambda in (0,1]");
    sub->add_option("--mu", cfg.mu, "PTK decay mu in (0,1]");
    sub->add_option("--budget", cfg.budget, "Maximum node pairs per kernel evaluation");
    sub->add_option("--jobs", cfg.jobs, "Worker threads");
    sub->add_option("--max-depth", cfg.max_depth, "Maximum DOM depth");
    sub->add_flag("--lenient", cfg.lenient, "Skip failing pairs instead of aborting");
    sub->add_option("--out", cfg.out, "Output file (stdout when omitted)");
    sub->add_option("--config", cfg.config, "JSON config file; its values override flags");
  };

  std::string file_a, file_b, manifest, features;
  bool timing = false;
  Hyperparams hp;
  std::vector<double> class_weights;

  auto* compare = app.add_subcommand("compare", "Similarity vector (and class) for two pages");
  common(compare);
  compare->add_option("file_a", file_a)->required();
  compare->add_option("file_b", file_b)->required();
  compare->add_option("--model", cfg.model, "Trained model JSON");

  auto* extract = app.add_subcommand("extract", "Feature CSV for a pair manifest");
  common(extract);
  extract->add_option("manifest", manifest)->required();
  extract->add_option("--dataset-tag", cfg.dataset_tag);

  auto* trainc = app.add_subcommand("train", "Train a model from a feature CSV");
  common(trainc);
  trainc->add_option("features", features)->required();
  trainc->add_option("--c", hp.c, "Regularization strength C");
  trainc->add_option("--epochs", hp.epochs, "Maximum solver epochs");
  trainc->add_option("--class-weights", class_weights, "Weights for clone near_duplicate distinct")
      ->expected(3);

  auto* evaluatec = app.add_subcommand("evaluate", "Macro-F1 report for a pair manifest");
  common(evaluatec);
  evaluatec->add_option("manifest", manifest)->required();
  evaluatec->add_option("--model", cfg.model, "Trained model JSON")->required();
  evaluatec->add_option("--dataset-tag", cfg.dataset_tag);
  evaluatec->add_flag("--timing", timing, "Include timing in the JSON report");

  auto* baselines = app.add_subcommand("baselines", "Baseline similarity CSV for a pair manifest");
  common(baselines);
  baselines->add_option("manifest", manifest)->required();
  baselines->add_option("--dataset-tag", cfg.dataset_tag);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    apply_config_file(cfg);
    validate(cfg);
    if (class_weights.size() == 3) hp.class_weights = {class_weights[0], class_weights[1], class_weights[2]};
    if (compare->parsed()) return cmd_compare(cfg, file_a, file_b);
    if (extract->parsed()) return cmd_extract(cfg, manifest);
    if (trainc->parsed()) return cmd_train(cfg, features, hp);
    if (evaluatec->parsed()) return cmd_evaluate(cfg, manifest, timing);
    if (baselines->parsed()) return cmd_baselines(cfg, manifest);
  } catch (const PairFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case FailureKind::Input:
        return kExitInput;
      case FailureKind::Budget:
        return kExitBudget;
      case FailureKind::Internal:
        return kExitInternal;
    }
  } catch (const NodeBudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const NumericOverflow& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const EmptyDocument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const DepthLimitExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ManifestError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const DegenerateData& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
