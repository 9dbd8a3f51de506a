#include <algorithm>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "tkndd/eval.hpp"

using namespace tkndd;
using fixtures::TempDir;
using fixtures::write_file;

TEST(Metrics, WorkedExamples) {
  EXPECT_NEAR(macro_f1(ConfusionMatrix{{{4, 0, 0}, {0, 7, 0}, {0, 0, 2}}}), 1.0, 1e-12);
  EXPECT_NEAR(macro_f1(ConfusionMatrix{{{5, 0, 0}, {0, 0, 5}, {0, 0, 5}}}), 5.0 / 9.0, 1e-12);
  const ConfusionMatrix zero{};
  EXPECT_EQ(macro_f1(zero), 0.0);
  for (const auto& m : class_metrics(zero)) {
    EXPECT_TRUE(m.zero_support);
    EXPECT_TRUE(m.undefined);
  }
  // Balanced manifest, everything predicted as NearDuplicate.
  const ConfusionMatrix one_class{{{0, 4, 0}, {0, 4, 0}, {0, 4, 0}}};
  const auto per = class_metrics(one_class);
  EXPECT_NEAR(per[1].f1, 0.5, 1e-12);
  EXPECT_EQ(per[0].f1, 0.0);
  EXPECT_TRUE(per[0].undefined);
  EXPECT_FALSE(per[0].zero_support);
  EXPECT_NEAR(macro_f1(one_class), 1.0 / 6.0, 1e-12);
}

TEST(Metrics, PerClassValues) {
  const auto m = class_metrics(ConfusionMatrix{{{5, 0, 0}, {0, 0, 5}, {0, 0, 5}}});
  EXPECT_EQ(m[0].f1, 1.0);
  EXPECT_EQ(m[1].f1, 0.0);
  EXPECT_DOUBLE_EQ(m[2].precision, 0.5);
  EXPECT_DOUBLE_EQ(m[2].recall, 1.0);
  EXPECT_DOUBLE_EQ(m[2].f1, 2.0 / 3.0);
  EXPECT_EQ(m[1].support, 5u);
}

TEST(Metrics, PermutationInvariance) {
  std::mt19937_64 rng(71);
  std::uniform_int_distribution<std::size_t> count(0, 20);
  std::array<std::size_t, 3> perm{0, 1, 2};
  for (int t = 0; t < 500; ++t) {
    ConfusionMatrix cm;
    for (auto& row : cm)
      for (auto& c : row) c = count(rng);
    std::shuffle(perm.begin(), perm.end(), rng);
    ConfusionMatrix p;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) p[perm[i]][perm[j]] = cm[i][j];
    EXPECT_NEAR(macro_f1(cm), macro_f1(p), 1e-12);
    const auto m = class_metrics(cm);
    for (std::size_t k = 0; k < 3; ++k)
      EXPECT_EQ(m[k].support, std::accumulate(cm[k].begin(), cm[k].end(), std::size_t{0}));
    EXPECT_NEAR(macro_f1(cm), (m[0].f1 + m[1].f1 + m[2].f1) / 3.0, 1e-15);
  }
}

TEST(Manifest, LoadsAndResolvesPaths) {
  TempDir dir("manifest");
  write_file(dir / "a.html", "<p>");
  write_file(dir / "sub/b.html", "<p>");
  write_file(dir / "m.csv",
             "pair_id,file_a,file_b,label\n"
             "p1,a.html,sub/b.html,clone\n"
             "p2,a.html," + (dir / "sub/b.html").string() + ",Near_Duplicate\n"
             "p3,sub/b.html,a.html,DISTINCT\n");
  const PairManifest m = load_manifest(dir / "m.csv", "TS");
  ASSERT_EQ(m.rows.size(), 3u);
  EXPECT_EQ(m.dataset_tag, "TS");
  EXPECT_EQ(m.rows[0].file_a, dir / "a.html");
  EXPECT_EQ(m.rows[1].label, ClassLabel::NearDuplicate);
  EXPECT_EQ(m.rows[2].label, ClassLabel::Distinct);
  EXPECT_EQ(m.rows[2].line, 4u);
}

TEST(Manifest, Errors) {
  TempDir dir("manifest-errors");
  write_file(dir / "a.html", "<p>");
  auto expect_error = [&](const std::string& body, std::size_t row, const std::string& needle) {
    write_file(dir / "m.csv", "pair_id,file_a,file_b,label\n" + body);
    try {
      load_manifest(dir / "m.csv");
      ADD_FAILURE() << "no error for " << body;
    } catch (const ManifestError& e) {
      EXPECT_EQ(e.row(), row) << e.what();
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  expect_error("p1,a.html,a.html,near-dup\n", 2, "near-dup");
  expect_error("p1,a.html,a.html,clone\np1,a.html,a.html,clone\n", 3, "duplicate");
  expect_error("p1,a.html,missing.html,clone\n", 2, "missing.html");
  expect_error("p1,a.html,clone\n", 2, "fields");
  expect_error("p1,a.html,a.html,clone\n,a.html,a.html,clone\n", 3, "empty");
  write_file(dir / "bad.csv", "id,a,b,label\n");
  EXPECT_THROW(load_manifest(dir / "bad.csv"), ManifestError);
  EXPECT_THROW(load_manifest(dir / "nope.csv"), ManifestError);
}

TEST(Evaluate, EndToEndAndDeterministic) {
  TempDir dir("evaluate");
  const auto train_path = fixtures::synthetic_manifest(dir.path(), 20, 1, "train.csv");
  const auto test_path = fixtures::synthetic_manifest(dir.path(), 10, 2, "test.csv");
  const KernelParams params{};
  ExtractOptions xo;
  xo.jobs = 4;
  const PairManifest train_m = load_manifest(train_path);
  const auto outcomes = extract_manifest(train_m, params, xo);
  std::vector<LabeledPair> data;
  for (std::size_t i = 0; i < outcomes.size(); ++i) data.push_back({*outcomes[i].vector, train_m.rows[i].label});
  const TrainedModel model = train(data);

  EvalOptions eo;
  eo.extract.jobs = 3;
  eo.model_id = "m";
  const PairManifest test_m = load_manifest(test_path, "custom");
  const EvalReport r = evaluate(model, test_m, params, eo);
  EXPECT_EQ(r.scored + r.skipped, test_m.rows.size());
  EXPECT_GE(r.macro_f1, 0.95);
  eo.extract.jobs = 1;
  EXPECT_EQ(report_to_json(evaluate(model, test_m, params, eo)), report_to_json(r));
  const auto j = nlohmann::json::parse(report_to_json(r, true));
  EXPECT_TRUE(j.contains("timing"));
  EXPECT_FALSE(nlohmann::json::parse(report_to_json(r)).contains("timing"));
}

TEST(Evaluate, LenientSkipsAreCountedStrictFails) {
  TempDir dir("evaluate-skips");
  const auto path = fixtures::synthetic_manifest(dir.path(), 3, 5);
  write_file(dir / "empty.html", "");
  std::string manifest = fixtures::slurp(path);
  manifest += "bad,empty.html,pages/5_0_base.html,clone\n";
  write_file(path, manifest);
  const PairManifest m = load_manifest(path);

  TrainedModel model;
  model.feature_stddevs.fill(1.0);
  EvalOptions eo;
  eo.extract.features.lenient = true;
  const EvalReport r = evaluate(model, m, KernelParams{}, eo);
  EXPECT_EQ(r.skipped, 1u);
  EXPECT_EQ(r.scored, 9u);
  EXPECT_EQ(r.skipped_pairs, std::vector<std::string>{"bad"});

  eo.extract.features.lenient = false;
  try {
    evaluate(model, m, KernelParams{}, eo);
    FAIL() << "expected PairFailure";
  } catch (const PairFailure& e) {
    EXPECT_EQ(e.pair_id(), "bad");
    EXPECT_EQ(e.line(), 11u);
    EXPECT_EQ(e.kind(), FailureKind::Input);
  }
}

TEST(Evaluate, BudgetFailuresInLenientModeAreSkipped) {
  TempDir dir("evaluate-budget");
  const auto path = fixtures::synthetic_manifest(dir.path(), 2, 9);
  const PairManifest m = load_manifest(path);
  TrainedModel model;
  model.feature_stddevs.fill(1.0);
  EvalOptions eo;
  eo.extract.features.lenient = true;
  eo.extract.features.pair_budget = 10;
  const EvalReport r = evaluate(model, m, KernelParams{}, eo);
  EXPECT_EQ(r.skipped, m.rows.size());
  EXPECT_EQ(r.scored, 0u);
  eo.extract.features.lenient = false;
  try {
    evaluate(model, m, KernelParams{}, eo);
    FAIL();
  } catch (const PairFailure& e) {
    EXPECT_EQ(e.kind(), FailureKind::Budget);
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Parallel, ResultsIndependentOfJobs) {
  std::vector<std::size_t> out(1000);
  for (std::size_t jobs : {1u, 2u, 8u}) {
    parallel_for(out.size(), jobs, [&](std::size_t i) { out[i] = i * i; });
    for (std::size_t i = 0; i < out.size(); ++i) ASSERT_EQ(out[i], i * i);
  }
  try {
    parallel_for(100, 4, [](std::size_t i) {
      if (i == 17 || i == 60) throw std::runtime_error(std::to_string(i));
    });
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "17");
  }
}
