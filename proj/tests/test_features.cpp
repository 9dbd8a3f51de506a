#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "oracles.hpp"
#include "tkndd/features.hpp"
#include "tkndd/html_parser.hpp"

using namespace tkndd;

TEST(Features, LayoutIsStrategyMajor) {
  EXPECT_EQ(kFeatureCount, 9u);
  EXPECT_EQ(feature_index(ReprStrategy::AsIs, KernelKind::ST), 0u);
  EXPECT_EQ(feature_index(ReprStrategy::OnlyBody, KernelKind::PTK), 5u);
  EXPECT_EQ(feature_index(ReprStrategy::OnlyBodyNoScripts, KernelKind::SST), 7u);
  EXPECT_EQ(feature_name(0), "as_is.st");
  EXPECT_EQ(feature_name(8), "only_body_no_scripts.ptk");
}

TEST(Features, IdenticalPagesGiveAllOnes) {
  const DomTree t = parse_html("<div><p>a<p>b<script>x</script></div>", "a");
  const auto v = similarity_vector(t, t, KernelParams{});
  for (double x : v.values) EXPECT_NEAR(x, 1.0, 1e-12);
  EXPECT_TRUE(v.complete());
}

TEST(Features, DisjointBodiesGiveZeroBodyComponents) {
  const DomTree a = parse_bracket("html(head,body(x(y)))");
  const DomTree b = parse_bracket("html(head,body(u(v,w)))");
  const auto v = similarity_vector(a, b, KernelParams{});
  for (KernelKind k : kAllKernels) {
    EXPECT_GT(v.values[feature_index(ReprStrategy::AsIs, KernelKind::PTK)], 0.0);
    // body itself matches under PTK, so only the production-based kernels vanish
    if (k != KernelKind::PTK) {
      EXPECT_EQ(v.values[feature_index(ReprStrategy::OnlyBody, k)], 0.0);
      EXPECT_EQ(v.values[feature_index(ReprStrategy::OnlyBodyNoScripts, k)], 0.0);
    }
  }
}

TEST(Features, SpecDerivedExample) {
  const DomTree a = parse_bracket("html(head,body(a(b)))");
  const DomTree b = parse_bracket("html(head,body(a(c)))");
  const KernelParams unit{1.0, 1.0};
  const auto v = similarity_vector(a, b, unit);
  // body(a(b)) vs body(a(c)): K = D(body,body) + D(a,a) = 2 + 1 = 3, and each
  // self kernel is 3 + 2 + 1 = 6.
  const auto f1 = oracle::fragments(oracle::Kind::PTK, parse_bracket("body(a(b))"));
  const auto f2 = oracle::fragments(oracle::Kind::PTK, parse_bracket("body(a(c))"));
  const double want = static_cast<double>(oracle::common_fragments(f1, f2)) /
                      std::sqrt(static_cast<double>(oracle::common_fragments(f1, f1) *
                                                    oracle::common_fragments(f2, f2)));
  EXPECT_DOUBLE_EQ(want, 0.5);
  EXPECT_DOUBLE_EQ(v.values[feature_index(ReprStrategy::OnlyBody, KernelKind::PTK)], want);
}

TEST(Features, AsIsComponentsEqualNormalizedKernel) {
  std::mt19937_64 rng(41);
  const KernelParams p{0.4, 0.4};
  for (int i = 0; i < 50; ++i) {
    const DomTree a = parse_html(gen::random_page(rng, 30), "a");
    const DomTree b = parse_html(gen::random_page(rng, 30), "b");
    const auto v = similarity_vector(a, b, p);
    const auto w = similarity_vector(b, a, p);
    for (KernelKind k : kAllKernels)
      EXPECT_EQ(v.values[feature_index(ReprStrategy::AsIs, k)], normalized_kernel(k, p, a, b));
    EXPECT_EQ(v.values, w.values);
    EXPECT_EQ(v.values, similarity_vector(a, b, p).values);
    for (double x : v.values) {
      EXPECT_GE(x, 0.0);
      EXPECT_LE(x, 1.0 + 1e-12);
    }
  }
}

TEST(Features, BudgetFailuresAreTaggedOrRecorded) {
  const DomTree a = parse_bracket("html(head(title,script),body(div,div,div))");
  FeatureOptions strict;
  strict.pair_budget = 40;  // 8x8 = 64 for AsIs, 4x4 = 16 for the body views
  try {
    similarity_vector(a, a, KernelParams{}, strict);
    FAIL() << "expected NodeBudgetExceeded";
  } catch (const NodeBudgetExceeded& e) {
    EXPECT_EQ(e.component(), 0u);
  }
  FeatureOptions lenient = strict;
  lenient.lenient = true;
  const auto v = similarity_vector(a, a, KernelParams{}, lenient);
  EXPECT_FALSE(v.complete());
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    EXPECT_EQ(v.missing[i], i < 3);
    if (i < 3)
      EXPECT_TRUE(std::isnan(v.values[i]));
    else
      EXPECT_NEAR(v.values[i], 1.0, 1e-12);
  }
}

TEST(Features, CsvRoundTrip) {
  SimilarityVector v;
  v.pair_id = "p,1";
  for (std::size_t i = 0; i < kFeatureCount; ++i) v.values[i] = 1.0 / static_cast<double>(i + 3);
  SimilarityVector w = v;
  w.pair_id = "p2";
  w.missing[4] = true;
  w.values[4] = std::nan("");
  std::ostringstream out;
  write_feature_csv(out, {FeatureRow{v, ClassLabel::NearDuplicate}, FeatureRow{w, std::nullopt}});
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "pair_id,label,f0,f1,f2,f3,f4,f5,f6,f7,f8");
  std::istringstream in(text);
  const auto rows = read_feature_csv(in);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].vector.pair_id, "p,1");
  EXPECT_EQ(rows[0].label, ClassLabel::NearDuplicate);
  EXPECT_EQ(rows[0].vector.values, v.values);
  EXPECT_FALSE(rows[1].label.has_value());
  EXPECT_TRUE(rows[1].vector.missing[4]);
  EXPECT_FALSE(rows[1].vector.complete());
}

TEST(Features, CsvRejectsGarbage) {
  std::istringstream bad_header("a,b\n");
  EXPECT_THROW(read_feature_csv(bad_header), FormatError);
  std::istringstream bad_label("pair_id,label,f0,f1,f2,f3,f4,f5,f6,f7,f8\nx,dup,1,1,1,1,1,1,1,1,1\n");
  EXPECT_THROW(read_feature_csv(bad_label), FormatError);
  std::istringstream bad_number("pair_id,label,f0,f1,f2,f3,f4,f5,f6,f7,f8\nx,clone,1,1,1,z,1,1,1,1,1\n");
  EXPECT_THROW(read_feature_csv(bad_number), FormatError);
}
