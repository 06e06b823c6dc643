#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "json.hpp"
#include "metaex/corpus/document.h"
#include "metaex/errors.h"
#include "metaex/eval/metrics.h"
#include "metaex/random.h"

namespace metaex::eval {
namespace {

using corpus::MetadataRecord;

constexpr Label T = Label::kTitle;
constexpr Label A = Label::kAuthor;
constexpr Label U = Label::kUnclassified;

// Independent token-level scorer: counts by direct comparison per class.
struct Oracle {
  std::array<double, kNumLabels> p{}, r{}, f{};
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
};

Oracle BruteForcePrf(const std::vector<std::vector<Label>>& pred,
                     const std::vector<std::vector<Label>>& gold) {
  Oracle o;
  double tp_all = 0, fp_all = 0, fn_all = 0, f_sum = 0;
  int f_count = 0;
  for (std::size_t c = 0; c < kNumLabels; ++c) {
    double tp = 0, fp = 0, fn = 0;
    for (std::size_t d = 0; d < gold.size(); ++d) {
      for (std::size_t i = 0; i < gold[d].size(); ++i) {
        const bool is_pred = Index(pred[d][i]) == c;
        const bool is_gold = Index(gold[d][i]) == c;
        tp += is_pred && is_gold;
        fp += is_pred && !is_gold;
        fn += !is_pred && is_gold;
      }
    }
    o.p[c] = tp + fp > 0 ? tp / (tp + fp) : 0.0;
    o.r[c] = tp + fn > 0 ? tp / (tp + fn) : 0.0;
    o.f[c] = o.p[c] + o.r[c] > 0 ? 2 * o.p[c] * o.r[c] / (o.p[c] + o.r[c]) : 0.0;
    if (c == Index(Label::kUnclassified)) continue;
    tp_all += tp;
    fp_all += fp;
    fn_all += fn;
    if (tp + fp + fn > 0) {
      f_sum += o.f[c];
      ++f_count;
    }
  }
  const double mp = tp_all + fp_all > 0 ? tp_all / (tp_all + fp_all) : 0.0;
  const double mr = tp_all + fn_all > 0 ? tp_all / (tp_all + fn_all) : 0.0;
  o.micro_f1 = mp + mr > 0 ? 2 * mp * mr / (mp + mr) : 0.0;
  o.macro_f1 = f_count > 0 ? f_sum / f_count : 0.0;
  return o;
}

std::string Words(const std::vector<int>& counts) {
  std::string s;
  for (std::size_t w = 0; w < counts.size(); ++w) {
    for (int k = 0; k < counts[w]; ++k) s += "w" + std::to_string(w) + " ";
  }
  return s;
}

TEST(F1Test, ReportedTableValue) {
  EXPECT_NEAR(F1(0.944, 0.902), 0.923, 0.0005);
  EXPECT_EQ(F1(0.0, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(F1(1.0, 0.5), 2.0 / 3.0);
}

TEST(TokenPrfTest, HandCountedExample) {
  const PrfReport r = TokenPrf({{T, A, A, U}}, {{T, T, A, U}});
  const ClassPrf& title = r.classes[Index(T)];
  const ClassPrf& author = r.classes[Index(A)];
  EXPECT_DOUBLE_EQ(title.precision, 1.0);
  EXPECT_DOUBLE_EQ(title.recall, 0.5);
  EXPECT_DOUBLE_EQ(author.precision, 0.5);
  EXPECT_DOUBLE_EQ(author.recall, 1.0);
  EXPECT_EQ(title.support(), 2u);
  EXPECT_EQ(r.classes[Index(U)].tp, 1u);
  EXPECT_TRUE(r.classes[Index(Label::kDoi)].vacuous());
  // Micro over the metadata classes: tp 2, fp 1, fn 1.
  EXPECT_DOUBLE_EQ(r.micro.precision, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.micro.recall, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.macro.f1, 2.0 / 3.0);
}

TEST(TokenPrfTest, PerfectPrediction) {
  const std::vector<std::vector<Label>> gold = {{T, T, A}, {U, Label::kDoi}};
  const PrfReport r = TokenPrf(gold, gold);
  for (const Label l : {T, A, U, Label::kDoi}) {
    EXPECT_EQ(r.classes[Index(l)].f1, 1.0);
  }
  EXPECT_EQ(r.micro.f1, 1.0);
  EXPECT_EQ(r.macro.f1, 1.0);
}

TEST(TokenPrfTest, SingleClassMicroEqualsClassF1) {
  const PrfReport r = TokenPrf({{T, U, T, T}}, {{T, T, U, T}});
  EXPECT_DOUBLE_EQ(r.micro.f1, r.classes[Index(T)].f1);
}

TEST(TokenPrfTest, MatchesBruteForceOnRandomSequences) {
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::vector<Label>> pred, gold;
    const std::size_t docs = 1 + rng.Below(4);
    const std::size_t classes = 2 + rng.Below(9);
    for (std::size_t d = 0; d < docs; ++d) {
      const std::size_t n = 1 + rng.Below(30);
      pred.emplace_back();
      gold.emplace_back();
      for (std::size_t i = 0; i < n; ++i) {
        pred.back().push_back(LabelFromIndex(rng.Below(classes)));
        gold.back().push_back(LabelFromIndex(rng.Below(classes)));
      }
    }
    const PrfReport r = TokenPrf(pred, gold);
    const Oracle o = BruteForcePrf(pred, gold);
    for (std::size_t c = 0; c < kNumLabels; ++c) {
      EXPECT_NEAR(r.classes[c].precision, o.p[c], 1e-12);
      EXPECT_NEAR(r.classes[c].recall, o.r[c], 1e-12);
      EXPECT_NEAR(r.classes[c].f1, o.f[c], 1e-12);
    }
    EXPECT_NEAR(r.micro.f1, o.micro_f1, 1e-12);
    EXPECT_NEAR(r.macro.f1, o.macro_f1, 1e-12);
  }
}

TEST(TokenPrfTest, DocumentOrderDoesNotMatter) {
  Rng rng(2);
  std::vector<std::vector<Label>> pred, gold;
  for (int d = 0; d < 6; ++d) {
    pred.emplace_back();
    gold.emplace_back();
    for (int i = 0; i < 10; ++i) {
      pred.back().push_back(LabelFromIndex(rng.Below(10)));
      gold.back().push_back(LabelFromIndex(rng.Below(10)));
    }
  }
  const std::string a = PrfReportJson(TokenPrf(pred, gold));
  std::reverse(pred.begin(), pred.end());
  std::reverse(gold.begin(), gold.end());
  EXPECT_EQ(PrfReportJson(TokenPrf(pred, gold)), a);
}

TEST(TokenPrfTest, LengthMismatchIsRejected) {
  EXPECT_THROW(TokenPrf({{T}}, {{T, T}}), ValidationError);
  EXPECT_THROW(TokenPrf({{T}}, {{T}, {T}}), ValidationError);
}

TEST(TokenPrfTest, RenderingsCarryBothAverages) {
  const PrfReport r = TokenPrf({{T, A}}, {{T, T}});
  const auto j = nlohmann::json::parse(PrfReportJson(r));
  EXPECT_TRUE(j.at("overall").contains("micro"));
  EXPECT_TRUE(j.at("overall").contains("macro"));
  const std::string text = PrfReportText(r);
  for (const auto name : kLabelNames) {
    EXPECT_NE(text.find(std::string(name)), std::string::npos);
  }
}

TEST(CosineTest, WorkedExamples) {
  EXPECT_DOUBLE_EQ(CosineSimilarity("Ein Titel", "Ein Titel"), 1.0);
  EXPECT_EQ(CosineSimilarity("ein titel", "anderer text"), 0.0);
  EXPECT_NEAR(CosineSimilarity("ein kleiner titel", "ein titel"),
              2.0 / std::sqrt(6.0), 1e-15);
  EXPECT_NEAR(CosineSimilarity("ein kleiner titel", "ein titel"), 0.8165,
              1e-4);
  EXPECT_EQ(CosineSimilarity("", ""), 1.0);
  EXPECT_EQ(CosineSimilarity("a", ""), 0.0);
  EXPECT_EQ(CosineSimilarity("", "a"), 0.0);
}

TEST(CosineTest, NormalizationIgnoresCaseAndPunctuation) {
  EXPECT_EQ(NormalizeTokens("Über die „Gesellschaft“, (Teil 2)."),
            (std::vector<std::string>{"über", "die", "gesellschaft", "teil",
                                      "2"}));
  EXPECT_DOUBLE_EQ(CosineSimilarity("DOI: 10.1000/xyz", "doi 101000xyz"), 1.0);
}

// Integer term-frequency vectors with |a|^2 = |b|^2 = 20 and a.b = 17 put
// the similarity exactly on 17/20 = 0.85, which must not match.
TEST(FieldMatchTest, ExactThresholdDoesNotMatch) {
  std::vector<int> found_a, found_b;
  const int dim = 5;
  std::vector<int> a(dim), b(dim);
  auto norm = [](const std::vector<int>& v) {
    int s = 0;
    for (const int x : v) s += x * x;
    return s;
  };
  // Enumerate entries 0..4 in both vectors until the first hit.
  for (int ia = 0; ia < 3125 && found_a.empty(); ++ia) {
    for (int k = 0, x = ia; k < dim; ++k, x /= 5) a[k] = x % 5;
    if (norm(a) != 20) continue;
    for (int ib = 0; ib < 3125; ++ib) {
      for (int k = 0, x = ib; k < dim; ++k, x /= 5) b[k] = x % 5;
      if (norm(b) != 20) continue;
      int dot = 0;
      for (int k = 0; k < dim; ++k) dot += a[k] * b[k];
      if (dot == 17) {
        found_a = a;
        found_b = b;
        break;
      }
    }
  }
  ASSERT_FALSE(found_a.empty());
  const std::string sa = Words(found_a);
  const std::string sb = Words(found_b);
  EXPECT_EQ(CosineSimilarity(sa, sb), 0.85);
  EXPECT_FALSE(FieldMatch(sa, sb));
  EXPECT_TRUE(FieldMatch(sa, sb, 0.849));
}

TEST(FieldMatchTest, EighteenOfTwentyTokensMatch) {
  std::vector<int> gold(20, 1);
  std::vector<int> extracted(20, 1);
  extracted[3] = 0;
  extracted[11] = 0;
  const double sim = CosineSimilarity(Words(extracted), Words(gold));
  EXPECT_NEAR(sim, 18.0 / std::sqrt(20.0 * 18.0), 1e-15);
  EXPECT_NEAR(sim, 0.9487, 1e-4);
  EXPECT_TRUE(FieldMatch(Words(extracted), Words(gold)));
  EXPECT_TRUE(FieldMatch("Ein Titel", "Ein Titel"));
}

TEST(FieldMatchTest, ThresholdMustLieInUnitInterval) {
  EXPECT_THROW(FieldMatch("a", "a", 0.0), ValidationError);
  EXPECT_THROW(FieldMatch("a", "a", 1.5), ValidationError);
  EXPECT_FALSE(FieldMatch("a", "a", 1.0));
}

TEST(CosineTest, SymmetricAndInvariantToDuplication) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> a(6), b(6);
    for (int& x : a) x = static_cast<int>(rng.Below(4));
    for (int& x : b) x = static_cast<int>(rng.Below(4));
    const std::string sa = Words(a);
    const std::string sb = Words(b);
    const double s = CosineSimilarity(sa, sb);
    EXPECT_EQ(s, CosineSimilarity(sb, sa));
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
    EXPECT_NEAR(CosineSimilarity(sa + sa, sb + sb), s, 1e-12);
  }
}

// Extending a matching extraction with further gold tokens only raises the
// similarity (sqrt(k/n) for k of n distinct tokens), so the match holds.
TEST(FieldMatchTest, AddingGoldTokensKeepsAMatch) {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 5 + rng.Below(30);
    std::vector<int> gold(n, 1);
    std::vector<int> extracted(n, 0);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    rng.Shuffle(order);
    std::size_t k = 0;
    while (!FieldMatch(Words(extracted), Words(gold))) extracted[order[k++]] = 1;
    double last = CosineSimilarity(Words(extracted), Words(gold));
    for (; k < n; ++k) {
      extracted[order[k]] = 1;
      const double now = CosineSimilarity(Words(extracted), Words(gold));
      EXPECT_GE(now, last);
      EXPECT_TRUE(FieldMatch(Words(extracted), Words(gold)));
      last = now;
    }
  }
}

MetadataRecord TwoAuthors() {
  MetadataRecord r;
  r.title = "Ein Titel";
  r.authors = {"Anna Müller", "Jan Roth"};
  r.date = "12.05.2021";
  r.doi = "10.1000/abc";
  return r;
}

TEST(ExtractionF1Test, OneOfTwoAuthors) {
  MetadataRecord extracted;
  extracted.authors = {"Jan Roth"};
  MetadataRecord gold;
  gold.authors = {"Anna Müller", "Jan Roth"};
  const MatchReport r = ExtractionF1({{"d", extracted}}, {{"d", gold}});
  const FieldCounts& a = r.classes[Index(Label::kAuthor)];
  EXPECT_EQ(a.matched, 1u);
  EXPECT_EQ(a.missed, 1u);
  EXPECT_EQ(a.spurious, 0u);
  EXPECT_DOUBLE_EQ(a.precision, 1.0);
  EXPECT_DOUBLE_EQ(a.recall, 0.5);
  EXPECT_DOUBLE_EQ(a.f1, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.overall_f1, 2.0 / 3.0);
}

TEST(ExtractionF1Test, PerfectAndEmptyExtractors) {
  const RecordSet gold = {{"a", TwoAuthors()}, {"b", TwoAuthors()}};
  const MatchReport perfect = ExtractionF1(gold, gold);
  EXPECT_EQ(perfect.overall_f1, 1.0);
  for (const Label l : {T, A, Label::kDate, Label::kDoi}) {
    EXPECT_EQ(perfect.classes[Index(l)].f1, 1.0);
  }
  const RecordSet nothing = {{"a", {}}, {"b", {}}};
  const MatchReport empty = ExtractionF1(nothing, gold);
  for (const Label l : {T, A, Label::kDate, Label::kDoi}) {
    EXPECT_EQ(empty.classes[Index(l)].recall, 0.0);
    EXPECT_EQ(empty.classes[Index(l)].f1, 0.0);
  }
  EXPECT_EQ(empty.overall_f1, 0.0);
}

TEST(ExtractionF1Test, DateAndDoiCanBeExcluded) {
  const RecordSet gold = {{"a", TwoAuthors()}};
  MetadataRecord wrong = TwoAuthors();
  wrong.date = "gestern";
  wrong.doi = "nichts";
  MatchOptions options;
  options.exclude_date_and_doi = true;
  const MatchReport r = ExtractionF1({{"a", wrong}}, gold, options);
  EXPECT_FALSE(r.classes[Index(Label::kDate)].evaluated);
  EXPECT_FALSE(r.classes[Index(Label::kDoi)].evaluated);
  EXPECT_EQ(r.overall_f1, 1.0);
  EXPECT_LT(ExtractionF1({{"a", wrong}}, gold).overall_f1, 1.0);
}

TEST(ExtractionF1Test, CoverageMismatchListsIds) {
  const RecordSet gold = {{"a", TwoAuthors()}, {"b", TwoAuthors()}};
  const RecordSet partial = {{"a", TwoAuthors()}, {"c", TwoAuthors()}};
  try {
    ExtractionF1(partial, gold);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("b"), std::string::npos);
    EXPECT_NE(msg.find("c"), std::string::npos);
  }
}

TEST(ExtractionF1Test, GreedyMatchingIsOneToOne) {
  EXPECT_EQ(GreedyMatchCount({"Anna Müller", "Anna Müller"}, {"Anna Müller"},
                             0.85),
            1u);
  EXPECT_EQ(GreedyMatchCount({"Jan Roth", "Anna Müller"},
                             {"Anna Müller", "Jan Roth"}, 0.85),
            2u);
  EXPECT_EQ(GreedyMatchCount({}, {"x"}, 0.85), 0u);
}

TEST(CompareTest, GoldRunAndIdenticalRuns) {
  const RecordSet gold = {{"a", TwoAuthors()}, {"b", TwoAuthors()}};
  MetadataRecord partial = TwoAuthors();
  partial.authors.pop_back();
  const RecordSet run = {{"a", partial}, {"b", TwoAuthors()}};
  const Comparison c =
      CompareExtractors({{"gold", gold}, {"x", run}, {"y", run}}, gold);
  ASSERT_EQ(c.reports.size(), 3u);
  EXPECT_EQ(c.reports[0].overall_f1, 1.0);
  EXPECT_EQ(MatchReportJson(c.reports[1], c.options),
            MatchReportJson(c.reports[2], c.options));
  const auto j = nlohmann::json::parse(ComparisonJson(c));
  EXPECT_FALSE(j.empty());
  const std::string text = ComparisonText(c);
  EXPECT_NE(text.find("gold"), std::string::npos);
  EXPECT_NE(text.find("1.000"), std::string::npos);
  EXPECT_THROW(CompareExtractors({{"x", {{"a", partial}}}}, gold),
               ValidationError);
}

}  // namespace
}  // namespace metaex::eval
