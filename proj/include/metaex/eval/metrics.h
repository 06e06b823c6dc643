#ifndef METAEX_EVAL_METRICS_H_
#define METAEX_EVAL_METRICS_H_

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "metaex/corpus/document.h"
#include "metaex/label.h"

namespace metaex::eval {

// 2PR / (P + R), or 0 when P + R = 0.
double F1(double precision, double recall);

struct ClassPrf {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support() const { return tp + fn; }
  // Neither gold nor predicted occurrences.
  bool vacuous() const { return tp + fp + fn == 0; }
};

// Fills precision, recall and F1 from the counts; zero denominators give 0.
void FinishCounts(ClassPrf& c);

struct Averages {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Per-class rows for all ten labels. Averages run over the nine metadata
// classes; macro skips vacuous classes.
struct PrfReport {
  std::array<ClassPrf, kNumLabels> classes;
  Averages micro;
  Averages macro;
};

// Throws ValidationError when the document counts or per-document lengths
// differ.
PrfReport TokenPrf(const std::vector<std::vector<Label>>& pred,
                   const std::vector<std::vector<Label>>& gold);

// Lowercased (ASCII and German umlauts), punctuation removed, split on
// whitespace.
std::vector<std::string> NormalizeTokens(std::string_view text);

// Cosine of term-frequency vectors. Both empty gives 1, one empty gives 0.
double CosineSimilarity(std::string_view a, std::string_view b);

inline constexpr double kDefaultMatchThreshold = 0.85;

// Strictly greater than the threshold. Throws ValidationError unless the
// threshold lies in (0, 1].
bool FieldMatch(std::string_view extracted, std::string_view gold,
                double threshold = kDefaultMatchThreshold);

struct FieldCounts {
  std::size_t matched = 0;
  std::size_t spurious = 0;
  std::size_t missed = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool evaluated = true;
};

struct MatchOptions {
  double threshold = kDefaultMatchThreshold;
  bool exclude_date_and_doi = false;
};

// Field-level results for the nine metadata classes (index = class).
// overall_f1 is the macro mean over evaluated, non-vacuous classes.
struct MatchReport {
  std::array<FieldCounts, kNumMetadataLabels> classes;
  double overall_f1 = 0.0;
};

using RecordSet = std::map<std::string, corpus::MetadataRecord>;

// One-to-one greedy best-first matching of two value lists: pairs sorted by
// descending similarity (ties by extracted then gold index), accepted while
// both sides are free and the pair matches. Returns the match count.
std::size_t GreedyMatchCount(const std::vector<std::string>& extracted,
                             const std::vector<std::string>& gold,
                             double threshold);

// Throws ValidationError listing the doc ids present on only one side.
MatchReport ExtractionF1(const RecordSet& extracted, const RecordSet& gold,
                         const MatchOptions& options = {});

struct Comparison {
  std::vector<std::string> runs;
  std::vector<MatchReport> reports;  // one per run
  MatchOptions options;
};

Comparison CompareExtractors(
    const std::vector<std::pair<std::string, RecordSet>>& runs,
    const RecordSet& gold, const MatchOptions& options = {});

// Machine-readable and aligned plain-text renderings.
std::string PrfReportJson(const PrfReport& report);
std::string PrfReportText(const PrfReport& report);
std::string MatchReportJson(const MatchReport& report,
                            const MatchOptions& options);
std::string MatchReportText(const MatchReport& report,
                            const MatchOptions& options);
std::string ComparisonJson(const Comparison& comparison);
std::string ComparisonText(const Comparison& comparison);

}  // namespace metaex::eval

#endif  // METAEX_EVAL_METRICS_H_
