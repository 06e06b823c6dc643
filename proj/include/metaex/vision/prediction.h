#ifndef METAEX_VISION_PREDICTION_H_
#define METAEX_VISION_PREDICTION_H_

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "metaex/corpus/document.h"
#include "metaex/corpus/layout_template.h"
#include "metaex/label.h"
#include "metaex/nn/matrix.h"

namespace metaex::vision {

using ClassScores = std::array<double, kNumLabels>;

enum class Provenance { kNative, kImported };

// A scored box. Exactly one of `scores` and `top_class` is set.
struct Region {
  corpus::Rect rect;
  std::optional<ClassScores> scores;
  std::optional<Label> top_class;
  double confidence = 0.0;
  Provenance provenance = Provenance::kNative;

  friend bool operator==(const Region&, const Region&) = default;
};

struct PagePrediction {
  std::string doc_id;
  double page_width_pt = corpus::kA4WidthPt;
  double page_height_pt = corpus::kA4HeightPt;
  std::vector<Region> regions;
  std::string detector;

  friend bool operator==(const PagePrediction&,
                         const PagePrediction&) = default;
};

inline constexpr double kDefaultIouThreshold = 0.5;
inline constexpr std::size_t kDefaultKeep = 100;

// Scores normalized to sum 1 (uniform when they sum to 0), or the
// confidence on the top class with the rest spread over the other nine.
ClassScores RegionDistribution(const Region& region);

// The score used to rank regions for suppression.
double RankingScore(const Region& region);

double Iou(const corpus::Rect& a, const corpus::Rect& b);

// Greedy non-maximum suppression: highest ranking score first (ties keep
// the earlier region), drop regions whose IoU with a kept one exceeds the
// threshold, stop after `keep` regions.
std::vector<Region> Suppress(std::vector<Region> regions,
                             double iou_threshold = kDefaultIouThreshold,
                             std::size_t keep = kDefaultKeep);

// T x 10 per-token distributions: the overlap-area-weighted mean of the
// distributions of every region touching the token, or one-hot unclassified
// for tokens touched by none. Throws ValidationError on a doc_id mismatch.
nn::Matrix WordProbabilityMap(const PagePrediction& pred,
                              const corpus::LabeledDocument& doc);

// Interchange format: a JSON array of page objects
//   {"doc_id", "page_width_pt", "page_height_pt", "detector"?, "units"?,
//    "boxes": [{"x","y","w","h", "scores": [10 floats]} |
//              {"x","y","w","h", "class": name, "confidence": c}]}
// Coordinates are page-relative unless "units" is "pt". Imported regions
// are tagged Provenance::kImported.
std::vector<PagePrediction> ParsePagePredictions(const std::string& json_text,
                                                 const std::string& source);
std::vector<PagePrediction> ImportPagePredictions(
    const std::filesystem::path& path);
std::string SerializePagePredictions(const std::vector<PagePrediction>& pages);
void ExportPagePredictions(const std::vector<PagePrediction>& pages,
                           const std::filesystem::path& path);

}  // namespace metaex::vision

#endif  // METAEX_VISION_PREDICTION_H_
