#ifndef METAEX_VISION_SURROGATE_H_
#define METAEX_VISION_SURROGATE_H_

#include <string>

#include "metaex/corpus/document.h"
#include "metaex/nn/matrix.h"
#include "metaex/nn/mlp.h"
#include "metaex/nn/trainer.h"
#include "metaex/vision/prediction.h"
#include "metaex/vision/regions.h"

namespace metaex::vision {

inline constexpr std::size_t kRegionHiddenUnits = 32;
inline constexpr std::string_view kNativeDetector = "native-surrogate";

struct VisionConfig {
  SegmentationConfig segmentation;
  double iou_threshold = kDefaultIouThreshold;
  std::size_t keep = kDefaultKeep;
};

// Segmented regions of a labeled document as one training example: a row
// of RegionFeatures per region with its majority label.
nn::Example RegionExample(const corpus::LabeledDocument& doc,
                          const VisionConfig& cfg = {});

nn::Mlp InitRegionClassifier(std::uint64_t seed);

// Segments the page, scores every region with the classifier and applies
// suppression.
PagePrediction PredictPage(const nn::Mlp& classifier,
                           const corpus::LabeledDocument& doc,
                           const VisionConfig& cfg = {});

// PredictPage followed by WordProbabilityMap.
nn::Matrix VisionDistributions(const nn::Mlp& classifier,
                               const corpus::LabeledDocument& doc,
                               const VisionConfig& cfg = {});

}  // namespace metaex::vision

#endif  // METAEX_VISION_SURROGATE_H_
