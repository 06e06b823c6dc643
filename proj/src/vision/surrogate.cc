#include "metaex/vision/surrogate.h"

#include <algorithm>

#include "metaex/features/layout_features.h"
#include "metaex/vision/region_features.h"

namespace metaex::vision {

namespace {

nn::Matrix FeatureMatrix(const corpus::LabeledDocument& doc,
                         const std::vector<TokenRegion>& regions) {
  const features::DocumentLayout layout = features::AnalyzeLayout(doc);
  nn::Matrix m(regions.size(), kNumRegionFeatures);
  for (std::size_t r = 0; r < regions.size(); ++r) {
    const RegionFeatures f = ComputeRegionFeatures(doc, layout, regions[r]);
    std::copy(f.begin(), f.end(), m.row(r).begin());
  }
  return m;
}

}  // namespace

nn::Example RegionExample(const corpus::LabeledDocument& doc,
                          const VisionConfig& cfg) {
  const std::vector<TokenRegion> regions =
      SegmentRegions(doc, cfg.segmentation);
  nn::Example ex;
  ex.inputs = FeatureMatrix(doc, regions);
  for (const TokenRegion& r : regions) {
    ex.gold.push_back(static_cast<int>(Index(MajorityLabel(doc, r))));
  }
  return ex;
}

nn::Mlp InitRegionClassifier(std::uint64_t seed) {
  return nn::InitMlp(kNumRegionFeatures, kRegionHiddenUnits, kNumLabels, seed);
}

PagePrediction PredictPage(const nn::Mlp& classifier,
                           const corpus::LabeledDocument& doc,
                           const VisionConfig& cfg) {
  PagePrediction page;
  page.doc_id = doc.doc_id;
  page.page_width_pt = doc.page_width_pt;
  page.page_height_pt = doc.page_height_pt;
  page.detector = std::string(kNativeDetector);
  if (doc.empty()) return page;
  const std::vector<TokenRegion> regions =
      SegmentRegions(doc, cfg.segmentation);
  const nn::Matrix probs = nn::Predict(classifier, FeatureMatrix(doc, regions));
  for (std::size_t r = 0; r < regions.size(); ++r) {
    Region region;
    region.rect = regions[r].rect;
    ClassScores scores{};
    std::copy(probs.row(r).begin(), probs.row(r).end(), scores.begin());
    region.scores = scores;
    region.provenance = Provenance::kNative;
    page.regions.push_back(region);
  }
  page.regions = Suppress(std::move(page.regions), cfg.iou_threshold, cfg.keep);
  return page;
}

nn::Matrix VisionDistributions(const nn::Mlp& classifier,
                               const corpus::LabeledDocument& doc,
                               const VisionConfig& cfg) {
  return WordProbabilityMap(PredictPage(classifier, doc, cfg), doc);
}

}  // namespace metaex::vision
