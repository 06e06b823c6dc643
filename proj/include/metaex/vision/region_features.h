#ifndef METAEX_VISION_REGION_FEATURES_H_
#define METAEX_VISION_REGION_FEATURES_H_

#include <array>

#include "metaex/corpus/document.h"
#include "metaex/features/layout_features.h"
#include "metaex/vision/regions.h"

namespace metaex::vision {

inline constexpr int kNumRegionFeatures = 12;

// center x, center y, width, height, area, ln(1 + token count), mean
// relative font size, bold fraction, italic fraction, digit fraction,
// '@' presence, lines in region / lines on page.
using RegionFeatures = std::array<double, kNumRegionFeatures>;

RegionFeatures ComputeRegionFeatures(const corpus::LabeledDocument& doc,
                                     const features::DocumentLayout& layout,
                                     const TokenRegion& region);

// Most frequent gold label among the region's tokens; ties go to the lowest
// class index.
Label MajorityLabel(const corpus::LabeledDocument& doc,
                    const TokenRegion& region);

}  // namespace metaex::vision

#endif  // METAEX_VISION_REGION_FEATURES_H_
