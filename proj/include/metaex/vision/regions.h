#ifndef METAEX_VISION_REGIONS_H_
#define METAEX_VISION_REGIONS_H_

#include <vector>

#include "metaex/corpus/document.h"
#include "metaex/corpus/layout_template.h"

namespace metaex::vision {

struct SegmentationConfig {
  // Lines join a block while the top-to-top distance to the block's last
  // line is below this multiple of the document's median line pitch.
  double line_gap_multiplier = 1.8;
  // A horizontal gap wider than this many space widths splits a line.
  double column_gap_spaces = 2.5;
};

void Validate(const SegmentationConfig& cfg);

// A block of tokens and its bounding box.
struct TokenRegion {
  std::vector<std::size_t> tokens;  // ascending
  corpus::Rect rect;
};

// Median top-to-top distance between each line segment and the nearest
// horizontally overlapping segment below it; 0 with fewer than two lines.
double MedianLinePitch(const corpus::LabeledDocument& doc,
                       const SegmentationConfig& cfg = {});

// Whitespace segmentation. Every token lands in exactly one region; regions
// come out ordered by their first line, then by left edge.
std::vector<TokenRegion> SegmentRegions(const corpus::LabeledDocument& doc,
                                        const SegmentationConfig& cfg = {});

}  // namespace metaex::vision

#endif  // METAEX_VISION_REGIONS_H_
