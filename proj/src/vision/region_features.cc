#include "metaex/vision/region_features.h"

#include <cmath>
#include <set>

namespace metaex::vision {

RegionFeatures ComputeRegionFeatures(const corpus::LabeledDocument& doc,
                                     const features::DocumentLayout& layout,
                                     const TokenRegion& region) {
  RegionFeatures f{};
  const corpus::Rect& r = region.rect;
  f[0] = r.x + 0.5 * r.w;
  f[1] = r.y + 0.5 * r.h;
  f[2] = r.w;
  f[3] = r.h;
  f[4] = r.area();
  const double n = static_cast<double>(region.tokens.size());
  f[5] = std::log1p(n);
  if (region.tokens.empty()) return f;

  double font = 0.0;
  double bold = 0.0;
  double italic = 0.0;
  double digits = 0.0;
  double chars = 0.0;
  bool at = false;
  std::set<int> lines;
  for (const std::size_t i : region.tokens) {
    const corpus::Token& t = doc.tokens[i];
    font += layout.modal_font_size > 0.0 ? t.font_size / layout.modal_font_size
                                         : 1.0;
    bold += t.bold ? 1.0 : 0.0;
    italic += t.italic ? 1.0 : 0.0;
    for (const char c : t.text) {
      if (c >= '0' && c <= '9') digits += 1.0;
      if (c == '@') at = true;
    }
    chars += static_cast<double>(features::CodePointCount(t.text));
    lines.insert(t.line_index);
  }
  f[6] = font / n;
  f[7] = bold / n;
  f[8] = italic / n;
  f[9] = chars > 0.0 ? digits / chars : 0.0;
  f[10] = at ? 1.0 : 0.0;
  f[11] = layout.total_lines > 0 ? static_cast<double>(lines.size()) /
                                       layout.total_lines
                                 : 0.0;
  return f;
}

Label MajorityLabel(const corpus::LabeledDocument& doc,
                    const TokenRegion& region) {
  std::array<std::size_t, kNumLabels> counts{};
  for (const std::size_t i : region.tokens) ++counts[Index(doc.labels[i])];
  std::size_t best = 0;
  for (std::size_t c = 1; c < kNumLabels; ++c) {
    if (counts[c] > counts[best]) best = c;
  }
  return LabelFromIndex(best);
}

}  // namespace metaex::vision
