#ifndef METAEX_FEATURES_LAYOUT_FEATURES_H_
#define METAEX_FEATURES_LAYOUT_FEATURES_H_

#include <array>
#include <string_view>
#include <vector>

#include "metaex/corpus/document.h"

namespace metaex::features {

inline constexpr int kNumLayoutFeatures = 16;

// Positions in the layout feature vector.
enum LayoutFeature : int {
  kHorizontalGap = 0,  // gap to previous token on the line / page width
  kVerticalGap,        // gap to previous line / page height
  kRelativeFontSize,   // font size / modal document font size
  kRelativeLine,       // line index / total lines
  kLeftX,
  kTopY,
  kBold,
  kItalic,
  kDigitRatio,
  kUppercaseRatio,
  kAtCount,
  kDotCount,
  kSlashCount,
  kDashCount,
  kDateFormat,
  kEmailFormat,
};

// Continuous entries are clamped to this range.
inline constexpr double kFeatureMin = -1.0;
inline constexpr double kFeatureMax = 2.0;

using LayoutFeatures = std::array<double, kNumLayoutFeatures>;

// Whether the feature is a {0,1} flag.
bool IsFlagFeature(int index);

// `\d{1,2}[./-]\d{1,2}[./-]\d{2,4}` anywhere in the text, or the text is a
// year 1800-2099 once surrounding punctuation is stripped.
bool LooksLikeDate(std::string_view text);

// `\S+@\S+\.\S+` anywhere in the text.
bool LooksLikeEmail(std::string_view text);

// Code points in a UTF-8 string.
std::size_t CodePointCount(std::string_view text);

// Per-document statistics shared by every token's features.
struct DocumentLayout {
  double modal_font_size = 0.0;
  int total_lines = 0;
  // Indexed by line_index; lines without tokens keep NaN.
  std::vector<double> line_top;
  std::vector<double> line_bottom;
};

// The modal font size breaks ties towards the smaller size.
DocumentLayout AnalyzeLayout(const corpus::LabeledDocument& doc);

LayoutFeatures ExtractLayoutFeatures(const corpus::LabeledDocument& doc,
                                     const DocumentLayout& layout,
                                     std::size_t i);

// Convenience overload; recomputes the document statistics.
LayoutFeatures ExtractLayoutFeatures(const corpus::LabeledDocument& doc,
                                     std::size_t i);

}  // namespace metaex::features

#endif  // METAEX_FEATURES_LAYOUT_FEATURES_H_
