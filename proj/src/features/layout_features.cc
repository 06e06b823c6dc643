#include "metaex/features/layout_features.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <regex>
#include <string>

namespace metaex::features {

namespace {

double Clamp(double v) {
  if (!std::isfinite(v)) return 0.0;
  return std::clamp(v, kFeatureMin, kFeatureMax);
}

bool IsContinuation(unsigned char c) { return (c & 0xC0) == 0x80; }

// ASCII capitals plus the German umlaut capitals.
std::size_t UppercaseCount(std::string_view s) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto c = static_cast<unsigned char>(s[i]);
    if (c >= 'A' && c <= 'Z') {
      ++n;
    } else if (c == 0xC3 && i + 1 < s.size()) {
      const auto d = static_cast<unsigned char>(s[i + 1]);
      if (d == 0x84 || d == 0x96 || d == 0x9C) ++n;
    }
  }
  return n;
}

double Count(std::string_view s, char ch) {
  return static_cast<double>(std::count(s.begin(), s.end(), ch));
}

bool IsAsciiPunct(char c) {
  return std::ispunct(static_cast<unsigned char>(c)) != 0;
}

}  // namespace

bool IsFlagFeature(int index) {
  return index == kBold || index == kItalic || index == kDateFormat ||
         index == kEmailFormat;
}

std::size_t CodePointCount(std::string_view text) {
  std::size_t n = 0;
  for (const char c : text) {
    if (!IsContinuation(static_cast<unsigned char>(c))) ++n;
  }
  return n;
}

bool LooksLikeDate(std::string_view text) {
  static const std::regex kDate(R"(\d{1,2}[./-]\d{1,2}[./-]\d{2,4})");
  if (std::regex_search(text.begin(), text.end(), kDate)) return true;
  std::size_t b = 0;
  std::size_t e = text.size();
  while (b < e && IsAsciiPunct(text[b])) ++b;
  while (e > b && IsAsciiPunct(text[e - 1])) --e;
  const std::string_view core = text.substr(b, e - b);
  if (core.size() != 4 ||
      !std::all_of(core.begin(), core.end(),
                   [](char c) { return c >= '0' && c <= '9'; })) {
    return false;
  }
  const int year = std::stoi(std::string(core));
  return year >= 1800 && year <= 2099;
}

bool LooksLikeEmail(std::string_view text) {
  static const std::regex kEmail(R"(\S+@\S+\.\S+)");
  return std::regex_search(text.begin(), text.end(), kEmail);
}

DocumentLayout AnalyzeLayout(const corpus::LabeledDocument& doc) {
  DocumentLayout layout;
  std::map<double, std::size_t> sizes;
  for (const corpus::Token& t : doc.tokens) ++sizes[t.font_size];
  std::size_t best = 0;
  // Ascending iteration with a strict comparison keeps the smallest size
  // among equally frequent ones.
  for (const auto& [size, count] : sizes) {
    if (count > best) {
      best = count;
      layout.modal_font_size = size;
    }
  }
  layout.total_lines = corpus::LineCount(doc);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  layout.line_top.assign(static_cast<std::size_t>(layout.total_lines), nan);
  layout.line_bottom.assign(static_cast<std::size_t>(layout.total_lines), nan);
  for (const corpus::Token& t : doc.tokens) {
    const auto l = static_cast<std::size_t>(t.line_index);
    double& top = layout.line_top[l];
    double& bottom = layout.line_bottom[l];
    top = std::isnan(top) ? t.y : std::min(top, t.y);
    bottom = std::isnan(bottom) ? t.bottom() : std::max(bottom, t.bottom());
  }
  return layout;
}

LayoutFeatures ExtractLayoutFeatures(const corpus::LabeledDocument& doc,
                                     const DocumentLayout& layout,
                                     std::size_t i) {
  const corpus::Token& t = doc.tokens[i];
  LayoutFeatures f{};

  if (i > 0 && doc.tokens[i - 1].line_index == t.line_index) {
    f[kHorizontalGap] = Clamp(t.x - doc.tokens[i - 1].right());
  }
  for (int prev = t.line_index - 1; prev >= 0; --prev) {
    const double bottom = layout.line_bottom[static_cast<std::size_t>(prev)];
    if (std::isnan(bottom)) continue;
    f[kVerticalGap] = Clamp(
        layout.line_top[static_cast<std::size_t>(t.line_index)] - bottom);
    break;
  }
  f[kRelativeFontSize] = layout.modal_font_size > 0.0
                             ? Clamp(t.font_size / layout.modal_font_size)
                             : 1.0;
  f[kRelativeLine] =
      layout.total_lines > 0
          ? Clamp(static_cast<double>(t.line_index) / layout.total_lines)
          : 0.0;
  f[kLeftX] = Clamp(t.x);
  f[kTopY] = Clamp(t.y);
  f[kBold] = t.bold ? 1.0 : 0.0;
  f[kItalic] = t.italic ? 1.0 : 0.0;

  const std::string_view text = t.text;
  const double length = static_cast<double>(CodePointCount(text));
  if (length > 0.0) {
    const double digits = static_cast<double>(std::count_if(
        text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; }));
    f[kDigitRatio] = digits / length;
    f[kUppercaseRatio] = static_cast<double>(UppercaseCount(text)) / length;
  }
  f[kAtCount] = Clamp(Count(text, '@'));
  f[kDotCount] = Clamp(Count(text, '.'));
  f[kSlashCount] = Clamp(Count(text, '/'));
  f[kDashCount] = Clamp(Count(text, '-'));
  f[kDateFormat] = LooksLikeDate(text) ? 1.0 : 0.0;
  f[kEmailFormat] = LooksLikeEmail(text) ? 1.0 : 0.0;
  return f;
}

LayoutFeatures ExtractLayoutFeatures(const corpus::LabeledDocument& doc,
                                     std::size_t i) {
  return ExtractLayoutFeatures(doc, AnalyzeLayout(doc), i);
}

}  // namespace metaex::features
