#ifndef METAEX_CORPUS_LAYOUT_TEMPLATE_H_
#define METAEX_CORPUS_LAYOUT_TEMPLATE_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "metaex/corpus/document.h"
#include "metaex/label.h"

namespace metaex::corpus {

// Axis-aligned page-relative rectangle.
struct Rect {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double right() const { return x + w; }
  double bottom() const { return y + h; }
  double area() const { return w * h; }

  friend bool operator==(const Rect&, const Rect&) = default;
};

double IntersectionArea(const Rect& a, const Rect& b);

enum class ListStyle { kInline, kLines };

struct TemplateRegion {
  // Metadata class filled into the region. Unclassified regions receive
  // seeded filler text.
  Label label = Label::kUnclassified;
  Rect rect;
  double font_size = 10.0;
  bool bold = false;
  bool italic = false;
  // Words placed before the field text and labeled unclassified, e.g.
  // "Zusammenfassung".
  std::optional<std::string> marker;
  bool marker_inline = false;
  // Unclassified token placed between entries of a list field.
  std::string separator = "und";
  ListStyle list_style = ListStyle::kInline;
  // Nominal filler length of an unclassified region. Each document draws
  // between half and one and a half times this many words, capped by what
  // fits the region.
  std::size_t filler_words = 40;
};

struct LayoutTemplate {
  std::string template_id;
  double page_width_pt = kA4WidthPt;
  double page_height_pt = kA4HeightPt;
  // Maximum per-document displacement of each region, page-relative.
  double jitter = 0.0;
  std::vector<TemplateRegion> regions;
  // Indices into regions; empty means declaration order.
  std::vector<int> fill_order;
};

// Checks rectangles, overlap (at most 1% of the smaller area), one region
// per metadata class and the fill order. Throws ValidationError.
void Validate(const LayoutTemplate& layout);

// JSON document mirroring LayoutTemplate; rect is [x, y, w, h].
LayoutTemplate ParseLayoutTemplate(const std::string& json_text,
                                   const std::string& source_name);
LayoutTemplate LoadLayoutTemplate(const std::filesystem::path& path);
std::string SerializeLayoutTemplate(const LayoutTemplate& layout);

// Every *.json file in the directory, sorted by file name.
std::vector<LayoutTemplate> LoadLayoutTemplates(
    const std::filesystem::path& dir);

// The stock templates shipped with the project (also in data/templates).
std::vector<LayoutTemplate> BuiltinTemplates();

}  // namespace metaex::corpus

#endif  // METAEX_CORPUS_LAYOUT_TEMPLATE_H_
