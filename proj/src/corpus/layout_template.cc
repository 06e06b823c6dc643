#include "metaex/corpus/layout_template.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "metaex/errors.h"

namespace metaex::corpus {

using nlohmann::json;

double IntersectionArea(const Rect& a, const Rect& b) {
  const double w = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const double h = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

void Validate(const LayoutTemplate& layout) {
  const std::string where = "template '" + layout.template_id + "'";
  if (layout.template_id.empty()) {
    throw ValidationError("template without template_id");
  }
  if (!(layout.page_width_pt > 0.0) || !(layout.page_height_pt > 0.0)) {
    throw ValidationError(where + ": non-positive page size");
  }
  if (!(layout.jitter >= 0.0) || layout.jitter > 0.05) {
    throw ValidationError(where + ": jitter must be in [0, 0.05]");
  }
  if (layout.regions.empty()) throw ValidationError(where + ": no regions");
  std::set<Label> seen;
  for (std::size_t i = 0; i < layout.regions.size(); ++i) {
    const TemplateRegion& r = layout.regions[i];
    const std::string rw = where + " region " + std::to_string(i);
    const Rect& q = r.rect;
    if (!(q.w > 0.0) || !(q.h > 0.0) || q.x < 0.0 || q.y < 0.0 ||
        q.right() > 1.0 || q.bottom() > 1.0) {
      throw ValidationError(rw + ": rectangle outside the unit page");
    }
    if (!(r.font_size > 0.0)) {
      throw ValidationError(rw + ": non-positive font size");
    }
    if (r.label != Label::kUnclassified && !seen.insert(r.label).second) {
      throw ValidationError(rw + ": second region for class " +
                            std::string(Name(r.label)));
    }
    for (std::size_t j = 0; j < i; ++j) {
      const Rect& o = layout.regions[j].rect;
      const double overlap = IntersectionArea(q, o);
      if (overlap > 0.01 * std::min(q.area(), o.area())) {
        throw ValidationError(rw + ": overlaps region " + std::to_string(j) +
                              " by more than 1% area");
      }
    }
  }
  if (!layout.fill_order.empty()) {
    std::vector<int> sorted = layout.fill_order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (sorted[i] != static_cast<int>(i) ||
          sorted.size() != layout.regions.size()) {
        throw ValidationError(where +
                              ": fill_order is not a permutation of regions");
      }
    }
  }
}

namespace {

TemplateRegion RegionFromJson(const json& j) {
  TemplateRegion r;
  const std::string label = j.at("label").get<std::string>();
  const auto parsed = ParseLabel(label);
  if (!parsed) {
    throw ValidationError("unknown class '" + label + "'; expected one of " +
                          LegalLabelList());
  }
  r.label = *parsed;
  const auto rect = j.at("rect").get<std::vector<double>>();
  if (rect.size() != 4) throw ValidationError("rect needs 4 numbers");
  r.rect = Rect{rect[0], rect[1], rect[2], rect[3]};
  r.font_size = j.at("font_size").get<double>();
  r.bold = j.value("bold", false);
  r.italic = j.value("italic", false);
  if (j.contains("marker") && !j.at("marker").is_null()) {
    r.marker = j.at("marker").get<std::string>();
  }
  r.marker_inline = j.value("marker_inline", false);
  r.separator = j.value("separator", std::string("und"));
  const std::string style = j.value("list_style", std::string("inline"));
  if (style == "inline") {
    r.list_style = ListStyle::kInline;
  } else if (style == "lines") {
    r.list_style = ListStyle::kLines;
  } else {
    throw ValidationError("list_style must be 'inline' or 'lines'");
  }
  r.filler_words = j.value("filler_words", std::size_t{40});
  if (r.separator.empty() ||
      r.separator.find_first_of(" \t\n") != std::string::npos) {
    throw ValidationError("separator must be a single non-empty word");
  }
  return r;
}

json RegionToJson(const TemplateRegion& r) {
  json j;
  j["label"] = std::string(Name(r.label));
  j["rect"] = {r.rect.x, r.rect.y, r.rect.w, r.rect.h};
  j["font_size"] = r.font_size;
  j["bold"] = r.bold;
  j["italic"] = r.italic;
  j["marker"] = r.marker ? json(*r.marker) : json(nullptr);
  j["marker_inline"] = r.marker_inline;
  j["separator"] = r.separator;
  j["list_style"] = r.list_style == ListStyle::kLines ? "lines" : "inline";
  j["filler_words"] = r.filler_words;
  return j;
}

}  // namespace

LayoutTemplate ParseLayoutTemplate(const std::string& json_text,
                                   const std::string& source_name) {
  LayoutTemplate layout;
  try {
    const json j = json::parse(json_text);
    layout.template_id = j.at("template_id").get<std::string>();
    layout.page_width_pt = j.value("page_width_pt", kA4WidthPt);
    layout.page_height_pt = j.value("page_height_pt", kA4HeightPt);
    layout.jitter = j.value("jitter", 0.0);
    for (const json& r : j.at("regions")) {
      layout.regions.push_back(RegionFromJson(r));
    }
    if (j.contains("fill_order")) {
      layout.fill_order = j.at("fill_order").get<std::vector<int>>();
    }
  } catch (const json::exception& e) {
    throw ValidationError(source_name + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(source_name + ": " + e.what());
  }
  Validate(layout);
  return layout;
}

LayoutTemplate LoadLayoutTemplate(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read template " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseLayoutTemplate(buffer.str(), path.string());
}

std::string SerializeLayoutTemplate(const LayoutTemplate& layout) {
  json j;
  j["template_id"] = layout.template_id;
  j["page_width_pt"] = layout.page_width_pt;
  j["page_height_pt"] = layout.page_height_pt;
  j["jitter"] = layout.jitter;
  j["regions"] = json::array();
  for (const TemplateRegion& r : layout.regions) {
    j["regions"].push_back(RegionToJson(r));
  }
  j["fill_order"] = layout.fill_order;
  return j.dump(2) + "\n";
}

std::vector<LayoutTemplate> LoadLayoutTemplates(
    const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw ValidationError("template directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<LayoutTemplate> out;
  for (const auto& f : files) out.push_back(LoadLayoutTemplate(f));
  if (out.empty()) {
    throw ValidationError("no *.json templates in " + dir.string());
  }
  return out;
}

namespace {

struct RegionSpec {
  Label label;
  Rect rect;
  double font_size;
  bool bold = false;
  bool italic = false;
  const char* marker = nullptr;
  bool marker_inline = false;
  const char* separator = "und";
  ListStyle style = ListStyle::kInline;
};

LayoutTemplate Make(std::string id, double jitter,
                    std::initializer_list<RegionSpec> specs) {
  LayoutTemplate t;
  t.template_id = std::move(id);
  t.jitter = jitter;
  for (const RegionSpec& s : specs) {
    TemplateRegion r;
    r.label = s.label;
    r.rect = s.rect;
    r.font_size = s.font_size;
    r.bold = s.bold;
    r.italic = s.italic;
    if (s.marker != nullptr) r.marker = s.marker;
    r.marker_inline = s.marker_inline;
    r.separator = s.separator;
    r.list_style = s.style;
    t.regions.push_back(std::move(r));
  }
  return t;
}

using L = Label;

}  // namespace

std::vector<LayoutTemplate> BuiltinTemplates() {
  std::vector<LayoutTemplate> out;

  // Classic single-column header: journal line, title, authors, affiliation
  // block, indented abstract, body text.
  out.push_back(Make(
      "single-column", 0.003,
      {
          {L::kJournal, {0.10, 0.040, 0.55, 0.016}, 8, false, true},
          {L::kDoi, {0.66, 0.040, 0.24, 0.016}, 8, false, false, "DOI:", true},
          {L::kTitle, {0.10, 0.090, 0.80, 0.070}, 16, true},
          {L::kAuthor, {0.10, 0.190, 0.80, 0.030}, 11, false, false, nullptr,
           false, "und"},
          {L::kAffiliation, {0.10, 0.245, 0.80, 0.045}, 9, false, true,
           nullptr, false, ";", ListStyle::kLines},
          {L::kAddress, {0.10, 0.315, 0.80, 0.030}, 9, false, false, nullptr,
           false, ";"},
          {L::kEmail, {0.10, 0.370, 0.80, 0.016}, 9, false, false, nullptr,
           false, ","},
          {L::kDate, {0.10, 0.410, 0.80, 0.016}, 9, false, false,
           "Eingereicht am", true},
          {L::kAbstract, {0.15, 0.455, 0.70, 0.230}, 9, false, false,
           "Zusammenfassung"},
          {L::kUnclassified, {0.10, 0.715, 0.80, 0.230}, 10, false, false,
           "1 Einleitung"},
      }));

  // Two columns below a full-width header; contact and bibliographic data in
  // the page footer.
  out.push_back(Make(
      "two-column", 0.003,
      {
          {L::kTitle, {0.08, 0.070, 0.84, 0.070}, 15, true},
          {L::kAuthor, {0.08, 0.170, 0.84, 0.030}, 11, false, false, nullptr,
           false, ","},
          {L::kAffiliation, {0.08, 0.225, 0.84, 0.030}, 9, false, true,
           nullptr, false, ";"},
          {L::kAddress, {0.08, 0.280, 0.84, 0.016}, 9, false, false, nullptr,
           false, ";"},
          {L::kAbstract, {0.08, 0.330, 0.40, 0.400}, 9, false, false,
           "Zusammenfassung"},
          {L::kUnclassified, {0.52, 0.330, 0.40, 0.520}, 9, false, false,
           "1 Einleitung"},
          {L::kEmail, {0.08, 0.760, 0.40, 0.040}, 7, false, false,
           "Kontakt:", true, ","},
          {L::kJournal, {0.08, 0.900, 0.55, 0.016}, 7, false, true},
          {L::kDate, {0.70, 0.900, 0.22, 0.016}, 7},
          {L::kDoi, {0.08, 0.935, 0.84, 0.016}, 7, false, false, "DOI", true},
      }));

  // Abstract set off in an indented box directly below the title; author
  // information follows the abstract.
  out.push_back(Make(
      "boxed-abstract", 0.003,
      {
          {L::kJournal, {0.55, 0.035, 0.37, 0.030}, 8, true, false},
          {L::kDate, {0.08, 0.035, 0.30, 0.016}, 8},
          {L::kTitle, {0.08, 0.100, 0.84, 0.080}, 16, true},
          {L::kAbstract, {0.14, 0.215, 0.72, 0.250}, 9, false, true,
           "Zusammenfassung:", true},
          {L::kAuthor, {0.08, 0.500, 0.84, 0.030}, 10, true, false, nullptr,
           false, "und"},
          {L::kAffiliation, {0.08, 0.555, 0.84, 0.030}, 9, false, false,
           nullptr, false, ";"},
          {L::kEmail, {0.08, 0.610, 0.84, 0.016}, 9, false, true, nullptr,
           false, ","},
          {L::kAddress, {0.08, 0.650, 0.84, 0.016}, 9, false, false, nullptr,
           false, ";"},
          {L::kUnclassified, {0.08, 0.700, 0.84, 0.220}, 10, false, false,
           "Einleitung"},
          {L::kDoi, {0.08, 0.945, 0.84, 0.016}, 7, false, false,
           "https://doi.org/", true},
      }));

  // German/English marker words on every labelled block.
  out.push_back(Make(
      "bilingual-markers", 0.003,
      {
          {L::kTitle, {0.10, 0.060, 0.80, 0.070}, 15, true},
          {L::kAuthor, {0.10, 0.160, 0.80, 0.030}, 11, false, true, nullptr,
           false, ","},
          {L::kAffiliation, {0.10, 0.215, 0.80, 0.045}, 9, false, false,
           nullptr, false, ";", ListStyle::kLines},
          {L::kEmail, {0.10, 0.285, 0.80, 0.016}, 9, false, false,
           "E-Mail / Email:", true, ","},
          {L::kAbstract, {0.10, 0.330, 0.80, 0.250}, 9, false, false,
           "Zusammenfassung / Abstract"},
          {L::kUnclassified, {0.10, 0.610, 0.80, 0.030}, 9, false, true,
           "Schlüsselwörter / Keywords:", true},
          {L::kDate, {0.10, 0.670, 0.38, 0.016}, 9, false, false,
           "Datum / Date:", true},
          {L::kDoi, {0.52, 0.670, 0.38, 0.016}, 9, false, false, "DOI:",
           true},
          {L::kJournal, {0.10, 0.710, 0.80, 0.016}, 9, false, true,
           "Zeitschrift / Journal:", true},
          {L::kUnclassified, {0.10, 0.755, 0.80, 0.190}, 10},
      }));

  // Title block only; journal, date, DOI, address and e-mail live in the
  // footer in small print.
  out.push_back(Make(
      "footer-journal", 0.003,
      {
          {L::kTitle, {0.12, 0.080, 0.76, 0.070}, 14, true},
          {L::kAuthor, {0.12, 0.175, 0.76, 0.030}, 10, false, false, nullptr,
           false, "und"},
          {L::kAffiliation, {0.12, 0.230, 0.76, 0.030}, 8, false, true,
           nullptr, false, ";"},
          {L::kAbstract, {0.12, 0.290, 0.76, 0.250}, 9, false, false,
           "Zusammenfassung"},
          {L::kUnclassified, {0.12, 0.570, 0.76, 0.220}, 10, false, false,
           "1 Problemstellung"},
          {L::kEmail, {0.12, 0.820, 0.76, 0.016}, 7, false, false,
           "Korrespondenz:", true, ","},
          {L::kAddress, {0.12, 0.850, 0.76, 0.016}, 7, false, false, nullptr,
           false, ";"},
          {L::kJournal, {0.12, 0.900, 0.50, 0.016}, 7, false, true},
          {L::kDate, {0.64, 0.900, 0.24, 0.016}, 7},
          {L::kDoi, {0.12, 0.930, 0.76, 0.016}, 7, false, false, "DOI:",
           true},
      }));

  // Author metadata in a narrow left sidebar next to the main column.
  out.push_back(Make(
      "sidebar", 0.003,
      {
          {L::kJournal, {0.08, 0.040, 0.84, 0.016}, 8, false, true},
          {L::kTitle, {0.30, 0.090, 0.62, 0.090}, 16, true},
          {L::kAuthor, {0.06, 0.090, 0.20, 0.070}, 9, true, false, nullptr,
           false, "und", ListStyle::kLines},
          {L::kAffiliation, {0.06, 0.190, 0.20, 0.100}, 8, false, false,
           nullptr, false, ";", ListStyle::kLines},
          {L::kAddress, {0.06, 0.320, 0.20, 0.060}, 8, false, false, nullptr,
           false, ";", ListStyle::kLines},
          {L::kEmail, {0.06, 0.410, 0.20, 0.050}, 7, false, false, nullptr,
           false, ",", ListStyle::kLines},
          {L::kDate, {0.06, 0.490, 0.20, 0.016}, 8, false, false,
           "Online:", true},
          {L::kDoi, {0.06, 0.530, 0.20, 0.030}, 7},
          {L::kAbstract, {0.30, 0.215, 0.62, 0.300}, 9, false, false,
           "Zusammenfassung"},
          {L::kUnclassified, {0.30, 0.545, 0.62, 0.400}, 10},
      }));

  for (const LayoutTemplate& t : out) Validate(t);
  return out;
}

}  // namespace metaex::corpus
