#include "metaex/corpus/generator.h"

#include <algorithm>
#include <array>
#include <sstream>
#include <string_view>

#include "metaex/errors.h"
#include "metaex/random.h"

namespace metaex::corpus {

namespace {

constexpr std::array<std::string_view, 96> kFillerWords = {
    "die",        "der",          "und",         "in",          "den",
    "von",        "zu",           "das",         "mit",         "sich",
    "des",        "auf",          "für",         "ist",         "im",
    "dem",        "nicht",        "ein",         "eine",        "als",
    "auch",       "es",           "an",          "werden",      "aus",
    "er",         "hat",          "dass",        "sie",         "nach",
    "wird",       "bei",          "einer",       "um",          "am",
    "sind",       "noch",         "wie",         "einem",       "über",
    "einen",      "so",           "zum",         "war",         "haben",
    "nur",        "oder",         "aber",        "vor",         "zur",
    "bis",        "mehr",         "durch",       "man",         "sein",
    "wurde",      "Gesellschaft", "Entwicklung", "Bedeutung",   "Jahren",
    "Rahmen",     "Prozess",      "Gruppe",      "Menschen",    "Beispiel",
    "Formen",     "Teil",         "Ebene",       "Verhältnis",  "Bereich",
    "Rolle",      "Fall",         "Zusammenhang", "Begriff",    "Ansatz",
    "Kapitel",    "Abschnitt",    "Diskussion",  "Literatur",   "Theorie",
    "Grundlagen", "Praxis",       "Beobachtung", "Wandel",      "Struktur",
    "zunächst",   "jedoch",       "insbesondere", "bereits",    "schließlich",
    "allerdings", "zudem",        "deutlich",    "wesentlich",  "häufig",
    "zentral"};

struct Word {
  std::string text;
  Label label;
  bool bold;
  bool italic;
  bool newline_before;
  // For list fields: index of the entry the word belongs to, -1 otherwise.
  int entry;
};

std::vector<std::string> SplitWords(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

// Places words left to right, wrapping at the region's right edge. Returns
// the number of words placed; placement stops at the first word that does
// not fit.
std::size_t Typeset(const std::vector<Word>& words, const Rect& rect,
                    double font_size, const LayoutTemplate& layout,
                    std::vector<std::pair<Token, Label>>& out) {
  const double char_w = kCharWidthEm * font_size / layout.page_width_pt;
  const double glyph_h = font_size / layout.page_height_pt;
  const double advance = kLineHeightEm * font_size / layout.page_height_pt;
  double cx = rect.x;
  double cy = rect.y;
  bool line_empty = true;
  std::size_t placed = 0;
  for (const Word& word : words) {
    const double w = static_cast<double>(Utf8Length(word.text)) * char_w;
    if (word.newline_before && !line_empty) {
      cx = rect.x;
      cy += advance;
      line_empty = true;
    }
    if (!line_empty && cx + w > rect.right()) {
      cx = rect.x;
      cy += advance;
      line_empty = true;
    }
    if (w > rect.w || cy + glyph_h > rect.bottom()) break;
    Token t;
    t.text = word.text;
    t.x = cx;
    t.y = cy;
    t.width = w;
    t.height = glyph_h;
    t.font_size = font_size;
    t.bold = word.bold;
    t.italic = word.italic;
    out.emplace_back(std::move(t), word.label);
    cx += w + char_w;
    line_empty = false;
    ++placed;
  }
  return placed;
}

}  // namespace

std::size_t Utf8Length(const std::string& s) {
  std::size_t n = 0;
  for (const char c : s) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::vector<std::string> FillerWords(std::uint64_t seed, std::size_t count) {
  Rng rng(seed);
  std::vector<std::string> out;
  out.reserve(count);
  std::size_t in_sentence = 0;
  std::size_t sentence_len = 5 + rng.Below(10);
  for (std::size_t i = 0; i < count; ++i) {
    std::string w(kFillerWords[rng.Below(kFillerWords.size())]);
    if (in_sentence == 0 && w[0] >= 'a' && w[0] <= 'z') {
      w[0] = static_cast<char>(w[0] - 'a' + 'A');
    }
    if (++in_sentence == sentence_len) {
      w += '.';
      in_sentence = 0;
      sentence_len = 5 + rng.Below(10);
    } else if (rng.Bernoulli(0.05)) {
      w += ',';
    }
    out.push_back(std::move(w));
  }
  return out;
}

LabeledDocument GenerateDocument(const MetadataRecord& record,
                                 const LayoutTemplate& layout,
                                 std::uint64_t seed,
                                 GenerationReport* report) {
  Validate(layout);
  if (record.empty()) {
    throw ValidationError("cannot generate a document from an empty record");
  }
  GenerationReport local;
  GenerationReport& rep = report != nullptr ? *report : local;
  rep = GenerationReport{};

  // Displacements are drawn in declaration order so they do not depend on
  // the fill order.
  Rng jitter_rng(DeriveSeed(seed, 0));
  std::vector<Rect> rects;
  for (const TemplateRegion& region : layout.regions) {
    Rect r = region.rect;
    const double dx = jitter_rng.Uniform(-layout.jitter, layout.jitter);
    const double dy = jitter_rng.Uniform(-layout.jitter, layout.jitter);
    r.x = std::clamp(r.x + dx, 0.0, 1.0 - r.w);
    r.y = std::clamp(r.y + dy, 0.0, 1.0 - r.h);
    rects.push_back(r);
  }

  std::vector<int> order = layout.fill_order;
  if (order.empty()) {
    for (std::size_t i = 0; i < layout.regions.size(); ++i) {
      order.push_back(static_cast<int>(i));
    }
  }

  std::vector<std::pair<Token, Label>> placed;
  for (const int idx : order) {
    const auto ri = static_cast<std::size_t>(idx);
    const TemplateRegion& region = layout.regions[ri];
    const Rect& rect = rects[ri];
    std::vector<Word> words;
    std::vector<std::vector<std::string>> entries;

    if (region.label == Label::kUnclassified) {
      const double chars_per_line =
          rect.w * layout.page_width_pt / (kCharWidthEm * region.font_size);
      const double lines = rect.h * layout.page_height_pt /
                           (kLineHeightEm * region.font_size);
      const auto capacity =
          static_cast<std::size_t>(chars_per_line * lines / 4.0) + 8;
      Rng length_rng(DeriveSeed(seed, 2000 + ri));
      const std::size_t wanted = region.filler_words / 2 +
                                 length_rng.Below(region.filler_words + 1);
      for (std::string& w : FillerWords(DeriveSeed(seed, 1000 + ri),
                                        std::min(capacity, wanted))) {
        words.push_back({std::move(w), Label::kUnclassified, region.bold,
                         region.italic, false, -1});
      }
    } else {
      for (const std::string& value : FieldValues(record, region.label)) {
        entries.push_back(SplitWords(value));
      }
      if (entries.empty()) continue;
      for (std::size_t e = 0; e < entries.size(); ++e) {
        if (e > 0) {
          words.push_back({region.separator, Label::kUnclassified, region.bold,
                           region.italic, false, -1});
        }
        for (std::size_t k = 0; k < entries[e].size(); ++k) {
          const bool newline = e > 0 && k == 0 &&
                               region.list_style == ListStyle::kLines;
          words.push_back({entries[e][k], region.label, region.bold,
                           region.italic, newline, static_cast<int>(e)});
        }
      }
    }

    if (region.marker) {
      std::vector<Word> marker;
      for (std::string& w : SplitWords(*region.marker)) {
        marker.push_back({std::move(w), Label::kUnclassified, true, false,
                          false, -1});
      }
      if (!words.empty() && !region.marker_inline) {
        words.front().newline_before = true;
      }
      words.insert(words.begin(), marker.begin(), marker.end());
    }

    const std::size_t count =
        Typeset(words, rect, region.font_size, layout, placed);
    if (region.label == Label::kUnclassified) continue;

    // Rebuild what landed on the page, entry by entry.
    std::vector<std::string> landed(entries.size());
    std::size_t w = 0;
    for (std::size_t i = 0; i < count; ++i) {
      const Word& word = words[i];
      if (word.entry < 0) continue;
      std::string& entry = landed[static_cast<std::size_t>(word.entry)];
      if (!entry.empty()) entry += ' ';
      entry += word.text;
      ++w;
    }
    for (const std::string& entry : landed) {
      if (!entry.empty()) AppendFieldValue(rep.placed, region.label, entry);
    }
    if (count < words.size()) {
      rep.truncated.push_back(region.label);
      std::ostringstream msg;
      msg << "template '" << layout.template_id << "': field '"
          << Name(region.label) << "' truncated after " << w << " words";
      rep.warnings.push_back(msg.str());
    }
  }

  // Group tokens into text lines by their top edge, then emit them in
  // reading order.
  std::vector<std::size_t> by_y(placed.size());
  for (std::size_t i = 0; i < by_y.size(); ++i) by_y[i] = i;
  std::stable_sort(by_y.begin(), by_y.end(), [&](std::size_t a, std::size_t b) {
    return placed[a].first.y < placed[b].first.y;
  });
  int line = -1;
  double line_y = -1.0;
  for (const std::size_t i : by_y) {
    Token& t = placed[i].first;
    if (line < 0 || t.y - line_y > 1e-9) {
      ++line;
      line_y = t.y;
    }
    t.line_index = line;
  }
  std::stable_sort(placed.begin(), placed.end(),
                   [](const auto& a, const auto& b) {
                     return ReadingOrderLess(a.first, b.first);
                   });

  LabeledDocument doc;
  doc.doc_id = layout.template_id + "-" + std::to_string(seed);
  doc.page_width_pt = layout.page_width_pt;
  doc.page_height_pt = layout.page_height_pt;
  doc.template_id = layout.template_id;
  doc.tokens.reserve(placed.size());
  doc.labels.reserve(placed.size());
  for (auto& [token, label] : placed) {
    doc.tokens.push_back(std::move(token));
    doc.labels.push_back(label);
  }
  return doc;
}

}  // namespace metaex::corpus
