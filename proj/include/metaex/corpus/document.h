#ifndef METAEX_CORPUS_DOCUMENT_H_
#define METAEX_CORPUS_DOCUMENT_H_

#include <optional>
#include <string>
#include <vector>

#include "metaex/label.h"

namespace metaex::corpus {

// A4 in PostScript points.
inline constexpr double kA4WidthPt = 595.276;
inline constexpr double kA4HeightPt = 841.89;

// One word on the first page. Geometry is page-relative: (x, y) is the
// left/top corner of the glyph box, y grows downwards.
struct Token {
  std::string text;
  double x = 0.0;
  double y = 0.0;
  double width = 0.0;
  double height = 0.0;
  double font_size = 0.0;
  bool bold = false;
  bool italic = false;
  int line_index = 0;

  double right() const { return x + width; }
  double bottom() const { return y + height; }

  friend bool operator==(const Token&, const Token&) = default;
};

struct LabeledDocument {
  std::string doc_id;
  double page_width_pt = kA4WidthPt;
  double page_height_pt = kA4HeightPt;
  std::vector<Token> tokens;
  std::vector<Label> labels;
  std::optional<std::string> template_id;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }

  friend bool operator==(const LabeledDocument&,
                         const LabeledDocument&) = default;
};

// Throws ValidationError naming the first violated invariant: label count,
// empty text, geometry out of the unit page, or tokens out of reading order.
void Validate(const LabeledDocument& doc);

// Reading order: line_index, then x.
bool ReadingOrderLess(const Token& a, const Token& b);

// Number of distinct lines (max line_index + 1), 0 for an empty document.
int LineCount(const LabeledDocument& doc);

struct MetadataRecord {
  std::string title;
  std::string abstract;
  std::vector<std::string> authors;
  std::vector<std::string> emails;
  std::vector<std::string> addresses;
  std::string date;
  std::string journal;
  std::vector<std::string> affiliations;
  std::string doi;

  bool empty() const;

  friend bool operator==(const MetadataRecord&,
                         const MetadataRecord&) = default;
};

// Whether the class maps to a list field (author, email, address,
// affiliation) or a scalar one. Unclassified has no field.
bool IsListClass(Label label);

// The record's values for one class: one element for a non-empty scalar,
// every non-empty entry for a list field, nothing for unclassified.
std::vector<std::string> FieldValues(const MetadataRecord& record,
                                     Label label);

// Appends to a list field or joins onto a scalar one with a single space.
void AppendFieldValue(MetadataRecord& record, Label label,
                      const std::string& value);

}  // namespace metaex::corpus

#endif  // METAEX_CORPUS_DOCUMENT_H_
