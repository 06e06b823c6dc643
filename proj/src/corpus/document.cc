#include "metaex/corpus/document.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "metaex/errors.h"

namespace metaex::corpus {

namespace {

constexpr double kGeometrySlack = 1e-9;

std::string Where(const LabeledDocument& doc, std::size_t i) {
  return "document '" + doc.doc_id + "' token " + std::to_string(i);
}

}  // namespace

bool ReadingOrderLess(const Token& a, const Token& b) {
  if (a.line_index != b.line_index) return a.line_index < b.line_index;
  return a.x < b.x;
}

void Validate(const LabeledDocument& doc) {
  if (doc.labels.size() != doc.tokens.size()) {
    throw ValidationError("document '" + doc.doc_id + "' has " +
                          std::to_string(doc.tokens.size()) + " tokens but " +
                          std::to_string(doc.labels.size()) + " labels");
  }
  if (!(doc.page_width_pt > 0.0) || !(doc.page_height_pt > 0.0)) {
    throw ValidationError("document '" + doc.doc_id +
                          "' has a non-positive page size");
  }
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    const Token& t = doc.tokens[i];
    if (t.text.empty()) throw ValidationError(Where(doc, i) + ": empty text");
    const bool finite = std::isfinite(t.x) && std::isfinite(t.y) &&
                        std::isfinite(t.width) && std::isfinite(t.height) &&
                        std::isfinite(t.font_size);
    if (!finite) throw ValidationError(Where(doc, i) + ": non-finite value");
    if (t.x < 0.0 || t.y < 0.0 || t.width <= 0.0 || t.height <= 0.0 ||
        t.width > 1.0 || t.height > 1.0 ||
        t.x + t.width > 1.0 + kGeometrySlack ||
        t.y + t.height > 1.0 + kGeometrySlack) {
      throw ValidationError(Where(doc, i) + ": box outside the unit page");
    }
    if (t.font_size <= 0.0) {
      throw ValidationError(Where(doc, i) + ": non-positive font size");
    }
    if (t.line_index < 0) {
      throw ValidationError(Where(doc, i) + ": negative line index");
    }
    if (i > 0 && ReadingOrderLess(t, doc.tokens[i - 1])) {
      throw ValidationError(Where(doc, i) + ": tokens not in reading order");
    }
  }
}

int LineCount(const LabeledDocument& doc) {
  int lines = 0;
  for (const Token& t : doc.tokens) lines = std::max(lines, t.line_index + 1);
  return lines;
}

bool MetadataRecord::empty() const {
  auto all_empty = [](const std::vector<std::string>& v) {
    return std::all_of(v.begin(), v.end(),
                       [](const std::string& s) { return s.empty(); });
  };
  return title.empty() && abstract.empty() && all_empty(authors) &&
         all_empty(emails) && all_empty(addresses) && date.empty() &&
         journal.empty() && all_empty(affiliations) && doi.empty();
}

bool IsListClass(Label label) {
  return label == Label::kAuthor || label == Label::kEmail ||
         label == Label::kAddress || label == Label::kAffiliation;
}

namespace {

// Record may be const or mutable; returns pointers with matching constness.
template <typename Record>
auto ScalarField(Record& r, Label label) -> decltype(&r.title) {
  switch (label) {
    case Label::kAbstract: return &r.abstract;
    case Label::kDate: return &r.date;
    case Label::kJournal: return &r.journal;
    case Label::kDoi: return &r.doi;
    case Label::kTitle: return &r.title;
    default: return nullptr;
  }
}

template <typename Record>
auto ListField(Record& r, Label label) -> decltype(&r.authors) {
  switch (label) {
    case Label::kAuthor: return &r.authors;
    case Label::kEmail: return &r.emails;
    case Label::kAddress: return &r.addresses;
    case Label::kAffiliation: return &r.affiliations;
    default: return nullptr;
  }
}

}  // namespace

std::vector<std::string> FieldValues(const MetadataRecord& record,
                                     Label label) {
  std::vector<std::string> out;
  if (const std::string* s = ScalarField(record, label)) {
    if (!s->empty()) out.push_back(*s);
  } else if (const auto* list = ListField(record, label)) {
    for (const std::string& v : *list) {
      if (!v.empty()) out.push_back(v);
    }
  }
  return out;
}

void AppendFieldValue(MetadataRecord& record, Label label,
                      const std::string& value) {
  if (std::string* s = ScalarField(record, label)) {
    if (!s->empty()) *s += ' ';
    *s += value;
  } else if (std::vector<std::string>* list = ListField(record, label)) {
    list->push_back(value);
  }
}

}  // namespace metaex::corpus
