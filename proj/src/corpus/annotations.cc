#include "metaex/corpus/annotations.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "metaex/errors.h"

namespace metaex::corpus {

namespace {

constexpr std::size_t kColumns = 12;

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string Quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

class RowError {
 public:
  RowError(const std::string& source, int line) : source_(source), line_(line) {}

  [[noreturn]] void Fail(const std::string& what) const {
    throw ValidationError(source_ + ": row " + std::to_string(line_) + ": " +
                          what);
  }

 private:
  const std::string& source_;
  int line_;
};

double ParseDouble(const std::string& s, const char* column,
                   const RowError& err) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    err.Fail(std::string("bad number in column '") + column + "': '" + s + "'");
  }
  return v;
}

long ParseInt(const std::string& s, const char* column, const RowError& err) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    err.Fail(std::string("bad integer in column '") + column + "': '" + s +
             "'");
  }
  return v;
}

bool ParseFlag(const std::string& s, const char* column, const RowError& err) {
  if (s == "0") return false;
  if (s == "1") return true;
  err.Fail(std::string("column '") + column + "' must be 0 or 1, got '" + s +
           "'");
}

Label ParseLabelField(const std::string& s, const RowError& err) {
  const auto label = ParseLabel(s);
  if (!label) {
    err.Fail("unknown label '" + s + "'; expected one of " + LegalLabelList());
  }
  return *label;
}

void ParseMetaLine(const std::string& line, LabeledDocument& doc,
                   const RowError& err) {
  std::istringstream in(line.substr(7));
  std::string kv;
  while (in >> kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) err.Fail("bad metadata entry '" + kv + "'");
    const std::string key = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);
    if (key == "doc_id") {
      doc.doc_id = value;
    } else if (key == "page_width_pt") {
      doc.page_width_pt = ParseDouble(value, "page_width_pt", err);
    } else if (key == "page_height_pt") {
      doc.page_height_pt = ParseDouble(value, "page_height_pt", err);
    } else if (key == "template_id") {
      doc.template_id = value;
    } else {
      err.Fail("unknown metadata key '" + key + "'");
    }
  }
}

}  // namespace

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          fields.back() += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  if (quoted) throw ValidationError("unterminated quote");
  return fields;
}

std::string FormatAnnotations(const LabeledDocument& doc,
                              const std::vector<Label>* predicted) {
  if (predicted != nullptr && predicted->size() != doc.tokens.size()) {
    throw ValidationError("predicted label count does not match tokens");
  }
  std::ostringstream out;
  out << "#metaex doc_id=" << doc.doc_id
      << " page_width_pt=" << FormatDouble(doc.page_width_pt)
      << " page_height_pt=" << FormatDouble(doc.page_height_pt);
  if (doc.template_id) out << " template_id=" << *doc.template_id;
  out << '\n' << kAnnotationHeader;
  if (predicted != nullptr) out << ",predicted_label";
  out << '\n';
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    const Token& t = doc.tokens[i];
    out << Quote(doc.doc_id) << ',' << i << ',' << Quote(t.text) << ','
        << FormatDouble(t.x) << ',' << FormatDouble(t.y) << ','
        << FormatDouble(t.width) << ',' << FormatDouble(t.height) << ','
        << FormatDouble(t.font_size) << ',' << (t.bold ? 1 : 0) << ','
        << (t.italic ? 1 : 0) << ',' << t.line_index << ','
        << Name(doc.labels[i]);
    if (predicted != nullptr) out << ',' << Name((*predicted)[i]);
    out << '\n';
  }
  return out.str();
}

LabeledDocument ParseAnnotations(const std::string& text,
                                 const std::string& source_name,
                                 std::vector<Label>* predicted) {
  LabeledDocument doc;
  bool have_meta_id = false;
  bool have_header = false;
  bool with_prediction = false;
  if (predicted != nullptr) predicted->clear();

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const RowError err(source_name, line_no);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!have_header) {
      if (line.rfind("#metaex", 0) == 0) {
        ParseMetaLine(line, doc, err);
        have_meta_id = !doc.doc_id.empty();
        continue;
      }
      if (line == kAnnotationHeader) {
        have_header = true;
      } else if (line == std::string(kAnnotationHeader) + ",predicted_label") {
        have_header = true;
        with_prediction = true;
      } else {
        err.Fail("expected header '" + std::string(kAnnotationHeader) + "'");
      }
      continue;
    }
    if (line.empty()) continue;

    std::vector<std::string> f;
    try {
      f = SplitCsvLine(line);
    } catch (const ValidationError& e) {
      err.Fail(e.what());
    }
    const std::size_t expected = kColumns + (with_prediction ? 1 : 0);
    if (f.size() != expected) {
      err.Fail("expected " + std::to_string(expected) + " columns, got " +
               std::to_string(f.size()));
    }
    const std::size_t idx = doc.tokens.size();
    if (doc.tokens.empty() && !have_meta_id) {
      doc.doc_id = f[0];
    } else if (f[0] != doc.doc_id) {
      err.Fail("doc_id '" + f[0] + "' differs from '" + doc.doc_id + "'");
    }
    if (ParseInt(f[1], "idx", err) != static_cast<long>(idx)) {
      err.Fail("idx " + f[1] + " out of order, expected " +
               std::to_string(idx));
    }
    Token t;
    t.text = f[2];
    if (t.text.empty()) err.Fail("empty token text");
    t.x = ParseDouble(f[3], "x", err);
    t.y = ParseDouble(f[4], "y", err);
    t.width = ParseDouble(f[5], "width", err);
    t.height = ParseDouble(f[6], "height", err);
    t.font_size = ParseDouble(f[7], "font_size", err);
    t.bold = ParseFlag(f[8], "bold", err);
    t.italic = ParseFlag(f[9], "italic", err);
    t.line_index = static_cast<int>(ParseInt(f[10], "line_index", err));
    doc.labels.push_back(ParseLabelField(f[11], err));
    if (with_prediction && predicted != nullptr) {
      predicted->push_back(ParseLabelField(f[12], err));
    }
    doc.tokens.push_back(std::move(t));
  }
  if (!have_header) {
    throw ValidationError(source_name + ": missing header row");
  }
  try {
    Validate(doc);
  } catch (const ValidationError& e) {
    throw ValidationError(source_name + ": " + e.what());
  }
  return doc;
}

void SaveAnnotations(const LabeledDocument& doc,
                     const std::filesystem::path& path,
                     const std::vector<Label>* predicted) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << FormatAnnotations(doc, predicted);
  if (!out) throw ValidationError("write failed: " + path.string());
}

LabeledDocument LoadAnnotations(const std::filesystem::path& path,
                                std::vector<Label>* predicted) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseAnnotations(buffer.str(), path.string(), predicted);
}

std::vector<LabeledDocument> LoadCorpusDir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw ValidationError("corpus directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<LabeledDocument> docs;
  docs.reserve(files.size());
  for (const auto& f : files) docs.push_back(LoadAnnotations(f));
  return docs;
}

}  // namespace metaex::corpus
