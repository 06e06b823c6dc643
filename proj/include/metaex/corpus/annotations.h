#ifndef METAEX_CORPUS_ANNOTATIONS_H_
#define METAEX_CORPUS_ANNOTATIONS_H_

#include <filesystem>
#include <string>
#include <vector>

#include "metaex/corpus/document.h"

namespace metaex::corpus {

// Annotation CSV (UTF-8, RFC 4180 quoting):
//
//   #metaex doc_id=<id> page_width_pt=<f> page_height_pt=<f> [template_id=<id>]
//   doc_id,idx,text,x,y,width,height,font_size,bold,italic,line_index,label
//   <one row per token, ordered by idx>
//
// The leading '#metaex' line carries the page geometry that has no column;
// files without it load with A4 defaults. Floats are written with 17
// significant digits so values round-trip bit for bit. Extraction output
// appends a `predicted_label` column.
inline constexpr char kAnnotationHeader[] =
    "doc_id,idx,text,x,y,width,height,font_size,bold,italic,line_index,label";

std::string FormatAnnotations(const LabeledDocument& doc,
                              const std::vector<Label>* predicted = nullptr);

// Throws ValidationError naming the 1-based file line for malformed rows,
// unknown labels, empty text, idx gaps and doc_id changes.
LabeledDocument ParseAnnotations(const std::string& text,
                                 const std::string& source_name,
                                 std::vector<Label>* predicted = nullptr);

void SaveAnnotations(const LabeledDocument& doc,
                     const std::filesystem::path& path,
                     const std::vector<Label>* predicted = nullptr);
LabeledDocument LoadAnnotations(const std::filesystem::path& path,
                                std::vector<Label>* predicted = nullptr);

// Every *.csv in the directory, sorted by file name.
std::vector<LabeledDocument> LoadCorpusDir(const std::filesystem::path& dir);

// Splits one CSV record into fields. Exposed for tests.
std::vector<std::string> SplitCsvLine(const std::string& line);

}  // namespace metaex::corpus

#endif  // METAEX_CORPUS_ANNOTATIONS_H_
