#ifndef METAEX_CORPUS_GENERATOR_H_
#define METAEX_CORPUS_GENERATOR_H_

#include <cstdint>
#include <string>
#include <vector>

#include "metaex/corpus/document.h"
#include "metaex/corpus/layout_template.h"

namespace metaex::corpus {

// Synthetic typesetting model: every character is 0.5 x font size wide and a
// line advances by 1.2 x font size.
inline constexpr double kCharWidthEm = 0.5;
inline constexpr double kLineHeightEm = 1.2;

struct GenerationReport {
  std::vector<std::string> warnings;
  // Classes whose field did not fit its region completely.
  std::vector<Label> truncated;
  // The field text that actually landed on the page.
  MetadataRecord placed;
};

// Lays the record out on the template's first page. Pure function of its
// arguments. Throws ValidationError for an invalid template or an empty
// record; a field that does not fit is truncated and reported.
LabeledDocument GenerateDocument(const MetadataRecord& record,
                                 const LayoutTemplate& layout,
                                 std::uint64_t seed,
                                 GenerationReport* report = nullptr);

// Number of Unicode code points in a UTF-8 string.
std::size_t Utf8Length(const std::string& s);

// Seeded pseudo-German running text used for unclassified regions.
std::vector<std::string> FillerWords(std::uint64_t seed, std::size_t count);

}  // namespace metaex::corpus

#endif  // METAEX_CORPUS_GENERATOR_H_
