#ifndef METAEX_CORPUS_RECORDS_H_
#define METAEX_CORPUS_RECORDS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "metaex/corpus/document.h"

namespace metaex::corpus {

// One line of a record file: the record plus an optional document id
// (present in extraction outputs, absent in source metadata).
struct RecordLine {
  std::optional<std::string> doc_id;
  MetadataRecord record;
};

// JSON object with the MetadataRecord field names; list fields are arrays.
std::string RecordToJson(const MetadataRecord& record,
                         const std::optional<std::string>& doc_id = {});
RecordLine RecordFromJson(const std::string& line);

// One JSON object per line. Blank lines are skipped. Errors carry the file
// name and 1-based line number.
std::vector<RecordLine> ReadRecordLines(const std::filesystem::path& path);
std::vector<MetadataRecord> ReadRecords(const std::filesystem::path& path);
void WriteRecords(const std::filesystem::path& path,
                  const std::vector<MetadataRecord>& records);
void WriteRecordLines(const std::filesystem::path& path,
                      const std::vector<RecordLine>& lines);

// Plausible German publication metadata drawn from fixed word lists. All
// fields are filled; words are separated by single spaces.
MetadataRecord SynthesizeRecord(std::uint64_t seed);
std::vector<MetadataRecord> SynthesizeRecords(std::size_t count,
                                              std::uint64_t seed);

}  // namespace metaex::corpus

#endif  // METAEX_CORPUS_RECORDS_H_
