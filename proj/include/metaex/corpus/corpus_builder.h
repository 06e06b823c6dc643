#ifndef METAEX_CORPUS_CORPUS_BUILDER_H_
#define METAEX_CORPUS_CORPUS_BUILDER_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "metaex/corpus/document.h"
#include "metaex/corpus/generator.h"
#include "metaex/corpus/layout_template.h"

namespace metaex::corpus {

struct CorpusRequest {
  std::size_t per_template = 0;
  // Per-template overrides of per_template, keyed by template_id.
  std::map<std::string, std::size_t> counts;
  std::uint64_t seed = 0;
};

struct GeneratedDocument {
  LabeledDocument doc;
  GenerationReport report;
  std::size_t record_index = 0;
};

// Document k of every template renders record k mod |records| with seed
// DeriveSeed(DeriveSeed(seed, template position), k); its id is
// "<template_id>-<k, zero-padded to 5 digits>". Output is grouped by
// template in input order.
std::vector<GeneratedDocument> GenerateCorpus(
    const std::vector<MetadataRecord>& records,
    const std::vector<LayoutTemplate>& templates,
    const CorpusRequest& request);

std::string DocumentId(const std::string& template_id, std::size_t k);

}  // namespace metaex::corpus

#endif  // METAEX_CORPUS_CORPUS_BUILDER_H_
