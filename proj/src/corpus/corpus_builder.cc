#include "metaex/corpus/corpus_builder.h"

#include <cstdio>
#include <set>

#include "metaex/errors.h"
#include "metaex/random.h"

namespace metaex::corpus {

std::string DocumentId(const std::string& template_id, std::size_t k) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "-%05zu", k);
  return template_id + buf;
}

std::vector<GeneratedDocument> GenerateCorpus(
    const std::vector<MetadataRecord>& records,
    const std::vector<LayoutTemplate>& templates,
    const CorpusRequest& request) {
  if (records.empty()) throw ValidationError("no metadata records given");
  if (templates.empty()) throw ValidationError("no layout templates given");
  std::set<std::string> ids;
  for (const LayoutTemplate& t : templates) {
    if (!ids.insert(t.template_id).second) {
      throw ValidationError("duplicate template_id '" + t.template_id + "'");
    }
  }
  for (const auto& [id, n] : request.counts) {
    if (!ids.count(id)) {
      throw ValidationError("count given for unknown template '" + id + "'");
    }
  }
  std::vector<GeneratedDocument> out;
  for (std::size_t ti = 0; ti < templates.size(); ++ti) {
    const LayoutTemplate& layout = templates[ti];
    const auto it = request.counts.find(layout.template_id);
    const std::size_t n =
        it == request.counts.end() ? request.per_template : it->second;
    const std::uint64_t template_seed = DeriveSeed(request.seed, ti);
    for (std::size_t k = 0; k < n; ++k) {
      GeneratedDocument g;
      g.record_index = k % records.size();
      g.doc = GenerateDocument(records[g.record_index], layout,
                               DeriveSeed(template_seed, k), &g.report);
      g.doc.doc_id = DocumentId(layout.template_id, k);
      out.push_back(std::move(g));
    }
  }
  return out;
}

}  // namespace metaex::corpus
