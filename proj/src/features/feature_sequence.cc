#include "metaex/features/feature_sequence.h"

#include <algorithm>
#include <charconv>

#include "metaex/errors.h"
#include "metaex/features/layout_features.h"

namespace metaex::features {

FeatureSequence BuildFeatureSequence(const corpus::LabeledDocument& doc,
                                     const Embedder& embedder) {
  if (doc.empty()) {
    throw ValidationError("document '" + doc.doc_id + "' has no tokens");
  }
  const auto e = static_cast<std::size_t>(embedder.dimension());
  FeatureSequence seq(doc.size(), kNumLayoutFeatures + e);
  const DocumentLayout layout = AnalyzeLayout(doc);
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const LayoutFeatures f = ExtractLayoutFeatures(doc, layout, i);
    auto row = seq.row(i);
    std::copy(f.begin(), f.end(), row.begin());
    const std::string_view left =
        i > 0 ? std::string_view(doc.tokens[i - 1].text) : std::string_view();
    const std::string_view right = i + 1 < doc.size()
                                       ? std::string_view(doc.tokens[i + 1].text)
                                       : std::string_view();
    embedder.Embed(doc.tokens[i].text, left, right,
                   row.subspan(kNumLayoutFeatures, e));
  }
  return seq;
}

std::string FormatFeatureDump(const FeatureSequence& seq) {
  std::string out;
  char buf[32];
  for (std::size_t r = 0; r < seq.rows(); ++r) {
    for (std::size_t c = 0; c < seq.cols(); ++c) {
      if (c > 0) out += ',';
      const auto res = std::to_chars(buf, buf + sizeof(buf), seq(r, c));
      out.append(buf, res.ptr);
    }
    out += '\n';
  }
  return out;
}

}  // namespace metaex::features
