#ifndef METAEX_FUSION_FUSION_H_
#define METAEX_FUSION_FUSION_H_

#include <vector>

#include "metaex/corpus/document.h"
#include "metaex/label.h"
#include "metaex/nn/labeler.h"
#include "metaex/nn/matrix.h"

namespace metaex::fusion {

inline constexpr std::size_t kFusedDim = 2 * kNumLabels;

// T x 20: [nlp distribution ; vision distribution] per token.
using FusedSequence = nn::Matrix;

// Throws ValidationError unless both inputs are T x 10 with equal T.
FusedSequence Fuse(const nn::Matrix& nlp, const nn::Matrix& vision);

struct LabeledPrediction {
  std::vector<Label> labels;
  nn::Matrix probs;  // T x 10
};

// Argmax of each distribution, ties to the lowest class index.
std::vector<Label> ArgmaxLabels(const nn::Matrix& probs);

// Runs the fusion labeler. Throws ValidationError for an empty sequence or
// an input width other than the model's.
LabeledPrediction PredictLabels(const nn::BiLstmLabeler& model,
                                const FusedSequence& fused);

// Maximal runs of equally labeled tokens, in reading order. Runs of a list
// class become separate entries; runs of a scalar class are joined with a
// space. Unclassified tokens are dropped.
corpus::MetadataRecord ExtractRecord(const corpus::LabeledDocument& doc,
                                     const std::vector<Label>& labels);

}  // namespace metaex::fusion

#endif  // METAEX_FUSION_FUSION_H_
