#ifndef METAEX_FEATURES_FEATURE_SEQUENCE_H_
#define METAEX_FEATURES_FEATURE_SEQUENCE_H_

#include <string>

#include "metaex/corpus/document.h"
#include "metaex/features/embedder.h"
#include "metaex/nn/matrix.h"

namespace metaex::features {

// T x (16 + E): layout features followed by the token embedding.
using FeatureSequence = nn::Matrix;

// Throws ValidationError for an empty document.
FeatureSequence BuildFeatureSequence(const corpus::LabeledDocument& doc,
                                     const Embedder& embedder);

// One token per line, comma-separated, shortest round-trip decimals.
std::string FormatFeatureDump(const FeatureSequence& seq);

}  // namespace metaex::features

#endif  // METAEX_FEATURES_FEATURE_SEQUENCE_H_
