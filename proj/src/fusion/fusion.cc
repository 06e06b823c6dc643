#include "metaex/fusion/fusion.h"

#include <algorithm>
#include <string>

#include "metaex/errors.h"
#include "metaex/nn/loss.h"

namespace metaex::fusion {

FusedSequence Fuse(const nn::Matrix& nlp, const nn::Matrix& vision) {
  if (nlp.cols() != kNumLabels || vision.cols() != kNumLabels) {
    throw ValidationError("fusion inputs must have 10 columns");
  }
  if (nlp.rows() != vision.rows()) {
    throw ValidationError("fusion inputs differ in length: " +
                          std::to_string(nlp.rows()) + " vs " +
                          std::to_string(vision.rows()));
  }
  FusedSequence fused(nlp.rows(), kFusedDim);
  for (std::size_t t = 0; t < nlp.rows(); ++t) {
    auto row = fused.row(t);
    std::copy(nlp.row(t).begin(), nlp.row(t).end(), row.begin());
    std::copy(vision.row(t).begin(), vision.row(t).end(),
              row.begin() + kNumLabels);
  }
  return fused;
}

std::vector<Label> ArgmaxLabels(const nn::Matrix& probs) {
  std::vector<Label> labels;
  labels.reserve(probs.rows());
  for (std::size_t t = 0; t < probs.rows(); ++t) {
    labels.push_back(LabelFromIndex(nn::Argmax(probs.row(t))));
  }
  return labels;
}

LabeledPrediction PredictLabels(const nn::BiLstmLabeler& model,
                                const FusedSequence& fused) {
  LabeledPrediction out;
  out.probs = nn::Predict(model, fused);
  out.labels = ArgmaxLabels(out.probs);
  return out;
}

corpus::MetadataRecord ExtractRecord(const corpus::LabeledDocument& doc,
                                     const std::vector<Label>& labels) {
  if (labels.size() != doc.size()) {
    throw ValidationError("label count " + std::to_string(labels.size()) +
                          " does not match token count " +
                          std::to_string(doc.size()));
  }
  corpus::MetadataRecord record;
  std::size_t i = 0;
  while (i < labels.size()) {
    std::size_t j = i;
    std::string run;
    while (j < labels.size() && labels[j] == labels[i]) {
      if (!run.empty()) run += ' ';
      run += doc.tokens[j].text;
      ++j;
    }
    if (labels[i] != Label::kUnclassified) {
      corpus::AppendFieldValue(record, labels[i], run);
    }
    i = j;
  }
  return record;
}

}  // namespace metaex::fusion
