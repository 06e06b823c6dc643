#ifndef METAEX_CORPUS_SPLIT_H_
#define METAEX_CORPUS_SPLIT_H_

#include <cstdint>
#include <vector>

#include "metaex/corpus/document.h"

namespace metaex::corpus {

struct SplitSpec {
  double train_frac = 0.70;
  double val_frac = 0.15;
  double test_frac = 0.15;
  std::uint64_t seed = 0;
};

void Validate(const SplitSpec& spec);

struct SplitSizes {
  std::size_t train = 0;
  std::size_t val = 0;
  std::size_t test = 0;
};

// floor(frac * n) for validation and test; the remainder goes to train.
SplitSizes ComputeSplitSizes(std::size_t n, const SplitSpec& spec);

// Seeded Fisher-Yates permutation of 0..n-1 cut into (train, val, test).
struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
};
SplitIndices SplitIndicesFor(std::size_t n, const SplitSpec& spec);

struct CorpusSplit {
  std::vector<LabeledDocument> train;
  std::vector<LabeledDocument> val;
  std::vector<LabeledDocument> test;
};

// Requires at least 3 documents.
CorpusSplit SplitCorpus(const std::vector<LabeledDocument>& docs,
                        const SplitSpec& spec);

}  // namespace metaex::corpus

#endif  // METAEX_CORPUS_SPLIT_H_
