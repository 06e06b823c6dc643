#include "metaex/corpus/split.h"

#include <cmath>
#include <numeric>

#include "metaex/errors.h"
#include "metaex/random.h"

namespace metaex::corpus {

void Validate(const SplitSpec& spec) {
  for (const double f : {spec.train_frac, spec.val_frac, spec.test_frac}) {
    if (!(f >= 0.0 && f <= 1.0)) {
      throw ValidationError("split fractions must lie in [0, 1]");
    }
  }
  const double sum = spec.train_frac + spec.val_frac + spec.test_frac;
  if (std::abs(sum - 1.0) > 1e-12) {
    throw ValidationError("split fractions must sum to 1");
  }
}

SplitSizes ComputeSplitSizes(std::size_t n, const SplitSpec& spec) {
  Validate(spec);
  // The epsilon keeps 0.15 * 60 from flooring to 8.
  const auto floor_of = [n](double frac) {
    return static_cast<std::size_t>(
        std::floor(frac * static_cast<double>(n) + 1e-9));
  };
  SplitSizes s;
  s.val = floor_of(spec.val_frac);
  s.test = floor_of(spec.test_frac);
  s.train = n - s.val - s.test;
  return s;
}

SplitIndices SplitIndicesFor(std::size_t n, const SplitSpec& spec) {
  const SplitSizes sizes = ComputeSplitSizes(n, spec);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(spec.seed);
  rng.Shuffle(perm);
  SplitIndices out;
  out.train.assign(perm.begin(), perm.begin() + sizes.train);
  out.val.assign(perm.begin() + sizes.train,
                 perm.begin() + sizes.train + sizes.val);
  out.test.assign(perm.begin() + sizes.train + sizes.val, perm.end());
  return out;
}

CorpusSplit SplitCorpus(const std::vector<LabeledDocument>& docs,
                        const SplitSpec& spec) {
  if (docs.size() < 3) {
    throw ValidationError("splitting needs at least 3 documents");
  }
  const SplitIndices idx = SplitIndicesFor(docs.size(), spec);
  CorpusSplit out;
  for (const std::size_t i : idx.train) out.train.push_back(docs[i]);
  for (const std::size_t i : idx.val) out.val.push_back(docs[i]);
  for (const std::size_t i : idx.test) out.test.push_back(docs[i]);
  return out;
}

}  // namespace metaex::corpus
