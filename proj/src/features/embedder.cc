#include "metaex/features/embedder.h"

#include <algorithm>
#include <cmath>

#include "metaex/errors.h"
#include "metaex/random.h"

namespace metaex::features {

namespace {

std::uint64_t Fnv1a(std::string_view s, std::uint64_t basis) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ basis;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return MixSeed(h);
}

}  // namespace

std::vector<double> Embedder::Embed(std::string_view token,
                                    std::string_view left,
                                    std::string_view right) const {
  std::vector<double> out(static_cast<std::size_t>(dimension()), 0.0);
  Embed(token, left, right, out);
  return out;
}

std::vector<std::string> BoundaryTrigrams(std::string_view token) {
  std::vector<std::string> chars;
  chars.emplace_back("<");
  for (std::size_t i = 0; i < token.size();) {
    std::size_t j = i + 1;
    while (j < token.size() &&
           (static_cast<unsigned char>(token[j]) & 0xC0) == 0x80) {
      ++j;
    }
    chars.emplace_back(token.substr(i, j - i));
    i = j;
  }
  chars.emplace_back(">");
  std::vector<std::string> grams;
  if (chars.size() < 3) return grams;
  for (std::size_t i = 0; i + 2 < chars.size(); ++i) {
    grams.push_back(chars[i] + chars[i + 1] + chars[i + 2]);
  }
  return grams;
}

HashingEmbedder::HashingEmbedder(int dimension, std::uint64_t seed)
    : dimension_(dimension), seed_(seed) {
  if (dimension <= 0) throw ValidationError("embedding dimension must be > 0");
}

void HashingEmbedder::Embed(std::string_view token, std::string_view,
                            std::string_view, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  const auto dim = static_cast<std::uint64_t>(dimension_);
  for (const std::string& gram : BoundaryTrigrams(token)) {
    const std::uint64_t h = Fnv1a(gram, seed_);
    out[h % dim] += (h >> 63) ? -1.0 : 1.0;
  }
  double sq = 0.0;
  for (const double v : out) sq += v * v;
  if (sq == 0.0) {
    // No trigrams, or their signs cancelled out.
    const std::uint64_t h = Fnv1a(token, ~seed_);
    out[h % dim] = 1.0;
    return;
  }
  const double inv = 1.0 / std::sqrt(sq);
  for (double& v : out) v *= inv;
}

}  // namespace metaex::features
