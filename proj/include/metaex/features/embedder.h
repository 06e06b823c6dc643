#ifndef METAEX_FEATURES_EMBEDDER_H_
#define METAEX_FEATURES_EMBEDDER_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace metaex::features {

// Maps a token, with its neighbours, to a fixed-size vector.
class Embedder {
 public:
  virtual ~Embedder() = default;

  virtual int dimension() const = 0;

  // Writes dimension() values into `out`. Context may be empty at the
  // document edges.
  virtual void Embed(std::string_view token, std::string_view left,
                     std::string_view right, std::span<double> out) const = 0;

  std::vector<double> Embed(std::string_view token,
                            std::string_view left = {},
                            std::string_view right = {}) const;
};

// Signed feature hashing of character trigrams of "<token>". The result is
// L2-normalized. Context is ignored.
class HashingEmbedder final : public Embedder {
 public:
  // Throws ValidationError unless dimension > 0.
  HashingEmbedder(int dimension, std::uint64_t seed);

  int dimension() const override { return dimension_; }
  std::uint64_t seed() const { return seed_; }

  void Embed(std::string_view token, std::string_view left,
             std::string_view right, std::span<double> out) const override;
  using Embedder::Embed;

 private:
  int dimension_;
  std::uint64_t seed_;
};

// Character trigrams of "<token>", split on UTF-8 code points. A token of
// one code point yields one trigram; an empty token yields none.
std::vector<std::string> BoundaryTrigrams(std::string_view token);

}  // namespace metaex::features

#endif  // METAEX_FEATURES_EMBEDDER_H_
