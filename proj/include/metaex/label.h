#ifndef METAEX_LABEL_H_
#define METAEX_LABEL_H_

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace metaex {

// The nine metadata classes plus the catch-all. The numeric order is part of
// every file format and model head; never reorder.
enum class Label : int {
  kAbstract = 0,
  kAuthor = 1,
  kEmail = 2,
  kAddress = 3,
  kDate = 4,
  kJournal = 5,
  kAffiliation = 6,
  kDoi = 7,
  kTitle = 8,
  kUnclassified = 9,
};

inline constexpr std::size_t kNumLabels = 10;
inline constexpr std::size_t kNumMetadataLabels = 9;

inline constexpr std::array<std::string_view, kNumLabels> kLabelNames = {
    "abstract", "author",      "email", "address", "date",
    "journal",  "affiliation", "doi",   "title",   "unclassified"};

inline constexpr std::size_t Index(Label label) {
  return static_cast<std::size_t>(label);
}

inline constexpr Label LabelFromIndex(std::size_t index) {
  return static_cast<Label>(static_cast<int>(index));
}

inline constexpr std::string_view Name(Label label) {
  return kLabelNames[Index(label)];
}

// Exact, case-sensitive lookup. "Title " and "Title" are both rejected.
std::optional<Label> ParseLabel(std::string_view name);

// "abstract, author, ..., unclassified" for error messages.
std::string LegalLabelList();

inline constexpr std::array<Label, kNumLabels> AllLabels() {
  std::array<Label, kNumLabels> all{};
  for (std::size_t i = 0; i < kNumLabels; ++i) all[i] = LabelFromIndex(i);
  return all;
}

}  // namespace metaex

#endif  // METAEX_LABEL_H_
