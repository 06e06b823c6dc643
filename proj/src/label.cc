#include "metaex/label.h"

namespace metaex {

std::optional<Label> ParseLabel(std::string_view name) {
  for (std::size_t i = 0; i < kNumLabels; ++i) {
    if (kLabelNames[i] == name) return LabelFromIndex(i);
  }
  return std::nullopt;
}

std::string LegalLabelList() {
  std::string out;
  for (std::size_t i = 0; i < kNumLabels; ++i) {
    if (i > 0) out += ", ";
    out += kLabelNames[i];
  }
  return out;
}

}  // namespace metaex
