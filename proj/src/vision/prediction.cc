#include "metaex/vision/prediction.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "metaex/errors.h"

namespace metaex::vision {

using nlohmann::ordered_json;

ClassScores RegionDistribution(const Region& region) {
  ClassScores d{};
  if (region.scores) {
    const double sum =
        std::accumulate(region.scores->begin(), region.scores->end(), 0.0);
    if (sum > 0.0) {
      for (std::size_t c = 0; c < kNumLabels; ++c) d[c] = (*region.scores)[c] / sum;
    } else {
      d.fill(1.0 / kNumLabels);
    }
    return d;
  }
  const double rest = (1.0 - region.confidence) / (kNumLabels - 1);
  d.fill(rest);
  d[Index(region.top_class.value_or(Label::kUnclassified))] =
      region.confidence;
  return d;
}

double RankingScore(const Region& region) {
  if (region.scores) {
    return *std::max_element(region.scores->begin(), region.scores->end());
  }
  return region.confidence;
}

double Iou(const corpus::Rect& a, const corpus::Rect& b) {
  const double inter = corpus::IntersectionArea(a, b);
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

std::vector<Region> Suppress(std::vector<Region> regions, double iou_threshold,
                             std::size_t keep) {
  std::vector<std::size_t> order(regions.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return RankingScore(regions[a]) > RankingScore(regions[b]);
  });
  std::vector<Region> kept;
  for (const std::size_t i : order) {
    if (kept.size() == keep) break;
    const bool overlaps = std::any_of(kept.begin(), kept.end(), [&](const Region& k) {
      return Iou(k.rect, regions[i].rect) > iou_threshold;
    });
    if (!overlaps) kept.push_back(std::move(regions[i]));
  }
  return kept;
}

nn::Matrix WordProbabilityMap(const PagePrediction& pred,
                              const corpus::LabeledDocument& doc) {
  if (pred.doc_id != doc.doc_id) {
    throw ValidationError("prediction for '" + pred.doc_id +
                          "' applied to document '" + doc.doc_id + "'");
  }
  std::vector<ClassScores> dists;
  dists.reserve(pred.regions.size());
  for (const Region& r : pred.regions) dists.push_back(RegionDistribution(r));

  nn::Matrix out(doc.size(), kNumLabels);
  for (std::size_t t = 0; t < doc.size(); ++t) {
    const corpus::Token& tok = doc.tokens[t];
    const corpus::Rect box{tok.x, tok.y, tok.width, tok.height};
    double total = 0.0;
    auto row = out.row(t);
    for (std::size_t r = 0; r < pred.regions.size(); ++r) {
      const double a = corpus::IntersectionArea(box, pred.regions[r].rect);
      if (a <= 0.0) continue;
      total += a;
      for (std::size_t c = 0; c < kNumLabels; ++c) row[c] += a * dists[r][c];
    }
    if (total > 0.0) {
      for (double& v : row) v /= total;
    } else {
      row[Index(Label::kUnclassified)] = 1.0;
    }
  }
  return out;
}

namespace {

constexpr double kCoordSlack = 1e-9;

double Number(const ordered_json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) {
    throw ValidationError(where + ": missing numeric '" + key + "'");
  }
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw ValidationError(where + ": '" + key + "' is not finite");
  return v;
}

Region ParseBox(const ordered_json& box, double sx, double sy,
                const std::string& where) {
  if (!box.is_object()) throw ValidationError(where + ": box must be an object");
  Region r;
  r.provenance = Provenance::kImported;
  r.rect = {Number(box, "x", where) / sx, Number(box, "y", where) / sy,
            Number(box, "w", where) / sx, Number(box, "h", where) / sy};
  if (r.rect.x < 0.0 || r.rect.y < 0.0 || r.rect.w < 0.0 || r.rect.h < 0.0 ||
      r.rect.right() > 1.0 + kCoordSlack || r.rect.bottom() > 1.0 + kCoordSlack) {
    throw ValidationError(where + ": box lies outside the page");
  }
  const bool has_scores = box.contains("scores");
  const bool has_class = box.contains("class");
  if (has_scores == has_class) {
    throw ValidationError(where + ": box needs exactly one of 'scores' or "
                          "'class' + 'confidence'");
  }
  if (has_scores) {
    const ordered_json& s = box.at("scores");
    if (!s.is_array() || s.size() != kNumLabels) {
      throw ValidationError(where + ": 'scores' must hold 10 numbers in "
                            "class order: " + LegalLabelList());
    }
    ClassScores scores{};
    for (std::size_t c = 0; c < kNumLabels; ++c) {
      if (!s[c].is_number()) throw ValidationError(where + ": non-numeric score");
      scores[c] = s[c].get<double>();
      if (!std::isfinite(scores[c]) || scores[c] < 0.0) {
        throw ValidationError(where + ": scores must be finite and >= 0");
      }
    }
    r.scores = scores;
    return r;
  }
  if (!box.at("class").is_string()) {
    throw ValidationError(where + ": 'class' must be a string");
  }
  const std::string name = box.at("class").get<std::string>();
  const std::optional<Label> label = ParseLabel(name);
  if (!label) {
    throw ValidationError(where + ": unknown class '" + name +
                          "'; legal names: " + LegalLabelList());
  }
  r.top_class = label;
  r.confidence = Number(box, "confidence", where);
  if (r.confidence < 0.0 || r.confidence > 1.0) {
    throw ValidationError(where + ": confidence must lie in [0, 1]");
  }
  return r;
}

}  // namespace

std::vector<PagePrediction> ParsePagePredictions(const std::string& json_text,
                                                 const std::string& source) {
  ordered_json root;
  try {
    root = ordered_json::parse(json_text);
  } catch (const ordered_json::parse_error& e) {
    throw ValidationError(source + ": " + e.what());
  }
  if (!root.is_array()) throw ValidationError(source + ": expected a JSON array of pages");
  std::vector<PagePrediction> pages;
  for (std::size_t p = 0; p < root.size(); ++p) {
    const ordered_json& page = root[p];
    const std::string where = source + ": page " + std::to_string(p);
    if (!page.is_object()) throw ValidationError(where + ": expected an object");
    PagePrediction pred;
    if (!page.contains("doc_id") || !page.at("doc_id").is_string() ||
        page.at("doc_id").get<std::string>().empty()) {
      throw ValidationError(where + ": missing doc_id");
    }
    pred.doc_id = page.at("doc_id").get<std::string>();
    pred.page_width_pt = Number(page, "page_width_pt", where);
    pred.page_height_pt = Number(page, "page_height_pt", where);
    if (pred.page_width_pt <= 0.0 || pred.page_height_pt <= 0.0) {
      throw ValidationError(where + ": page size must be positive");
    }
    if (page.contains("detector")) pred.detector = page.at("detector").get<std::string>();
    double sx = 1.0;
    double sy = 1.0;
    if (page.contains("units")) {
      const std::string units = page.at("units").get<std::string>();
      if (units == "pt") {
        sx = pred.page_width_pt;
        sy = pred.page_height_pt;
      } else if (units != "relative") {
        throw ValidationError(where + ": units must be 'relative' or 'pt'");
      }
    }
    if (!page.contains("boxes") || !page.at("boxes").is_array()) {
      throw ValidationError(where + ": missing 'boxes' array");
    }
    const ordered_json& boxes = page.at("boxes");
    for (std::size_t b = 0; b < boxes.size(); ++b) {
      pred.regions.push_back(
          ParseBox(boxes[b], sx, sy, where + " box " + std::to_string(b)));
    }
    pages.push_back(std::move(pred));
  }
  return pages;
}

std::vector<PagePrediction> ImportPagePredictions(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParsePagePredictions(buffer.str(), path.string());
}

std::string SerializePagePredictions(const std::vector<PagePrediction>& pages) {
  ordered_json root = ordered_json::array();
  for (const PagePrediction& p : pages) {
    ordered_json page;
    page["doc_id"] = p.doc_id;
    page["page_width_pt"] = p.page_width_pt;
    page["page_height_pt"] = p.page_height_pt;
    if (!p.detector.empty()) page["detector"] = p.detector;
    ordered_json boxes = ordered_json::array();
    for (const Region& r : p.regions) {
      ordered_json box;
      box["x"] = r.rect.x;
      box["y"] = r.rect.y;
      box["w"] = r.rect.w;
      box["h"] = r.rect.h;
      if (r.scores) {
        box["scores"] = *r.scores;
      } else {
        box["class"] = std::string(Name(r.top_class.value_or(Label::kUnclassified)));
        box["confidence"] = r.confidence;
      }
      boxes.push_back(std::move(box));
    }
    page["boxes"] = std::move(boxes);
    root.push_back(std::move(page));
  }
  return root.dump(1) + "\n";
}

void ExportPagePredictions(const std::vector<PagePrediction>& pages,
                           const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << SerializePagePredictions(pages);
}

}  // namespace metaex::vision
