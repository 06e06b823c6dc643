#include "metaex/vision/regions.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "metaex/corpus/generator.h"
#include "metaex/errors.h"

namespace metaex::vision {

namespace {

struct Segment {
  std::vector<std::size_t> tokens;
  corpus::Rect rect;
};

corpus::Rect BoundingBox(const corpus::LabeledDocument& doc,
                         const std::vector<std::size_t>& tokens) {
  double x0 = std::numeric_limits<double>::infinity();
  double y0 = x0;
  double x1 = -x0;
  double y1 = -x0;
  for (const std::size_t i : tokens) {
    const corpus::Token& t = doc.tokens[i];
    x0 = std::min(x0, t.x);
    y0 = std::min(y0, t.y);
    x1 = std::max(x1, t.right());
    y1 = std::max(y1, t.bottom());
  }
  return {x0, y0, x1 - x0, y1 - y0};
}

bool HorizontalOverlap(const corpus::Rect& a, const corpus::Rect& b) {
  return a.x < b.right() && b.x < a.right();
}

// Splits every line at gaps wider than the column threshold.
std::vector<Segment> LineSegments(const corpus::LabeledDocument& doc,
                                  const SegmentationConfig& cfg) {
  std::vector<Segment> segments;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const corpus::Token& t = doc.tokens[i];
    bool start = segments.empty();
    if (!start) {
      const corpus::Token& prev = doc.tokens[i - 1];
      const double space = corpus::kCharWidthEm *
                           std::max(prev.font_size, t.font_size) /
                           doc.page_width_pt;
      start = prev.line_index != t.line_index ||
              t.x - prev.right() > cfg.column_gap_spaces * space;
    }
    if (start) segments.emplace_back();
    segments.back().tokens.push_back(i);
  }
  for (Segment& s : segments) s.rect = BoundingBox(doc, s.tokens);
  std::stable_sort(segments.begin(), segments.end(),
                   [](const Segment& a, const Segment& b) {
                     if (a.rect.y != b.rect.y) return a.rect.y < b.rect.y;
                     return a.rect.x < b.rect.x;
                   });
  return segments;
}

double MedianPitch(const std::vector<Segment>& segments) {
  std::vector<double> pitches;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = i + 1; j < segments.size(); ++j) {
      const double d = segments[j].rect.y - segments[i].rect.y;
      if (d > 0.0 && HorizontalOverlap(segments[i].rect, segments[j].rect)) {
        best = std::min(best, d);
      }
    }
    if (std::isfinite(best)) pitches.push_back(best);
  }
  if (pitches.empty()) return 0.0;
  const auto mid = pitches.begin() + static_cast<long>(pitches.size() / 2);
  std::nth_element(pitches.begin(), mid, pitches.end());
  if (pitches.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(pitches.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace

void Validate(const SegmentationConfig& cfg) {
  if (!(cfg.line_gap_multiplier > 0.0)) {
    throw ValidationError("line_gap_multiplier must be > 0");
  }
  if (!(cfg.column_gap_spaces > 0.0)) {
    throw ValidationError("column_gap_spaces must be > 0");
  }
}

double MedianLinePitch(const corpus::LabeledDocument& doc,
                       const SegmentationConfig& cfg) {
  return MedianPitch(LineSegments(doc, cfg));
}

std::vector<TokenRegion> SegmentRegions(const corpus::LabeledDocument& doc,
                                        const SegmentationConfig& cfg) {
  Validate(cfg);
  const std::vector<Segment> segments = LineSegments(doc, cfg);
  const double limit = cfg.line_gap_multiplier * MedianPitch(segments);

  struct Block {
    std::vector<std::size_t> tokens;
    corpus::Rect last;
  };
  std::vector<Block> blocks;
  for (const Segment& s : segments) {
    Block* target = nullptr;
    double best = std::numeric_limits<double>::infinity();
    for (Block& b : blocks) {
      const double d = s.rect.y - b.last.y;
      if (d > 0.0 && d < limit && d < best &&
          HorizontalOverlap(s.rect, b.last)) {
        best = d;
        target = &b;
      }
    }
    if (target == nullptr) {
      blocks.push_back({s.tokens, s.rect});
    } else {
      target->tokens.insert(target->tokens.end(), s.tokens.begin(),
                            s.tokens.end());
      target->last = s.rect;
    }
  }

  std::vector<TokenRegion> regions;
  regions.reserve(blocks.size());
  for (Block& b : blocks) {
    std::sort(b.tokens.begin(), b.tokens.end());
    TokenRegion r;
    r.rect = BoundingBox(doc, b.tokens);
    r.tokens = std::move(b.tokens);
    regions.push_back(std::move(r));
  }
  std::sort(regions.begin(), regions.end(),
            [&](const TokenRegion& a, const TokenRegion& b) {
              const int la = doc.tokens[a.tokens.front()].line_index;
              const int lb = doc.tokens[b.tokens.front()].line_index;
              if (la != lb) return la < lb;
              return a.rect.x < b.rect.x;
            });
  return regions;
}

}  // namespace metaex::vision
