#include "metaex/eval/metrics.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <tuple>

#include "json.hpp"
#include "metaex/errors.h"

namespace metaex::eval {

using nlohmann::ordered_json;

double F1(double precision, double recall) {
  const double sum = precision + recall;
  return sum > 0.0 ? 2.0 * precision * recall / sum : 0.0;
}

void FinishCounts(ClassPrf& c) {
  const auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  c.precision = ratio(c.tp, c.tp + c.fp);
  c.recall = ratio(c.tp, c.tp + c.fn);
  c.f1 = F1(c.precision, c.recall);
}

PrfReport TokenPrf(const std::vector<std::vector<Label>>& pred,
                   const std::vector<std::vector<Label>>& gold) {
  if (pred.size() != gold.size()) {
    throw ValidationError("prediction covers " + std::to_string(pred.size()) +
                          " documents, gold " + std::to_string(gold.size()));
  }
  PrfReport report;
  for (std::size_t d = 0; d < pred.size(); ++d) {
    if (pred[d].size() != gold[d].size()) {
      throw ValidationError("document " + std::to_string(d) + ": " +
                            std::to_string(pred[d].size()) +
                            " predicted labels for " +
                            std::to_string(gold[d].size()) + " tokens");
    }
    for (std::size_t t = 0; t < pred[d].size(); ++t) {
      const std::size_t p = Index(pred[d][t]);
      const std::size_t g = Index(gold[d][t]);
      if (p == g) {
        ++report.classes[p].tp;
      } else {
        ++report.classes[p].fp;
        ++report.classes[g].fn;
      }
    }
  }
  ClassPrf total;
  double p_sum = 0.0;
  double r_sum = 0.0;
  double f_sum = 0.0;
  std::size_t counted = 0;
  for (std::size_t c = 0; c < kNumLabels; ++c) {
    ClassPrf& row = report.classes[c];
    FinishCounts(row);
    if (c >= kNumMetadataLabels) continue;
    total.tp += row.tp;
    total.fp += row.fp;
    total.fn += row.fn;
    if (row.vacuous()) continue;
    p_sum += row.precision;
    r_sum += row.recall;
    f_sum += row.f1;
    ++counted;
  }
  FinishCounts(total);
  report.micro = {total.precision, total.recall, total.f1};
  if (counted > 0) {
    const double n = static_cast<double>(counted);
    report.macro = {p_sum / n, r_sum / n, f_sum / n};
  }
  return report;
}

namespace {

bool IsStrippedCodePoint(std::string_view s, std::size_t i, std::size_t* len) {
  const auto c = static_cast<unsigned char>(s[i]);
  if (c < 0x80) {
    *len = 1;
    return std::ispunct(c) != 0;
  }
  // U+2010..U+201F: dashes and typographic quotes.
  if (c == 0xE2 && i + 2 < s.size() &&
      static_cast<unsigned char>(s[i + 1]) == 0x80) {
    const auto d = static_cast<unsigned char>(s[i + 2]);
    *len = 3;
    return d >= 0x90 && d <= 0x9F;
  }
  // U+00AB and U+00BB guillemets.
  if (c == 0xC2 && i + 1 < s.size()) {
    const auto d = static_cast<unsigned char>(s[i + 1]);
    *len = 2;
    return d == 0xAB || d == 0xBB;
  }
  *len = 1;
  return false;
}

}  // namespace

std::vector<std::string> NormalizeTokens(std::string_view text) {
  std::string cleaned;
  cleaned.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    std::size_t len = 1;
    if (IsStrippedCodePoint(text, i, &len)) {
      i += len;
      continue;
    }
    const auto c = static_cast<unsigned char>(text[i]);
    if (c >= 'A' && c <= 'Z') {
      cleaned += static_cast<char>(c - 'A' + 'a');
    } else if (c == 0xC3 && i + 1 < text.size()) {
      auto d = static_cast<unsigned char>(text[i + 1]);
      if (d == 0x84 || d == 0x96 || d == 0x9C) d += 0x20;  // Ä Ö Ü
      cleaned += static_cast<char>(c);
      cleaned += static_cast<char>(d);
      i += 2;
      continue;
    } else {
      cleaned += static_cast<char>(c);
    }
    ++i;
  }
  std::vector<std::string> tokens;
  std::string current;
  for (const char ch : cleaned) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      current += ch;
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

double CosineSimilarity(std::string_view a, std::string_view b) {
  std::map<std::string, std::pair<long, long>> tf;
  const std::vector<std::string> ta = NormalizeTokens(a);
  const std::vector<std::string> tb = NormalizeTokens(b);
  if (ta.empty() && tb.empty()) return 1.0;
  if (ta.empty() || tb.empty()) return 0.0;
  for (const std::string& t : ta) ++tf[t].first;
  for (const std::string& t : tb) ++tf[t].second;
  long dot = 0;
  long na = 0;
  long nb = 0;
  for (const auto& [term, counts] : tf) {
    dot += counts.first * counts.second;
    na += counts.first * counts.first;
    nb += counts.second * counts.second;
  }
  // A single square root of the exact integer product keeps values such as
  // 17 / sqrt(20 * 20) exact.
  const double cos = static_cast<double>(dot) /
                     std::sqrt(static_cast<double>(na) * static_cast<double>(nb));
  return std::min(1.0, cos);
}

bool FieldMatch(std::string_view extracted, std::string_view gold,
                double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw ValidationError("match threshold must lie in (0, 1]");
  }
  return CosineSimilarity(extracted, gold) > threshold;
}

std::size_t GreedyMatchCount(const std::vector<std::string>& extracted,
                             const std::vector<std::string>& gold,
                             double threshold) {
  struct Pair {
    double sim;
    std::size_t e;
    std::size_t g;
  };
  std::vector<Pair> pairs;
  for (std::size_t e = 0; e < extracted.size(); ++e) {
    for (std::size_t g = 0; g < gold.size(); ++g) {
      const double sim = CosineSimilarity(extracted[e], gold[g]);
      if (sim > threshold) pairs.push_back({sim, e, g});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
    if (x.sim != y.sim) return x.sim > y.sim;
    return std::tie(x.e, x.g) < std::tie(y.e, y.g);
  });
  std::vector<bool> e_used(extracted.size());
  std::vector<bool> g_used(gold.size());
  std::size_t matched = 0;
  for (const Pair& p : pairs) {
    if (e_used[p.e] || g_used[p.g]) continue;
    e_used[p.e] = true;
    g_used[p.g] = true;
    ++matched;
  }
  return matched;
}

namespace {

void CheckCoverage(const RecordSet& extracted, const RecordSet& gold) {
  std::string missing;
  for (const auto& [id, record] : gold) {
    if (!extracted.count(id)) missing += " " + id + " (no extraction)";
  }
  for (const auto& [id, record] : extracted) {
    if (!gold.count(id)) missing += " " + id + " (no gold)";
  }
  if (!missing.empty()) {
    throw ValidationError("document ids do not align:" + missing);
  }
}

bool Excluded(Label label, const MatchOptions& options) {
  return options.exclude_date_and_doi &&
         (label == Label::kDate || label == Label::kDoi);
}

}  // namespace

MatchReport ExtractionF1(const RecordSet& extracted, const RecordSet& gold,
                         const MatchOptions& options) {
  if (!(options.threshold > 0.0 && options.threshold <= 1.0)) {
    throw ValidationError("match threshold must lie in (0, 1]");
  }
  CheckCoverage(extracted, gold);
  MatchReport report;
  for (const auto& [id, gold_record] : gold) {
    const corpus::MetadataRecord& ext = extracted.at(id);
    for (std::size_t c = 0; c < kNumMetadataLabels; ++c) {
      const Label label = LabelFromIndex(c);
      const std::vector<std::string> e = corpus::FieldValues(ext, label);
      const std::vector<std::string> g = corpus::FieldValues(gold_record, label);
      const std::size_t m = GreedyMatchCount(e, g, options.threshold);
      FieldCounts& row = report.classes[c];
      row.matched += m;
      row.spurious += e.size() - m;
      row.missed += g.size() - m;
    }
  }
  double f_sum = 0.0;
  std::size_t counted = 0;
  for (std::size_t c = 0; c < kNumMetadataLabels; ++c) {
    FieldCounts& row = report.classes[c];
    ClassPrf prf;
    prf.tp = row.matched;
    prf.fp = row.spurious;
    prf.fn = row.missed;
    FinishCounts(prf);
    row.precision = prf.precision;
    row.recall = prf.recall;
    row.f1 = prf.f1;
    row.evaluated = !Excluded(LabelFromIndex(c), options);
    if (row.evaluated && !prf.vacuous()) {
      f_sum += row.f1;
      ++counted;
    }
  }
  report.overall_f1 = counted > 0 ? f_sum / static_cast<double>(counted) : 0.0;
  return report;
}

Comparison CompareExtractors(
    const std::vector<std::pair<std::string, RecordSet>>& runs,
    const RecordSet& gold, const MatchOptions& options) {
  Comparison out;
  out.options = options;
  for (const auto& [name, records] : runs) {
    try {
      out.reports.push_back(ExtractionF1(records, gold, options));
    } catch (const ValidationError& e) {
      throw ValidationError("run '" + name + "': " + e.what());
    }
    out.runs.push_back(name);
  }
  return out;
}

namespace {

std::string Fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string PadRight(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string PadLeft(const std::string& s, std::size_t width) {
  return s.size() < width ? std::string(width - s.size(), ' ') + s : s;
}

ordered_json AveragesJson(const Averages& a) {
  return {{"precision", a.precision}, {"recall", a.recall}, {"f1", a.f1}};
}

}  // namespace

std::string PrfReportJson(const PrfReport& report) {
  ordered_json root;
  root["mode"] = "token";
  ordered_json rows = ordered_json::array();
  for (std::size_t c = 0; c < kNumLabels; ++c) {
    const ClassPrf& r = report.classes[c];
    rows.push_back({{"class", std::string(kLabelNames[c])},
                    {"precision", r.precision},
                    {"recall", r.recall},
                    {"f1", r.f1},
                    {"support", r.support()},
                    {"tp", r.tp},
                    {"fp", r.fp},
                    {"fn", r.fn}});
  }
  root["classes"] = std::move(rows);
  root["overall"] = {{"micro", AveragesJson(report.micro)},
                     {"macro", AveragesJson(report.macro)}};
  return root.dump(2) + "\n";
}

std::string PrfReportText(const PrfReport& report) {
  std::string out = PadRight("class", 14) + PadLeft("precision", 10) +
                    PadLeft("recall", 10) + PadLeft("f1", 10) +
                    PadLeft("support", 10) + "\n";
  for (std::size_t c = 0; c < kNumLabels; ++c) {
    const ClassPrf& r = report.classes[c];
    out += PadRight(std::string(kLabelNames[c]), 14) +
           PadLeft(Fixed(r.precision), 10) + PadLeft(Fixed(r.recall), 10) +
           PadLeft(Fixed(r.f1), 10) +
           PadLeft(std::to_string(r.support()), 10) + "\n";
  }
  for (const auto& [name, a] :
       {std::pair{"overall-micro", report.micro},
        std::pair{"overall-macro", report.macro}}) {
    out += PadRight(name, 14) + PadLeft(Fixed(a.precision), 10) +
           PadLeft(Fixed(a.recall), 10) + PadLeft(Fixed(a.f1), 10) + "\n";
  }
  return out;
}

std::string MatchReportJson(const MatchReport& report,
                            const MatchOptions& options) {
  ordered_json root;
  root["mode"] = "field";
  root["threshold"] = options.threshold;
  root["exclude_date_and_doi"] = options.exclude_date_and_doi;
  ordered_json rows = ordered_json::array();
  for (std::size_t c = 0; c < kNumMetadataLabels; ++c) {
    const FieldCounts& r = report.classes[c];
    rows.push_back({{"class", std::string(kLabelNames[c])},
                    {"evaluated", r.evaluated},
                    {"matched", r.matched},
                    {"missed", r.missed},
                    {"spurious", r.spurious},
                    {"precision", r.precision},
                    {"recall", r.recall},
                    {"f1", r.f1}});
  }
  root["classes"] = std::move(rows);
  root["overall"] = {{"macro", {{"f1", report.overall_f1}}}};
  return root.dump(2) + "\n";
}

std::string MatchReportText(const MatchReport& report,
                            const MatchOptions& options) {
  std::string out = PadRight("class", 14) + PadLeft("matched", 9) +
                    PadLeft("missed", 9) + PadLeft("spurious", 9) +
                    PadLeft("f1", 8) + "\n";
  for (std::size_t c = 0; c < kNumMetadataLabels; ++c) {
    const FieldCounts& r = report.classes[c];
    out += PadRight(std::string(kLabelNames[c]), 14) +
           PadLeft(std::to_string(r.matched), 9) +
           PadLeft(std::to_string(r.missed), 9) +
           PadLeft(std::to_string(r.spurious), 9) +
           PadLeft(r.evaluated ? Fixed(r.f1) : "-", 8) + "\n";
  }
  out += PadRight("overall-macro", 14) + PadLeft("", 27) +
         PadLeft(Fixed(report.overall_f1), 8) + "\n";
  out += "threshold > " + Fixed(options.threshold) + "\n";
  return out;
}

std::string ComparisonJson(const Comparison& comparison) {
  ordered_json root;
  root["mode"] = "field";
  root["threshold"] = comparison.options.threshold;
  root["exclude_date_and_doi"] = comparison.options.exclude_date_and_doi;
  root["runs"] = comparison.runs;
  ordered_json rows = ordered_json::array();
  for (std::size_t c = 0; c < kNumMetadataLabels; ++c) {
    if (Excluded(LabelFromIndex(c), comparison.options)) continue;
    ordered_json row;
    row["class"] = std::string(kLabelNames[c]);
    ordered_json f1 = ordered_json::object();
    for (std::size_t r = 0; r < comparison.runs.size(); ++r) {
      f1[comparison.runs[r]] = comparison.reports[r].classes[c].f1;
    }
    row["f1"] = std::move(f1);
    rows.push_back(std::move(row));
  }
  root["classes"] = std::move(rows);
  ordered_json overall = ordered_json::object();
  for (std::size_t r = 0; r < comparison.runs.size(); ++r) {
    overall[comparison.runs[r]] = comparison.reports[r].overall_f1;
  }
  root["overall_macro_f1"] = std::move(overall);
  return root.dump(2) + "\n";
}

std::string ComparisonText(const Comparison& comparison) {
  std::size_t width = 8;
  for (const std::string& run : comparison.runs) {
    width = std::max(width, run.size() + 2);
  }
  std::string out = PadRight("class", 14);
  for (const std::string& run : comparison.runs) out += PadLeft(run, width);
  out += "\n";
  for (std::size_t c = 0; c < kNumMetadataLabels; ++c) {
    if (Excluded(LabelFromIndex(c), comparison.options)) continue;
    out += PadRight(std::string(kLabelNames[c]), 14);
    for (const MatchReport& r : comparison.reports) {
      out += PadLeft(Fixed(r.classes[c].f1), width);
    }
    out += "\n";
  }
  out += PadRight("overall", 14);
  for (const MatchReport& r : comparison.reports) {
    out += PadLeft(Fixed(r.overall_f1), width);
  }
  out += "\n";
  return out;
}

}  // namespace metaex::eval
