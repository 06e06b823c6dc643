// Command-line front end. Exit codes: 0 success, 1 validation failure,
// 2 numerical failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "metaex/corpus/annotations.h"
#include "metaex/corpus/corpus_builder.h"
#include "metaex/corpus/layout_template.h"
#include "metaex/corpus/records.h"
#include "metaex/corpus/split.h"
#include "metaex/errors.h"
#include "metaex/eval/metrics.h"
#include "metaex/features/feature_sequence.h"
#include "metaex/fusion/fusion.h"
#include "metaex/nn/checkpoint.h"
#include "metaex/nn/grad_check_suite.h"
#include "metaex/pipeline/pipeline.h"
#include "metaex/pipeline/run_config.h"
#include "metaex/vision/prediction.h"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace metaex {
namespace {

void WriteFile(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
}

std::vector<fs::path> FilesWithExtension(const fs::path& dir,
                                         const std::string& ext) {
  if (!fs::is_directory(dir)) {
    throw ValidationError("not a directory: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const fs::directory_entry& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ext) {
      files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

// ---- gen-records ----------------------------------------------------------

struct GenRecordsArgs {
  std::size_t count = 100;
  std::uint64_t seed = 0;
  std::string out;
};

int GenRecords(const GenRecordsArgs& a) {
  corpus::WriteRecords(a.out, corpus::SynthesizeRecords(a.count, a.seed));
  std::cout << "wrote " << a.count << " records to " << a.out << "\n";
  return 0;
}

// ---- export-templates -----------------------------------------------------

int ExportTemplates(const std::string& out) {
  fs::create_directories(out);
  for (const corpus::LayoutTemplate& t : corpus::BuiltinTemplates()) {
    WriteFile(fs::path(out) / (t.template_id + ".json"),
              corpus::SerializeLayoutTemplate(t));
  }
  std::cout << "wrote " << corpus::BuiltinTemplates().size()
            << " templates to " << out << "\n";
  return 0;
}

// ---- gen-corpus -----------------------------------------------------------

struct GenCorpusArgs {
  std::string records;
  std::string templates;
  std::size_t per_template = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::vector<std::string> counts;
};

int GenCorpus(const GenCorpusArgs& a) {
  const std::vector<corpus::MetadataRecord> records =
      corpus::ReadRecords(a.records);
  const std::vector<corpus::LayoutTemplate> templates =
      corpus::LoadLayoutTemplates(a.templates);
  if (templates.empty()) {
    throw ValidationError("no *.json templates in " + a.templates);
  }
  corpus::CorpusRequest request;
  request.per_template = a.per_template;
  request.seed = a.seed;
  for (const std::string& c : a.counts) {
    const auto eq = c.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ValidationError("--count expects ID=N, got '" + c + "'");
    }
    try {
      request.counts[c.substr(0, eq)] = std::stoul(c.substr(eq + 1));
    } catch (const std::exception&) {
      throw ValidationError("--count expects ID=N, got '" + c + "'");
    }
  }
  const std::vector<corpus::GeneratedDocument> docs =
      corpus::GenerateCorpus(records, templates, request);

  fs::create_directories(a.out);
  ordered_json manifest;
  ordered_json inputs = {{"records", a.records},
                         {"templates", a.templates},
                         {"per_template", a.per_template},
                         {"seed", a.seed},
                         {"counts", request.counts}};
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char ch : inputs.dump()) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  char hash[17];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(h));
  manifest["config"] = inputs;
  manifest["config_hash"] = hash;
  ordered_json per_template = ordered_json::object();
  ordered_json entries = ordered_json::array();
  std::size_t warnings = 0;
  for (const corpus::GeneratedDocument& g : docs) {
    corpus::SaveAnnotations(g.doc, fs::path(a.out) / (g.doc.doc_id + ".csv"));
    const std::string tid = g.doc.template_id.value_or("");
    per_template[tid] = per_template.value(tid, 0) + 1;
    ordered_json entry = {{"doc_id", g.doc.doc_id},
                          {"template_id", tid},
                          {"record_index", g.record_index},
                          {"tokens", g.doc.size()}};
    if (!g.report.warnings.empty()) {
      entry["warnings"] = g.report.warnings;
      warnings += g.report.warnings.size();
    }
    entries.push_back(std::move(entry));
  }
  manifest["total"] = docs.size();
  manifest["per_template"] = std::move(per_template);
  manifest["truncation_warnings"] = warnings;
  manifest["documents"] = std::move(entries);
  WriteFile(fs::path(a.out) / "manifest.json", manifest.dump(2) + "\n");
  std::cout << "wrote " << docs.size() << " documents to " << a.out << " ("
            << warnings << " truncation warnings)\n";
  return 0;
}

// ---- train ----------------------------------------------------------------

struct TrainArgs {
  std::string model;
  std::string config;
};

int Train(const TrainArgs& a) {
  const pipeline::RunConfig cfg = pipeline::LoadRunConfig(a.config);
  const std::vector<corpus::LabeledDocument> docs =
      corpus::LoadCorpusDir(cfg.corpus_dir);
  if (docs.empty()) {
    throw ValidationError("no annotation files in " + cfg.corpus_dir.string());
  }
  const corpus::CorpusSplit split = corpus::SplitCorpus(docs, cfg.split);
  fs::create_directories(cfg.checkpoints_dir);
  fs::create_directories(cfg.reports_dir);

  const auto log_step = [](const nn::StepMetrics& m) {
    if (m.step % 25 == 0 || m.step == 1) {
      std::printf("step %4d  train %.5f  val %.5f\n", m.step, m.train_loss,
                  m.val_loss);
      std::fflush(stdout);
    }
  };
  nn::ModelCheckpoint ckpt;
  std::string file;
  pipeline::Extractor extractor;
  pipeline::ExtractorMode mode;
  if (a.model == "nlp") {
    ckpt = pipeline::TrainNlp(split.train, split.val, cfg, log_step);
    extractor.nlp = pipeline::NlpFromCheckpoint(ckpt);
    file = pipeline::kNlpCheckpoint;
    mode = pipeline::ExtractorMode::kNlp;
  } else if (a.model == "vision") {
    ckpt = pipeline::TrainVision(split.train, split.val, cfg, log_step);
    extractor.vision = pipeline::VisionFromCheckpoint(ckpt);
    file = pipeline::kVisionCheckpoint;
    mode = pipeline::ExtractorMode::kVision;
  } else {
    extractor = pipeline::LoadExtractor(cfg.checkpoints_dir, false);
    ckpt = pipeline::TrainFusion(split.train, split.val, extractor.nlp,
                                 extractor.vision, cfg, log_step);
    extractor.fusion = pipeline::FusionFromCheckpoint(ckpt);
    file = pipeline::kFusionCheckpoint;
    mode = pipeline::ExtractorMode::kFused;
  }
  ckpt.metadata["config_hash"] = pipeline::ConfigHash(cfg);
  nn::SaveCheckpoint(ckpt, cfg.checkpoints_dir / file);
  WriteFile(cfg.reports_dir / (a.model + "_metrics.csv"),
            pipeline::MetricsCsv(ckpt.history));
  const eval::PrfReport val =
      pipeline::EvaluateTokens(extractor, split.val, mode);
  WriteFile(cfg.reports_dir / (a.model + "_val_report.json"),
            eval::PrfReportJson(val));
  std::printf("validation micro F1 %.4f  macro F1 %.4f\n", val.micro.f1,
              val.macro.f1);
  std::cout << "checkpoint " << (cfg.checkpoints_dir / file).string() << "\n";
  return 0;
}

// ---- extract --------------------------------------------------------------

struct ExtractArgs {
  std::string doc;
  std::string vision_pred;
  std::string out;
  std::string config;
  std::string checkpoints;
  std::string mode = "fused";
};

int Extract(const ExtractArgs& a) {
  fs::path checkpoints = a.checkpoints;
  if (checkpoints.empty()) {
    checkpoints = a.config.empty()
                      ? fs::path("checkpoints")
                      : pipeline::LoadRunConfig(a.config).checkpoints_dir;
  }
  const pipeline::ExtractorMode mode = pipeline::ParseMode(a.mode);
  const pipeline::Extractor extractor =
      pipeline::LoadExtractor(checkpoints, mode == pipeline::ExtractorMode::kFused);

  std::map<std::string, vision::PagePrediction> imported;
  if (!a.vision_pred.empty()) {
    for (vision::PagePrediction& p : vision::ImportPagePredictions(a.vision_pred)) {
      imported[p.doc_id] = std::move(p);
    }
  }
  const bool batch = fs::is_directory(a.doc);
  const std::vector<fs::path> inputs =
      batch ? FilesWithExtension(a.doc, ".csv") : std::vector<fs::path>{a.doc};

  std::vector<corpus::RecordLine> records;
  for (const fs::path& input : inputs) {
    const corpus::LabeledDocument doc = corpus::LoadAnnotations(input);
    const vision::PagePrediction* page = nullptr;
    if (!a.vision_pred.empty()) {
      const auto it = imported.find(doc.doc_id);
      if (it == imported.end()) {
        std::string have;
        for (const auto& [id, p] : imported) have += " " + id;
        throw ValidationError("no vision prediction for doc_id '" + doc.doc_id +
                              "' in " + a.vision_pred + " (has:" + have + ")");
      }
      page = &it->second;
    }
    const std::vector<Label> labels = extractor.Predict(doc, mode, page);
    const fs::path csv = batch ? fs::path(a.out) / input.filename() : fs::path(a.out);
    if (csv.has_parent_path()) fs::create_directories(csv.parent_path());
    corpus::SaveAnnotations(doc, csv, &labels);
    records.push_back({doc.doc_id, fusion::ExtractRecord(doc, labels)});
  }
  const fs::path record_path =
      batch ? fs::path(a.out) / "records.jsonl"
            : fs::path(a.out).replace_extension(".jsonl");
  corpus::WriteRecordLines(record_path, records);
  std::cout << "extracted " << records.size() << " document(s); records in "
            << record_path.string() << "\n";
  return 0;
}

// ---- eval / compare -------------------------------------------------------

std::map<std::string, corpus::LabeledDocument> LoadDocsById(const fs::path& dir) {
  std::map<std::string, corpus::LabeledDocument> out;
  for (corpus::LabeledDocument& d : corpus::LoadCorpusDir(dir)) {
    const std::string id = d.doc_id;
    if (!out.emplace(id, std::move(d)).second) {
      throw ValidationError("duplicate doc_id '" + id + "' in " + dir.string());
    }
  }
  return out;
}

eval::RecordSet GoldRecords(
    const std::map<std::string, corpus::LabeledDocument>& gold) {
  eval::RecordSet out;
  for (const auto& [id, doc] : gold) {
    out[id] = fusion::ExtractRecord(doc, doc.labels);
  }
  return out;
}

// Records from *.jsonl files with doc ids, or else from the
// predicted_label column of the CSVs.
eval::RecordSet PredictedRecords(const fs::path& dir) {
  eval::RecordSet out;
  const std::vector<fs::path> jsonl = FilesWithExtension(dir, ".jsonl");
  if (!jsonl.empty()) {
    for (const fs::path& f : jsonl) {
      for (corpus::RecordLine& line : corpus::ReadRecordLines(f)) {
        if (!line.doc_id) {
          throw ValidationError(f.string() + ": record without doc_id");
        }
        if (!out.emplace(*line.doc_id, std::move(line.record)).second) {
          throw ValidationError(f.string() + ": duplicate doc_id '" +
                                *line.doc_id + "'");
        }
      }
    }
    return out;
  }
  for (const fs::path& f : FilesWithExtension(dir, ".csv")) {
    std::vector<Label> predicted;
    const corpus::LabeledDocument doc = corpus::LoadAnnotations(f, &predicted);
    if (predicted.empty()) {
      throw ValidationError(f.string() + ": no predicted_label column");
    }
    out[doc.doc_id] = fusion::ExtractRecord(doc, predicted);
  }
  return out;
}

struct EvalArgs {
  std::string pred;
  std::string gold;
  std::string mode;
  std::string out = ".";
  double threshold = eval::kDefaultMatchThreshold;
  bool exclude_date_doi = false;
};

int Eval(const EvalArgs& a) {
  const auto gold = LoadDocsById(a.gold);
  const fs::path reports = fs::path(a.out) / "reports";
  if (a.mode == "token") {
    std::map<std::string, std::vector<Label>> predicted;
    for (const fs::path& f : FilesWithExtension(a.pred, ".csv")) {
      std::vector<Label> labels;
      const corpus::LabeledDocument doc = corpus::LoadAnnotations(f, &labels);
      if (labels.empty()) {
        throw ValidationError(f.string() + ": no predicted_label column");
      }
      predicted[doc.doc_id] = std::move(labels);
    }
    std::string misaligned;
    for (const auto& [id, doc] : gold) {
      if (!predicted.count(id)) misaligned += " " + id + " (no prediction)";
    }
    for (const auto& [id, labels] : predicted) {
      if (!gold.count(id)) misaligned += " " + id + " (no gold)";
    }
    if (!misaligned.empty()) {
      throw ValidationError("corpora do not align:" + misaligned);
    }
    std::vector<std::vector<Label>> p;
    std::vector<std::vector<Label>> g;
    for (const auto& [id, doc] : gold) {
      p.push_back(predicted.at(id));
      g.push_back(doc.labels);
    }
    const eval::PrfReport report = eval::TokenPrf(p, g);
    WriteFile(reports / "token_report.json", eval::PrfReportJson(report));
    WriteFile(reports / "token_report.txt", eval::PrfReportText(report));
    std::cout << eval::PrfReportText(report);
    return 0;
  }
  eval::MatchOptions options{a.threshold, a.exclude_date_doi};
  const eval::MatchReport report =
      eval::ExtractionF1(PredictedRecords(a.pred), GoldRecords(gold), options);
  WriteFile(reports / "field_report.json", eval::MatchReportJson(report, options));
  WriteFile(reports / "field_report.txt", eval::MatchReportText(report, options));
  std::cout << eval::MatchReportText(report, options);
  return 0;
}

struct CompareArgs {
  std::vector<std::string> runs;
  std::string gold;
  std::string out = ".";
  double threshold = eval::kDefaultMatchThreshold;
  bool exclude_date_doi = false;
};

int Compare(const CompareArgs& a) {
  const eval::RecordSet gold = GoldRecords(LoadDocsById(a.gold));
  std::vector<std::pair<std::string, eval::RecordSet>> runs;
  for (const std::string& r : a.runs) {
    const auto eq = r.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ValidationError("--runs expects NAME=DIR, got '" + r + "'");
    }
    runs.emplace_back(r.substr(0, eq), PredictedRecords(r.substr(eq + 1)));
  }
  const eval::MatchOptions options{a.threshold, a.exclude_date_doi};
  const eval::Comparison cmp = eval::CompareExtractors(runs, gold, options);
  const fs::path reports = fs::path(a.out) / "reports";
  WriteFile(reports / "comparison.json", eval::ComparisonJson(cmp));
  WriteFile(reports / "comparison.txt", eval::ComparisonText(cmp));
  std::cout << eval::ComparisonText(cmp);
  return 0;
}

// ---- gradcheck ------------------------------------------------------------

struct GradCheckArgs {
  int trials = 20;
  std::uint64_t seed = 0;
  double eps = 1e-5;
};

int GradCheck(const GradCheckArgs& a) {
  if (a.trials <= 0) throw ValidationError("--trials must be > 0");
  double worst = 0.0;
  for (const nn::GradCheckTrial& t : nn::RunGradCheckTrials(a.trials, a.seed, a.eps)) {
    std::printf("%-15s D=%2zu H=%zu T=%zu  max rel err %.3e  (%s)\n",
                t.architecture.c_str(), t.input_dim, t.hidden_dim, t.tokens,
                t.result.max_relative_error, t.result.worst_parameter.c_str());
    worst = std::max(worst, t.result.max_relative_error);
  }
  std::printf("max relative error %.3e (limit 1e-4)\n", worst);
  if (worst >= 1e-4) throw NumericalError("gradient check failed");
  return 0;
}

// ---- features dump --------------------------------------------------------

struct FeaturesArgs {
  std::string doc;
  int dim = pipeline::kDefaultEmbeddingDim;
  std::uint64_t seed = 0;
  std::string out;
};

int FeaturesDump(const FeaturesArgs& a) {
  const corpus::LabeledDocument doc = corpus::LoadAnnotations(a.doc);
  const features::HashingEmbedder embedder(a.dim, a.seed);
  const std::string dump =
      features::FormatFeatureDump(features::BuildFeatureSequence(doc, embedder));
  if (a.out.empty()) {
    std::cout << dump;
  } else {
    WriteFile(a.out, dump);
  }
  return 0;
}

int Run(int argc, char** argv) {
  CLI::App app{"Metadata extraction from the first page of German papers"};
  app.require_subcommand(1);

  GenRecordsArgs gr;
  auto* gen_records = app.add_subcommand("gen-records", "Synthesize metadata records");
  gen_records->add_option("--count", gr.count)->required();
  gen_records->add_option("--seed", gr.seed);
  gen_records->add_option("--out", gr.out)->required();

  std::string templates_out;
  auto* export_templates =
      app.add_subcommand("export-templates", "Write the built-in layout templates");
  export_templates->add_option("--out", templates_out)->required();

  GenCorpusArgs gc;
  auto* gen_corpus = app.add_subcommand("gen-corpus", "Render records into labeled pages");
  gen_corpus->add_option("--records", gc.records)->required();
  gen_corpus->add_option("--templates", gc.templates)->required();
  gen_corpus->add_option("--per-template", gc.per_template)->required();
  gen_corpus->add_option("--seed", gc.seed)->required();
  gen_corpus->add_option("--out", gc.out)->required();
  gen_corpus->add_option("--count", gc.counts, "Per-template override ID=N");

  TrainArgs tr;
  auto* train = app.add_subcommand("train", "Train one model");
  train->add_option("--model", tr.model)
      ->required()
      ->check(CLI::IsMember({"nlp", "vision", "fusion"}));
  train->add_option("--config", tr.config)->required();

  ExtractArgs ex;
  auto* extract = app.add_subcommand("extract", "Label tokens and extract metadata");
  extract->add_option("--doc", ex.doc, "Annotation CSV or a directory of them")
      ->required();
  extract->add_option("--vision-pred", ex.vision_pred);
  extract->add_option("--out", ex.out)->required();
  extract->add_option("--config", ex.config);
  extract->add_option("--checkpoints", ex.checkpoints);
  extract->add_option("--mode", ex.mode)
      ->check(CLI::IsMember({"fused", "nlp", "vision"}));

  EvalArgs ev;
  auto* evaluate = app.add_subcommand("eval", "Score predictions against gold");
  evaluate->add_option("--pred", ev.pred)->required();
  evaluate->add_option("--gold", ev.gold)->required();
  evaluate->add_option("--mode", ev.mode)
      ->required()
      ->check(CLI::IsMember({"token", "field"}));
  evaluate->add_option("--out", ev.out);
  evaluate->add_option("--threshold", ev.threshold);
  evaluate->add_flag("--exclude-date-doi", ev.exclude_date_doi);

  CompareArgs cp;
  auto* compare = app.add_subcommand("compare", "Field-level F1 table across runs");
  compare->add_option("--runs", cp.runs, "NAME=DIR")->required();
  compare->add_option("--gold", cp.gold)->required();
  compare->add_option("--out", cp.out);
  compare->add_option("--threshold", cp.threshold);
  compare->add_flag("--exclude-date-doi", cp.exclude_date_doi);

  GradCheckArgs gk;
  auto* gradcheck = app.add_subcommand("gradcheck", "Finite-difference gradient check");
  gradcheck->add_option("--trials", gk.trials);
  gradcheck->add_option("--seed", gk.seed);
  gradcheck->add_option("--eps", gk.eps);

  FeaturesArgs fa;
  auto* features_cmd = app.add_subcommand("features", "Feature utilities");
  features_cmd->require_subcommand(1);
  auto* dump = features_cmd->add_subcommand("dump", "Print the feature sequence");
  dump->add_option("--doc", fa.doc)->required();
  dump->add_option("--dim", fa.dim);
  dump->add_option("--seed", fa.seed);
  dump->add_option("--out", fa.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  if (*gen_records) return GenRecords(gr);
  if (*export_templates) return ExportTemplates(templates_out);
  if (*gen_corpus) return GenCorpus(gc);
  if (*train) return Train(tr);
  if (*extract) return Extract(ex);
  if (*evaluate) return Eval(ev);
  if (*compare) return Compare(cp);
  if (*gradcheck) return GradCheck(gk);
  return FeaturesDump(fa);
}

}  // namespace
}  // namespace metaex

int main(int argc, char** argv) {
  try {
    return metaex::Run(argc, argv);
  } catch (const metaex::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const metaex::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
