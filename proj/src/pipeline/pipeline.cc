#include "metaex/pipeline/pipeline.h"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "metaex/errors.h"
#include "metaex/features/feature_sequence.h"
#include "metaex/features/layout_features.h"
#include "metaex/fusion/fusion.h"
#include "metaex/random.h"
#include "metaex/vision/region_features.h"

namespace metaex::pipeline {

namespace {

std::string Num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

const std::string& Meta(const nn::ModelCheckpoint& ckpt,
                        const std::string& key) {
  const auto it = ckpt.metadata.find(key);
  if (it == ckpt.metadata.end()) {
    throw ValidationError("checkpoint metadata lacks '" + key + "'");
  }
  return it->second;
}

double MetaDouble(const nn::ModelCheckpoint& ckpt, const std::string& key) {
  const std::string& s = Meta(ckpt, key);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ValidationError("checkpoint metadata '" + key + "' is not a number");
  }
  return v;
}

std::uint64_t MetaU64(const nn::ModelCheckpoint& ckpt, const std::string& key) {
  const std::string& s = Meta(ckpt, key);
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ValidationError("checkpoint metadata '" + key + "' is not an integer");
  }
  return v;
}

std::vector<int> GoldIndices(const corpus::LabeledDocument& doc) {
  std::vector<int> gold;
  gold.reserve(doc.size());
  for (const Label l : doc.labels) gold.push_back(static_cast<int>(Index(l)));
  return gold;
}

nn::BiLstmLabeler LabelerDonor(const nn::ModelCheckpoint& ckpt) {
  const nn::Matrix& w_in = nn::FindTensor(ckpt, "forward.w_input");
  const nn::Matrix& w_out = nn::FindTensor(ckpt, "out.weight");
  return nn::ZeroBiLstmLabeler(w_in.cols(), w_in.rows() / 4, w_out.rows());
}

// Model initialization draws from a stream separate from batch shuffling.
std::uint64_t InitSeed(const nn::TrainConfig& cfg) {
  return DeriveSeed(cfg.seed, 1);
}

}  // namespace

nn::Matrix NlpDistributions(const NlpModel& model,
                            const corpus::LabeledDocument& doc) {
  return nn::Predict(model.labeler,
                     features::BuildFeatureSequence(doc, model.embedder));
}

nn::Matrix VisionDistributionsFor(const VisionModel& model,
                                  const corpus::LabeledDocument& doc) {
  return vision::VisionDistributions(model.classifier, doc, model.cfg);
}

std::vector<nn::Example> NlpExamples(
    const std::vector<corpus::LabeledDocument>& docs,
    const features::Embedder& embedder) {
  std::vector<nn::Example> out;
  out.reserve(docs.size());
  for (const corpus::LabeledDocument& d : docs) {
    out.push_back({features::BuildFeatureSequence(d, embedder), GoldIndices(d)});
  }
  return out;
}

std::vector<nn::Example> VisionExamples(
    const std::vector<corpus::LabeledDocument>& docs,
    const vision::VisionConfig& cfg) {
  std::vector<nn::Example> out;
  out.reserve(docs.size());
  for (const corpus::LabeledDocument& d : docs) {
    out.push_back(vision::RegionExample(d, cfg));
  }
  return out;
}

std::vector<nn::Example> FusionExamples(
    const std::vector<corpus::LabeledDocument>& docs, const NlpModel& nlp,
    const VisionModel& vision) {
  std::vector<nn::Example> out;
  out.reserve(docs.size());
  for (const corpus::LabeledDocument& d : docs) {
    out.push_back({fusion::Fuse(NlpDistributions(nlp, d),
                                VisionDistributionsFor(vision, d)),
                   GoldIndices(d)});
  }
  return out;
}

nn::ModelCheckpoint TrainNlp(const std::vector<corpus::LabeledDocument>& train,
                             const std::vector<corpus::LabeledDocument>& val,
                             const RunConfig& cfg,
                             const nn::StepCallback& on_step) {
  const features::HashingEmbedder embedder(cfg.embedding_dim,
                                           cfg.embedding_seed);
  const std::vector<nn::Example> train_ex = NlpExamples(train, embedder);
  const std::vector<nn::Example> val_ex = NlpExamples(val, embedder);
  const std::size_t dim = features::kNumLayoutFeatures +
                          static_cast<std::size_t>(cfg.embedding_dim);
  auto result = nn::Train(
      nn::InitBiLstmLabeler(dim, cfg.nlp_hidden, kNumLabels, InitSeed(cfg.nlp)),
      std::span<const nn::Example>(train_ex),
      std::span<const nn::Example>(val_ex), cfg.nlp, on_step);
  nn::ModelCheckpoint ckpt =
      nn::MakeCheckpoint(std::move(result.model), cfg.nlp,
                         std::move(result.history));
  ckpt.metadata["role"] = "nlp";
  ckpt.metadata["embedding_dim"] = std::to_string(cfg.embedding_dim);
  ckpt.metadata["embedding_seed"] = std::to_string(cfg.embedding_seed);
  return ckpt;
}

nn::ModelCheckpoint TrainVision(
    const std::vector<corpus::LabeledDocument>& train,
    const std::vector<corpus::LabeledDocument>& val, const RunConfig& cfg,
    const nn::StepCallback& on_step) {
  const std::vector<nn::Example> train_ex =
      VisionExamples(train, cfg.vision_cfg);
  const std::vector<nn::Example> val_ex = VisionExamples(val, cfg.vision_cfg);
  auto result = nn::Train(vision::InitRegionClassifier(InitSeed(cfg.vision)),
                          std::span<const nn::Example>(train_ex),
                          std::span<const nn::Example>(val_ex), cfg.vision,
                          on_step);
  nn::ModelCheckpoint ckpt = nn::MakeCheckpoint(
      std::move(result.model), cfg.vision, std::move(result.history));
  const vision::VisionConfig& v = cfg.vision_cfg;
  ckpt.metadata["role"] = "vision";
  ckpt.metadata["line_gap_multiplier"] =
      Num(v.segmentation.line_gap_multiplier);
  ckpt.metadata["column_gap_spaces"] = Num(v.segmentation.column_gap_spaces);
  ckpt.metadata["nms_iou"] = Num(v.iou_threshold);
  ckpt.metadata["nms_keep"] = std::to_string(v.keep);
  return ckpt;
}

nn::ModelCheckpoint TrainFusion(
    const std::vector<corpus::LabeledDocument>& train,
    const std::vector<corpus::LabeledDocument>& val, const NlpModel& nlp,
    const VisionModel& vision, const RunConfig& cfg,
    const nn::StepCallback& on_step) {
  const std::vector<nn::Example> train_ex = FusionExamples(train, nlp, vision);
  const std::vector<nn::Example> val_ex = FusionExamples(val, nlp, vision);
  auto result = nn::Train(
      nn::InitBiLstmLabeler(fusion::kFusedDim, cfg.fusion_hidden, kNumLabels,
                            InitSeed(cfg.fusion)),
      std::span<const nn::Example>(train_ex),
      std::span<const nn::Example>(val_ex), cfg.fusion, on_step);
  nn::ModelCheckpoint ckpt = nn::MakeCheckpoint(
      std::move(result.model), cfg.fusion, std::move(result.history));
  ckpt.metadata["role"] = "fusion";
  return ckpt;
}

NlpModel NlpFromCheckpoint(const nn::ModelCheckpoint& ckpt) {
  const std::uint64_t dim = MetaU64(ckpt, "embedding_dim");
  NlpModel model{nn::RestoreModel(ckpt, LabelerDonor(ckpt)),
                 features::HashingEmbedder(static_cast<int>(dim),
                                           MetaU64(ckpt, "embedding_seed"))};
  if (model.labeler.input_dim() !=
      features::kNumLayoutFeatures + static_cast<std::size_t>(dim)) {
    throw ValidationError("nlp checkpoint input width does not match its "
                          "embedding dimension");
  }
  return model;
}

VisionModel VisionFromCheckpoint(const nn::ModelCheckpoint& ckpt) {
  const nn::Matrix& w_hidden = nn::FindTensor(ckpt, "hidden.weight");
  const nn::Matrix& w_out = nn::FindTensor(ckpt, "out.weight");
  VisionModel model;
  model.classifier = nn::RestoreModel(
      ckpt, nn::ZeroMlp(w_hidden.cols(), w_hidden.rows(), w_out.rows()));
  if (model.classifier.input_dim() != vision::kNumRegionFeatures) {
    throw ValidationError("vision checkpoint expects " +
                          std::to_string(model.classifier.input_dim()) +
                          " region features");
  }
  model.cfg.segmentation.line_gap_multiplier =
      MetaDouble(ckpt, "line_gap_multiplier");
  model.cfg.segmentation.column_gap_spaces =
      MetaDouble(ckpt, "column_gap_spaces");
  model.cfg.iou_threshold = MetaDouble(ckpt, "nms_iou");
  model.cfg.keep = MetaU64(ckpt, "nms_keep");
  return model;
}

nn::BiLstmLabeler FusionFromCheckpoint(const nn::ModelCheckpoint& ckpt) {
  nn::BiLstmLabeler model = nn::RestoreModel(ckpt, LabelerDonor(ckpt));
  if (model.input_dim() != fusion::kFusedDim) {
    throw ValidationError("fusion checkpoint input width must be 20");
  }
  return model;
}

std::string_view ModeName(ExtractorMode mode) {
  switch (mode) {
    case ExtractorMode::kFused:
      return "fused";
    case ExtractorMode::kNlp:
      return "nlp";
    case ExtractorMode::kVision:
      return "vision";
  }
  return "fused";
}

ExtractorMode ParseMode(std::string_view name) {
  if (name == "fused") return ExtractorMode::kFused;
  if (name == "nlp") return ExtractorMode::kNlp;
  if (name == "vision") return ExtractorMode::kVision;
  throw ValidationError("unknown mode '" + std::string(name) +
                        "'; expected fused, nlp or vision");
}

std::vector<Label> Extractor::Predict(
    const corpus::LabeledDocument& doc, ExtractorMode mode,
    const vision::PagePrediction* imported) const {
  const auto vision_dists = [&] {
    return imported != nullptr ? vision::WordProbabilityMap(*imported, doc)
                               : VisionDistributionsFor(vision, doc);
  };
  switch (mode) {
    case ExtractorMode::kNlp:
      return fusion::ArgmaxLabels(NlpDistributions(nlp, doc));
    case ExtractorMode::kVision:
      return fusion::ArgmaxLabels(vision_dists());
    case ExtractorMode::kFused:
      break;
  }
  if (!fusion) throw ValidationError("no fusion model loaded");
  return fusion::PredictLabels(
             *fusion, fusion::Fuse(NlpDistributions(nlp, doc), vision_dists()))
      .labels;
}

Extractor LoadExtractor(const std::filesystem::path& checkpoints_dir,
                        bool need_fusion) {
  const auto load = [&](const char* name) {
    const std::filesystem::path path = checkpoints_dir / name;
    if (!std::filesystem::exists(path)) {
      throw ValidationError("missing checkpoint " + path.string());
    }
    return nn::LoadCheckpoint(path);
  };
  Extractor ex;
  ex.nlp = NlpFromCheckpoint(load(kNlpCheckpoint));
  ex.vision = VisionFromCheckpoint(load(kVisionCheckpoint));
  if (need_fusion) ex.fusion = FusionFromCheckpoint(load(kFusionCheckpoint));
  return ex;
}

eval::PrfReport EvaluateTokens(const Extractor& extractor,
                               const std::vector<corpus::LabeledDocument>& docs,
                               ExtractorMode mode) {
  std::vector<std::vector<Label>> pred;
  std::vector<std::vector<Label>> gold;
  for (const corpus::LabeledDocument& d : docs) {
    pred.push_back(extractor.Predict(d, mode));
    gold.push_back(d.labels);
  }
  return eval::TokenPrf(pred, gold);
}

std::string MetricsCsv(const std::vector<nn::StepMetrics>& history) {
  std::string out = "step,train_loss,val_loss\n";
  for (const nn::StepMetrics& m : history) {
    out += std::to_string(m.step) + "," + Num(m.train_loss) + "," +
           (std::isnan(m.val_loss) ? std::string() : Num(m.val_loss)) + "\n";
  }
  return out;
}

}  // namespace metaex::pipeline
