#ifndef METAEX_PIPELINE_PIPELINE_H_
#define METAEX_PIPELINE_PIPELINE_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "metaex/corpus/document.h"
#include "metaex/eval/metrics.h"
#include "metaex/features/embedder.h"
#include "metaex/nn/checkpoint.h"
#include "metaex/nn/labeler.h"
#include "metaex/nn/mlp.h"
#include "metaex/nn/trainer.h"
#include "metaex/pipeline/run_config.h"
#include "metaex/vision/prediction.h"
#include "metaex/vision/surrogate.h"

namespace metaex::pipeline {

inline constexpr char kNlpCheckpoint[] = "nlp.ckpt";
inline constexpr char kVisionCheckpoint[] = "vision.ckpt";
inline constexpr char kFusionCheckpoint[] = "fusion.ckpt";

struct NlpModel {
  nn::BiLstmLabeler labeler;
  features::HashingEmbedder embedder{kDefaultEmbeddingDim, 0};
};

struct VisionModel {
  nn::Mlp classifier;
  vision::VisionConfig cfg;
};

// T x 10 distributions from each model.
nn::Matrix NlpDistributions(const NlpModel& model,
                            const corpus::LabeledDocument& doc);
nn::Matrix VisionDistributionsFor(const VisionModel& model,
                                  const corpus::LabeledDocument& doc);

// Training examples: gold labels as class indices next to the inputs.
std::vector<nn::Example> NlpExamples(
    const std::vector<corpus::LabeledDocument>& docs,
    const features::Embedder& embedder);
std::vector<nn::Example> VisionExamples(
    const std::vector<corpus::LabeledDocument>& docs,
    const vision::VisionConfig& cfg);
std::vector<nn::Example> FusionExamples(
    const std::vector<corpus::LabeledDocument>& docs, const NlpModel& nlp,
    const VisionModel& vision);

// Each trainer returns the trained model packed in a checkpoint, with the
// settings needed to rebuild it stored in the checkpoint metadata.
nn::ModelCheckpoint TrainNlp(const std::vector<corpus::LabeledDocument>& train,
                             const std::vector<corpus::LabeledDocument>& val,
                             const RunConfig& cfg,
                             const nn::StepCallback& on_step = {});
nn::ModelCheckpoint TrainVision(
    const std::vector<corpus::LabeledDocument>& train,
    const std::vector<corpus::LabeledDocument>& val, const RunConfig& cfg,
    const nn::StepCallback& on_step = {});
nn::ModelCheckpoint TrainFusion(
    const std::vector<corpus::LabeledDocument>& train,
    const std::vector<corpus::LabeledDocument>& val, const NlpModel& nlp,
    const VisionModel& vision, const RunConfig& cfg,
    const nn::StepCallback& on_step = {});

NlpModel NlpFromCheckpoint(const nn::ModelCheckpoint& ckpt);
VisionModel VisionFromCheckpoint(const nn::ModelCheckpoint& ckpt);
nn::BiLstmLabeler FusionFromCheckpoint(const nn::ModelCheckpoint& ckpt);

enum class ExtractorMode { kFused, kNlp, kVision };

std::string_view ModeName(ExtractorMode mode);
ExtractorMode ParseMode(std::string_view name);

// The three trained models. The fusion model is optional so that the
// submodels can be evaluated before it exists.
struct Extractor {
  NlpModel nlp;
  VisionModel vision;
  std::optional<nn::BiLstmLabeler> fusion;

  // Per-token labels. `imported` replaces the native vision surrogate.
  std::vector<metaex::Label> Predict(
      const corpus::LabeledDocument& doc,
      ExtractorMode mode = ExtractorMode::kFused,
      const vision::PagePrediction* imported = nullptr) const;
};

// Loads nlp.ckpt and vision.ckpt, plus fusion.ckpt when `need_fusion`.
// Missing files raise ValidationError naming the path.
Extractor LoadExtractor(const std::filesystem::path& checkpoints_dir,
                        bool need_fusion = true);

// Token-level report of `extractor` in `mode` over the documents.
eval::PrfReport EvaluateTokens(const Extractor& extractor,
                               const std::vector<corpus::LabeledDocument>& docs,
                               ExtractorMode mode);

// One line per step: "step,train_loss,val_loss".
std::string MetricsCsv(const std::vector<nn::StepMetrics>& history);

}  // namespace metaex::pipeline

#endif  // METAEX_PIPELINE_PIPELINE_H_
