#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>

#include "halprobe/metrics/metrics.hpp"

namespace halprobe::runstore {

struct EvaluateInputs {
  std::optional<std::filesystem::path> generations;     // {image_id, mentioned_objects[] | caption}
  std::optional<std::filesystem::path> annotations;     // {image_id, gt_objects[], hallucination_targets[]?}
  std::optional<std::filesystem::path> discriminative;  // {question_id, gt_answer, pred|raw_pred, category}
  std::optional<std::filesystem::path> objhal;          // {n_hallucinated, n_total, has_hallucinated_sentence} | {image_id, caption}
  std::optional<std::filesystem::path> lexicon;         // required when captions need extraction
  metrics::ChairAggregation chair_aggregation = metrics::ChairAggregation::PerResponseMean;
};

// Runs every metric family whose inputs are present and returns one JSON
// report. Schema errors carry the offending file and line number.
nlohmann::ordered_json evaluate_run(const EvaluateInputs& inputs);

// Renders the report as a small fixed-width table for terminals.
std::string render_report_table(const nlohmann::ordered_json& report);

}  // namespace halprobe::runstore
