#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "halprobe/claims/claim.hpp"
#include "halprobe/claims/lexicon.hpp"
#include "halprobe/gateway/types.hpp"
#include "halprobe/util/ratio.hpp"

namespace halprobe::metrics {

struct AnnotatedImage {
  std::string image_id;
  std::set<std::string> gt_objects;
  // Human-curated hallucination target list; the Cog numerator.
  std::set<std::string> hallucination_targets;
};

struct GenerationRecord {
  std::string image_id;
  std::vector<std::string> mentioned_objects;  // canonical names, first-occurrence order
};

struct DiscriminativeRecord {
  std::string question_id;
  gateway::BinaryAnswer gt_answer = gateway::BinaryAnswer::No;  // never Unparseable
  gateway::BinaryAnswer pred = gateway::BinaryAnswer::Unparseable;
  claims::ClaimCategory category = claims::ClaimCategory::Existence;
};

enum class ChairAggregation {
  PerResponseMean,  // mean over responses of |hallucinated| / |mentioned|
  CorpusLevel,      // sum |hallucinated| / sum |mentioned|
};

// All values are exact rationals; .value() converts to double.
struct GenerativeMetrics {
  util::Ratio chair;
  util::Ratio cover;
  util::Ratio hal;
  util::Ratio cog;
  bool cog_defined = false;  // false when no response hallucinated
};

GenerativeMetrics generative_metrics(const std::vector<GenerationRecord>& records,
                                     const std::map<std::string, AnnotatedImage>& annotations,
                                     ChairAggregation aggregation = ChairAggregation::PerResponseMean);

struct ObjHalRecord {
  int n_hallucinated_mentions = 0;
  int n_total_mentions = 0;
  bool has_hallucinated_sentence = false;
};

struct ObjHalRates {
  util::Ratio resp_rate;
  util::Ratio ment_rate;
  bool ment_defined = true;  // false when no record carries any mention
};

ObjHalRates objhal_rates(const std::vector<ObjHalRecord>& per_response);

// Splits on ". ", "! ", "? " boundaries; keeps terminators with the sentence.
std::vector<std::string> split_sentences(const std::string& text);

// Per-sentence hallucinated-mention detection for a caption: a sentence is
// hallucinated iff it mentions at least one object outside gt_objects.
ObjHalRecord objhal_record_from_caption(const std::string& caption,
                                        const claims::ObjectLexicon& lexicon,
                                        const std::set<std::string>& gt_objects);

struct PrfMetrics {
  util::Ratio accuracy;
  util::Ratio precision;
  util::Ratio recall;
  util::Ratio f1;
  int true_positive = 0;
  int false_positive = 0;
  int false_negative = 0;
  int total = 0;
};

struct DiscriminativeReport {
  PrfMetrics overall;
  std::map<claims::ClaimCategory, PrfMetrics> per_category;
};

// Positive class is Yes. An Unparseable prediction is never correct for
// accuracy and counts as a negative prediction for precision/recall. With no
// positive ground truth (or no positive predictions) recall (or precision) is
// vacuously 1; F1 is 0 when precision + recall is 0.
DiscriminativeReport discriminative_metrics(const std::vector<DiscriminativeRecord>& records);

}  // namespace halprobe::metrics
