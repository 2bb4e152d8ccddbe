#include "halprobe/metrics/metrics.hpp"

#include <algorithm>

#include "halprobe/errors.hpp"

namespace halprobe::metrics {

using util::Ratio;

GenerativeMetrics generative_metrics(const std::vector<GenerationRecord>& records,
                                     const std::map<std::string, AnnotatedImage>& annotations,
                                     ChairAggregation aggregation) {
  GenerativeMetrics out;
  if (records.empty()) return out;

  Ratio chair_sum;
  Ratio cover_sum;
  Ratio cog_sum;
  std::int64_t corpus_hallucinated = 0;
  std::int64_t corpus_mentioned = 0;
  int hallucinated_responses = 0;

  for (const auto& record : records) {
    auto it = annotations.find(record.image_id);
    if (it == annotations.end()) {
      throw Error("no annotation for image_id: " + record.image_id);
    }
    const AnnotatedImage& ann = it->second;

    std::int64_t hallucinated = 0;
    std::int64_t on_target = 0;
    std::int64_t covered = 0;
    for (const auto& object : record.mentioned_objects) {
      if (ann.gt_objects.count(object)) {
        ++covered;
      } else {
        ++hallucinated;
        if (ann.hallucination_targets.count(object)) ++on_target;
      }
    }
    const auto mentioned = static_cast<std::int64_t>(record.mentioned_objects.size());

    if (mentioned > 0) chair_sum = chair_sum + Ratio(hallucinated, mentioned);
    corpus_hallucinated += hallucinated;
    corpus_mentioned += mentioned;
    if (!ann.gt_objects.empty()) {
      cover_sum = cover_sum + Ratio(covered, static_cast<std::int64_t>(ann.gt_objects.size()));
    }
    if (hallucinated > 0) {
      ++hallucinated_responses;
      cog_sum = cog_sum + Ratio(on_target, hallucinated);
    }
  }

  const auto n = static_cast<std::int64_t>(records.size());
  if (aggregation == ChairAggregation::PerResponseMean) {
    out.chair = chair_sum / n;
  } else {
    out.chair = corpus_mentioned > 0 ? Ratio(corpus_hallucinated, corpus_mentioned) : Ratio();
  }
  out.cover = cover_sum / n;
  out.hal = Ratio(hallucinated_responses, n);
  out.cog_defined = hallucinated_responses > 0;
  out.cog = out.cog_defined ? cog_sum / hallucinated_responses : Ratio();
  return out;
}

ObjHalRates objhal_rates(const std::vector<ObjHalRecord>& per_response) {
  std::int64_t hallucinated = 0;
  std::int64_t total = 0;
  std::int64_t flagged_responses = 0;
  for (const auto& record : per_response) {
    if (record.n_hallucinated_mentions > record.n_total_mentions ||
        record.n_hallucinated_mentions < 0) {
      throw PreconditionError("objhal: hallucinated mentions must be within [0, total]");
    }
    hallucinated += record.n_hallucinated_mentions;
    total += record.n_total_mentions;
    if (record.has_hallucinated_sentence) ++flagged_responses;
  }
  ObjHalRates rates;
  rates.resp_rate = per_response.empty()
                        ? Ratio()
                        : Ratio(flagged_responses, static_cast<std::int64_t>(per_response.size()));
  rates.ment_defined = total > 0;
  rates.ment_rate = rates.ment_defined ? Ratio(hallucinated, total) : Ratio();
  return rates;
}

std::vector<std::string> split_sentences(const std::string& text) {
  std::vector<std::string> sentences;
  std::size_t start = 0;
  for (std::size_t i = 0; i + 1 < text.size(); ++i) {
    if ((text[i] == '.' || text[i] == '!' || text[i] == '?') && text[i + 1] == ' ') {
      sentences.push_back(text.substr(start, i - start + 1));
      start = i + 2;
    }
  }
  if (start < text.size()) sentences.push_back(text.substr(start));
  return sentences;
}

ObjHalRecord objhal_record_from_caption(const std::string& caption,
                                        const claims::ObjectLexicon& lexicon,
                                        const std::set<std::string>& gt_objects) {
  ObjHalRecord record;
  // Mention-level counts over the whole caption (deduplicated objects).
  for (const auto& object : claims::extract_object_claims(caption, lexicon)) {
    ++record.n_total_mentions;
    if (!gt_objects.count(object)) ++record.n_hallucinated_mentions;
  }
  for (const auto& sentence : split_sentences(caption)) {
    for (const auto& object : claims::extract_object_claims(sentence, lexicon)) {
      if (!gt_objects.count(object)) {
        record.has_hallucinated_sentence = true;
        return record;
      }
    }
  }
  return record;
}

namespace {

PrfMetrics compute_prf(const std::vector<const DiscriminativeRecord*>& records) {
  PrfMetrics m;
  int correct = 0;
  for (const auto* record : records) {
    ++m.total;
    const bool gt_yes = record->gt_answer == gateway::BinaryAnswer::Yes;
    const bool pred_yes = record->pred == gateway::BinaryAnswer::Yes;
    if (record->pred != gateway::BinaryAnswer::Unparseable && record->pred == record->gt_answer) {
      ++correct;
    }
    if (gt_yes && pred_yes) ++m.true_positive;
    if (!gt_yes && pred_yes) ++m.false_positive;
    if (gt_yes && !pred_yes) ++m.false_negative;
  }
  m.accuracy = Ratio(correct, m.total);
  const int predicted_positive = m.true_positive + m.false_positive;
  const int actual_positive = m.true_positive + m.false_negative;
  m.precision = predicted_positive > 0 ? Ratio(m.true_positive, predicted_positive) : Ratio(1, 1);
  m.recall = actual_positive > 0 ? Ratio(m.true_positive, actual_positive) : Ratio(1, 1);
  const Ratio pr_sum = m.precision + m.recall;
  m.f1 = pr_sum.num == 0 ? Ratio() : (Ratio(2, 1) * m.precision * m.recall) / pr_sum;
  return m;
}

}  // namespace

DiscriminativeReport discriminative_metrics(const std::vector<DiscriminativeRecord>& records) {
  if (records.empty()) throw PreconditionError("discriminative metrics require records");
  for (const auto& record : records) {
    if (record.gt_answer == gateway::BinaryAnswer::Unparseable) {
      throw PreconditionError("ground-truth answers must be Yes or No: " + record.question_id);
    }
  }

  DiscriminativeReport report;
  std::vector<const DiscriminativeRecord*> all;
  std::map<claims::ClaimCategory, std::vector<const DiscriminativeRecord*>> by_category;
  for (const auto& record : records) {
    all.push_back(&record);
    by_category[record.category].push_back(&record);
  }
  report.overall = compute_prf(all);
  for (const auto& [category, group] : by_category) {
    report.per_category[category] = compute_prf(group);
  }
  return report;
}

}  // namespace halprobe::metrics
