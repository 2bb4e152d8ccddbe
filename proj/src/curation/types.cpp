#include "halprobe/curation/types.hpp"

#include "halprobe/errors.hpp"

namespace halprobe::curation {

const char* to_string(TaskKind kind) {
  return kind == TaskKind::Captioning ? "captioning" : "qa";
}

TaskKind task_kind_from_string(const std::string& name) {
  if (name == "captioning") return TaskKind::Captioning;
  if (name == "qa") return TaskKind::QA;
  throw ConfigError("unknown task kind: " + name);
}

void CurationTask::validate() const {
  if (task_id.empty()) throw ConfigError("task: task_id must be non-empty");
  if (image.empty()) throw ConfigError("task: image must be non-empty");
  if ((kind == TaskKind::QA) != question.has_value()) {
    throw ConfigError("task " + task_id + ": question must be present iff kind is qa");
  }
}

ConsistencyScore score(const std::vector<BinaryProbe>& probes) {
  ConsistencyScore result;
  for (const auto& probe : probes) {
    switch (probe.answer) {
      case gateway::BinaryAnswer::No:
        ++result.k_no;
        ++result.t_total;
        break;
      case gateway::BinaryAnswer::Yes:
        ++result.t_total;
        break;
      case gateway::BinaryAnswer::Unparseable:
        ++result.n_unparseable;
        break;
    }
  }
  return result;
}

void SamplingConfig::validate() const {
  if (n_candidates < 2) {
    throw PreconditionError("sampling: n_candidates must be >= 2 for pair construction");
  }
  candidate_sampling.validate();
}

const char* to_string(RankStrategy strategy) {
  return strategy == RankStrategy::Occurrence ? "occurrence" : "ratio";
}

RankStrategy rank_strategy_from_string(const std::string& name) {
  if (name == "occurrence") return RankStrategy::Occurrence;
  if (name == "ratio") return RankStrategy::RelativeRatio;
  throw ConfigError("unknown ranking strategy: " + name);
}

const char* to_string(PairPolicy policy) {
  return policy == PairPolicy::AllPairs ? "all" : "best-worst";
}

PairPolicy pair_policy_from_string(const std::string& name) {
  if (name == "all") return PairPolicy::AllPairs;
  if (name == "best-worst") return PairPolicy::BestVsWorst;
  throw ConfigError("unknown pair policy: " + name);
}

}  // namespace halprobe::curation
