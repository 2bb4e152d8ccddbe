#pragma once

#include <optional>
#include <string>
#include <vector>

#include "halprobe/claims/claim.hpp"
#include "halprobe/gateway/types.hpp"

namespace halprobe::curation {

enum class TaskKind { Captioning, QA };

const char* to_string(TaskKind kind);
TaskKind task_kind_from_string(const std::string& name);

// One image plus its prompt (captioning) or question (QA); the unit of
// pipeline work.
struct CurationTask {
  std::string task_id;
  std::string image;
  TaskKind kind = TaskKind::Captioning;
  std::optional<std::string> question;  // present iff kind == QA

  void validate() const;
};

struct BinaryProbe {
  std::string question;
  std::string raw_answer;
  gateway::BinaryAnswer answer = gateway::BinaryAnswer::Unparseable;
  claims::ClaimCategory claim_category = claims::ClaimCategory::Existence;
};

// K/T consistency bookkeeping for one candidate response.
struct ConsistencyScore {
  int k_no = 0;         // count of "No" answers (inconsistent claims)
  int t_total = 0;      // count of parseable probes
  int n_unparseable = 0;

  bool operator==(const ConsistencyScore&) const = default;
};

// k_no = #No, t_total = #parseable, n_unparseable = #Unparseable.
ConsistencyScore score(const std::vector<BinaryProbe>& probes);

struct CandidateResponse {
  std::string text;                           // y, the pair-able response
  std::optional<std::string> aux_description;  // c, QA two-round branch only
  std::vector<claims::AtomicClaim> claims;     // deduplicated and capped
  std::vector<BinaryProbe> probes;             // aligned 1:1 with claims
  ConsistencyScore consistency;
  bool complete = true;  // false when a probe or extraction failed
  std::string failure_reason;
};

struct SamplingConfig {
  int n_candidates = 3;
  gateway::SamplingParams candidate_sampling;

  void validate() const;
};

enum class RankStrategy { Occurrence, RelativeRatio };
enum class PairPolicy { AllPairs, BestVsWorst };

const char* to_string(RankStrategy strategy);
RankStrategy rank_strategy_from_string(const std::string& name);
const char* to_string(PairPolicy policy);
PairPolicy pair_policy_from_string(const std::string& name);

struct PreferencePair {
  std::string task_id;
  std::string image;
  std::string prompt;
  std::string chosen;
  std::string rejected;
  int k_chosen = 0;
  int t_chosen = 0;
  int k_rejected = 0;
  int t_rejected = 0;
  int claim_count_chosen = 0;
  int claim_count_rejected = 0;
  RankStrategy strategy = RankStrategy::Occurrence;
};

}  // namespace halprobe::curation
