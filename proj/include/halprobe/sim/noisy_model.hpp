#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <utility>
#include <vector>

#include "halprobe/claims/claim.hpp"
#include "halprobe/curation/types.hpp"
#include "halprobe/util/rng.hpp"

namespace halprobe::sim {

// Generative model of a noisily self-probing VLM: each candidate response
// carries a random number of claims, each claim is truly hallucinated with a
// fixed probability, and the simulated binary probe answers "No" to a
// hallucinated claim (resp. "Yes" to a grounded one) with per-category
// precision.
struct NoisyModelParams {
  double claim_hallucination_prob = 0.3;
  int claims_min = 3;
  int claims_max = 8;
  std::map<claims::ClaimCategory, double> neg_answer_precision;  // P(No | hallucinated)
  std::map<claims::ClaimCategory, double> pos_answer_precision;  // P(Yes | grounded)
  // Relative sampling weights; defaults to the captioning setting where all
  // probes are existence questions.
  std::vector<std::pair<claims::ClaimCategory, double>> category_mix = {
      {claims::ClaimCategory::Existence, 1.0}};
  std::uint64_t seed = 0;

  void validate() const;

  static NoisyModelParams from_json(const nlohmann::json& doc);
};

// Loads a named preset from a presets file ({"presets": {name: params...}}).
NoisyModelParams load_preset(const std::filesystem::path& path, const std::string& name);

enum class PairOutcome { Correct, Incorrect, TiedObserved };

struct PairRecord {
  std::size_t first = 0;
  std::size_t second = 0;
  PairOutcome outcome = PairOutcome::TiedObserved;
};

struct TrialOutcome {
  std::vector<int> true_hallucination_counts;  // per candidate
  std::vector<int> observed_k;                 // per candidate, via curation::score
  // One record per candidate pair with distinct true counts.
  std::vector<PairRecord> pair_records;
};

// Deterministic judgement of ranking correctness: for every pair with
// distinct true hallucination counts, Correct iff the truly-better candidate
// has strictly smaller observed K, TiedObserved iff the K values are equal.
std::vector<PairRecord> judge_pairs(const std::vector<int>& true_counts,
                                    const std::vector<int>& observed_k);

// One simulated task with the given RNG stream.
TrialOutcome simulate_task_with_rng(const NoisyModelParams& params, int n_candidates,
                                    util::Rng& rng);

// One simulated task seeded from params.seed.
TrialOutcome simulate_task(const NoisyModelParams& params, int n_candidates);

struct AccuracySummary {
  double accuracy = 0;  // correct / decisive; 0 when nothing was decisive
  std::int64_t correct = 0;
  std::int64_t incorrect = 0;
  std::int64_t tied_observed = 0;
  std::int64_t decisive = 0;  // correct + incorrect
};

// Fraction of truth-distinct candidate pairs, over n_trials independent
// seeded tasks, where consistency scoring recovers the true ordering. Pairs
// tied on observed K are excluded from the denominator. Trial t draws from a
// fresh stream seeded with params.seed + t, so results are independent of
// scheduling and reproducible.
AccuracySummary pairwise_ranking_accuracy(const NoisyModelParams& params, int n_candidates,
                                          int n_trials);

}  // namespace halprobe::sim
