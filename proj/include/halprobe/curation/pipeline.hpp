#pragma once

#include <string>
#include <vector>

#include "halprobe/claims/lexicon.hpp"
#include "halprobe/curation/types.hpp"
#include "halprobe/gateway/gateway.hpp"

namespace halprobe::curation {

// Candidate sampling, claim extraction, binary self-probing and scoring for
// one task. Pure orchestration: all model access goes through the gateways,
// so a scripted mock makes every run deterministic. Safe to call from
// multiple worker threads.
class CurationPipeline {
 public:
  struct Options {
    std::string caption_prompt = "Describe the image in detail.";
    std::string qa_round1_prompt = "Describe the image.";
    bool two_round_qa = true;
    // Existence extraction normally runs on the captioning branch only; this
    // also applies it to QA responses.
    bool existence_on_qa = false;
    std::size_t probe_cap = 40;
    int extraction_max_tokens = 1024;
  };

  CurationPipeline(gateway::ModelGateway& target_model, gateway::ModelGateway& extraction_model,
                   claims::ObjectLexicon lexicon, SamplingConfig sampling, Options options = {});

  // Captioning branch: detailed caption, lexicon existence claims, templated
  // questions, probes, score. One CandidateResponse per sampled candidate.
  std::vector<CandidateResponse> run_caption_branch(const CurationTask& task) const;

  // QA branch: two-round prompting (question-relevant description, then the
  // final answer conditioned on it), semantic claims extracted from both
  // rounds, probes, score. Only the final answer becomes pair text.
  std::vector<CandidateResponse> run_qa_branch(const CurationTask& task) const;

  std::vector<CandidateResponse> run_task(const CurationTask& task) const;

  // The prompt used as the preference-pair prompt field for a task.
  std::string pair_prompt(const CurationTask& task) const;

  const Options& options() const { return options_; }
  const SamplingConfig& sampling() const { return sampling_; }

 private:
  gateway::SamplingParams candidate_params(int candidate_index) const;
  void probe_claims(const std::string& image, CandidateResponse& candidate) const;

  gateway::ModelGateway& target_;
  gateway::ModelGateway& extraction_;
  claims::ObjectLexicon lexicon_;
  SamplingConfig sampling_;
  Options options_;
};

}  // namespace halprobe::curation
