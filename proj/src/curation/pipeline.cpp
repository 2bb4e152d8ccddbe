#include "halprobe/curation/pipeline.hpp"

#include <set>

#include "halprobe/claims/semantic.hpp"
#include "halprobe/errors.hpp"

namespace halprobe::curation {

CurationPipeline::CurationPipeline(gateway::ModelGateway& target_model,
                                   gateway::ModelGateway& extraction_model,
                                   claims::ObjectLexicon lexicon, SamplingConfig sampling,
                                   Options options)
    : target_(target_model),
      extraction_(extraction_model),
      lexicon_(std::move(lexicon)),
      sampling_(std::move(sampling)),
      options_(std::move(options)) {
  sampling_.validate();
}

gateway::SamplingParams CurationPipeline::candidate_params(int candidate_index) const {
  gateway::SamplingParams params = sampling_.candidate_sampling;
  if (params.seed) params.seed = *params.seed + candidate_index;
  return params;
}

namespace {

// Keeps the first occurrence of each question, then truncates to the cap.
void dedupe_and_cap(std::vector<claims::AtomicClaim>& claim_list, std::size_t cap) {
  std::set<std::string> seen;
  std::vector<claims::AtomicClaim> result;
  for (auto& claim : claim_list) {
    if (!seen.insert(claim.question).second) continue;
    result.push_back(std::move(claim));
    if (result.size() >= cap) break;
  }
  claim_list = std::move(result);
}

}  // namespace

void CurationPipeline::probe_claims(const std::string& image,
                                    CandidateResponse& candidate) const {
  for (const auto& claim : candidate.claims) {
    const std::string raw = target_.complete_binary(image, claim.question);
    candidate.probes.push_back(
        {claim.question, raw, gateway::parse_binary(raw), claim.category});
  }
  candidate.consistency = score(candidate.probes);
}

std::vector<CandidateResponse> CurationPipeline::run_caption_branch(
    const CurationTask& task) const {
  task.validate();
  if (task.kind != TaskKind::Captioning) {
    throw PreconditionError("run_caption_branch requires a captioning task: " + task.task_id);
  }

  std::vector<CandidateResponse> candidates;
  for (int i = 0; i < sampling_.n_candidates; ++i) {
    CandidateResponse candidate;
    try {
      gateway::ChatRequest request;
      request.image = task.image;
      request.turns = {{"user", options_.caption_prompt}};
      request.sampling = candidate_params(i);
      candidate.text = target_.complete(request);

      for (const auto& mention : claims::extract_object_mentions(candidate.text, lexicon_)) {
        candidate.claims.push_back({mention.span, claims::ClaimCategory::Existence,
                                    claims::template_existence_question(mention.canonical),
                                    false});
      }
      dedupe_and_cap(candidate.claims, options_.probe_cap);
      probe_claims(task.image, candidate);
    } catch (const gateway::GatewayError& error) {
      candidate.complete = false;
      candidate.failure_reason = error.what();
      candidate.probes.clear();
      candidate.consistency = {};
    }
    candidates.push_back(std::move(candidate));
  }
  return candidates;
}

std::vector<CandidateResponse> CurationPipeline::run_qa_branch(const CurationTask& task) const {
  task.validate();
  if (task.kind != TaskKind::QA) {
    throw PreconditionError("run_qa_branch requires a qa task: " + task.task_id);
  }
  sampling_.validate();

  std::vector<CandidateResponse> candidates;
  for (int i = 0; i < sampling_.n_candidates; ++i) {
    CandidateResponse candidate;
    try {
      const gateway::SamplingParams params = candidate_params(i);

      if (options_.two_round_qa) {
        gateway::ChatRequest describe;
        describe.image = task.image;
        describe.turns = {{"user", options_.qa_round1_prompt}};
        describe.sampling = params;
        candidate.aux_description = target_.complete(describe);

        gateway::ChatRequest answer;
        answer.image = task.image;
        answer.turns = {{"user", *task.question + "\n" + *candidate.aux_description}};
        answer.sampling = params;
        candidate.text = target_.complete(answer);
      } else {
        gateway::ChatRequest answer;
        answer.image = task.image;
        answer.turns = {{"user", *task.question}};
        answer.sampling = params;
        candidate.text = target_.complete(answer);
      }

      const std::string extraction_source =
          candidate.aux_description ? *candidate.aux_description + "\n" + candidate.text
                                    : candidate.text;

      gateway::ChatRequest extraction_request;
      extraction_request.image = task.image;
      extraction_request.turns = {
          {"user", claims::build_semantic_extraction_prompt(extraction_source)}};
      extraction_request.sampling.temperature = 0.0;
      extraction_request.sampling.top_p = 1.0;
      extraction_request.sampling.max_tokens = options_.extraction_max_tokens;

      claims::SemanticExtractionResult extracted;
      try {
        extracted =
            claims::parse_semantic_claims(extraction_.complete(extraction_request), extraction_source);
      } catch (const claims::ParseError&) {
        // One retry with the same prompt; a second failure abandons the
        // candidate rather than scoring it partially.
        extracted =
            claims::parse_semantic_claims(extraction_.complete(extraction_request), extraction_source);
      }
      candidate.claims = std::move(extracted.claims);

      if (options_.existence_on_qa) {
        for (const auto& mention : claims::extract_object_mentions(extraction_source, lexicon_)) {
          candidate.claims.push_back({mention.span, claims::ClaimCategory::Existence,
                                      claims::template_existence_question(mention.canonical),
                                      false});
        }
      }
      dedupe_and_cap(candidate.claims, options_.probe_cap);
      probe_claims(task.image, candidate);
    } catch (const gateway::GatewayError& error) {
      candidate.complete = false;
      candidate.failure_reason = error.what();
      candidate.probes.clear();
      candidate.consistency = {};
    } catch (const claims::ParseError& error) {
      candidate.complete = false;
      candidate.failure_reason = error.what();
      candidate.probes.clear();
      candidate.consistency = {};
    } catch (const claims::SchemaError& error) {
      candidate.complete = false;
      candidate.failure_reason = error.what();
      candidate.probes.clear();
      candidate.consistency = {};
    }
    candidates.push_back(std::move(candidate));
  }
  return candidates;
}

std::vector<CandidateResponse> CurationPipeline::run_task(const CurationTask& task) const {
  return task.kind == TaskKind::Captioning ? run_caption_branch(task) : run_qa_branch(task);
}

std::string CurationPipeline::pair_prompt(const CurationTask& task) const {
  return task.kind == TaskKind::Captioning ? options_.caption_prompt : *task.question;
}

}  // namespace halprobe::curation
