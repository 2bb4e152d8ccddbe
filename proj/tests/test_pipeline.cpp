#include <doctest.h>

#include "halprobe/curation/pair_export.hpp"
#include "halprobe/curation/pipeline.hpp"
#include "halprobe/errors.hpp"
#include "halprobe/gateway/mock_transport.hpp"

using namespace halprobe;
using namespace halprobe::curation;

namespace {

gateway::ModelEndpointConfig mock_endpoint() {
  gateway::ModelEndpointConfig config;
  config.base_url = "mock://pipeline";
  config.model_id = "scripted";
  config.max_retries = 0;
  return config;
}

SamplingConfig seeded_sampling(int n = 3, std::int64_t seed = 100) {
  SamplingConfig sampling;
  sampling.n_candidates = n;
  sampling.candidate_sampling.seed = seed;
  return sampling;
}

claims::ObjectLexicon test_lexicon() {
  return claims::ObjectLexicon::from_json(
      {{"objects", {"dog", "cat", "ball", "tree"}}, {"synonyms", {{"puppy", "dog"}}}});
}

struct PipelineHarness {
  std::shared_ptr<gateway::MockTransport> mock;
  std::unique_ptr<gateway::ModelGateway> gw;
  std::unique_ptr<CurationPipeline> pipeline;

  PipelineHarness(const nlohmann::json& script, SamplingConfig sampling,
                  CurationPipeline::Options options = {}) {
    mock = std::make_shared<gateway::MockTransport>(gateway::MockTransport::from_json(script));
    gw = std::make_unique<gateway::ModelGateway>(mock_endpoint(), mock);
    pipeline = std::make_unique<CurationPipeline>(*gw, *gw, test_lexicon(), sampling, options);
  }
};

const nlohmann::json kCaptionScript = {
    {"entries",
     {
         {{"prompt", "Describe the image in detail."},
          {"seed", 100},
          {"response", "A dog with a ball."}},
         {{"prompt", "Describe the image in detail."},
          {"seed", 101},
          {"response", "A dog, a cat and a tree."}},
         {{"prompt", "Describe the image in detail."},
          {"seed", 102},
          {"response", "A cat under a tree."}},
         {{"prompt", "Is there a dog in the image?"}, {"response", "Yes"}},
         {{"prompt", "Is there a ball in the image?"}, {"response", "Yes"}},
         {{"prompt", "Is there a cat in the image?"}, {"response", "No"}},
         {{"prompt", "Is there a tree in the image?"}, {"response", "No"}},
     }},
};

}  // namespace

TEST_CASE("caption branch scores candidates from scripted probes") {
  PipelineHarness h(kCaptionScript, seeded_sampling());
  CurationTask task{"task1", "img1", TaskKind::Captioning, std::nullopt};
  const auto candidates = h.pipeline->run_caption_branch(task);

  REQUIRE(candidates.size() == 3);
  CHECK(candidates[0].consistency == ConsistencyScore{0, 2, 0});  // dog yes, ball yes
  CHECK(candidates[1].consistency == ConsistencyScore{2, 3, 0});  // dog, cat(no), tree(no)
  CHECK(candidates[2].consistency == ConsistencyScore{2, 2, 0});  // cat(no), tree(no)
  for (const auto& candidate : candidates) {
    CHECK(candidate.complete);
    CHECK(candidate.probes.size() == candidate.claims.size());
    CHECK(score(candidate.probes) == candidate.consistency);
    for (const auto& claim : candidate.claims) {
      CHECK(claim.category == claims::ClaimCategory::Existence);
    }
  }
}

TEST_CASE("caption branch rejects wrong task kind and N=1") {
  PipelineHarness h(kCaptionScript, seeded_sampling());
  CurationTask qa_task{"taskq", "img1", TaskKind::QA, "Why?"};
  CHECK_THROWS_AS(h.pipeline->run_caption_branch(qa_task), PreconditionError);
  CHECK_THROWS_AS(PipelineHarness(kCaptionScript, seeded_sampling(1)), PreconditionError);
}

TEST_CASE("zero lexicon hits give a zero-claim candidate") {
  nlohmann::json script = {
      {"entries",
       {{{"prompt", "Describe the image in detail."}, {"response", "Nothing to see here."}}}}};
  PipelineHarness h(script, seeded_sampling(2));
  CurationTask task{"task1", "img1", TaskKind::Captioning, std::nullopt};
  const auto candidates = h.pipeline->run_caption_branch(task);
  REQUIRE(candidates.size() == 2);
  CHECK(candidates[0].consistency == ConsistencyScore{0, 0, 0});
  CHECK(candidates[0].claims.empty());
}

TEST_CASE("a failed probe marks just that candidate incomplete") {
  // No entry for the tree probe: the mock misses, the candidate fails.
  nlohmann::json script = {
      {"entries",
       {
           {{"prompt", "Describe the image in detail."}, {"seed", 100}, {"response", "A dog."}},
           {{"prompt", "Describe the image in detail."}, {"seed", 101}, {"response", "A tree."}},
           {{"prompt", "Is there a dog in the image?"}, {"response", "Yes"}},
       }}};
  PipelineHarness h(script, seeded_sampling(2));
  CurationTask task{"task1", "img1", TaskKind::Captioning, std::nullopt};
  const auto candidates = h.pipeline->run_caption_branch(task);
  REQUIRE(candidates.size() == 2);
  CHECK(candidates[0].complete);
  CHECK_FALSE(candidates[1].complete);
  CHECK_FALSE(candidates[1].failure_reason.empty());

  const auto outcome = make_pairs(candidates, {});
  CHECK(outcome.pairs.empty());
  CHECK(outcome.incomplete_candidates == 1);
}

TEST_CASE("probe questions are deduplicated and capped") {
  nlohmann::json script = {
      {"entries",
       {
           {{"prompt", "Describe the image in detail."},
            {"response", "A dog and a puppy chase a dog near a cat and a tree."}},
           {{"prompt", "Is there a dog in the image?"}, {"response", "Yes"}},
           {{"prompt", "Is there a cat in the image?"}, {"response", "Yes"}},
           {{"prompt", "Is there a tree in the image?"}, {"response", "Yes"}},
       }}};
  SUBCASE("duplicates collapse to one probe") {
    PipelineHarness h(script, seeded_sampling(2));
    CurationTask task{"task1", "img1", TaskKind::Captioning, std::nullopt};
    const auto candidates = h.pipeline->run_caption_branch(task);
    // dog appears three times (dog, puppy, dog) but yields one probe.
    CHECK(candidates[0].claims.size() == 3);
    CHECK(candidates[0].probes.size() == 3);
  }
  SUBCASE("probe cap truncates") {
    CurationPipeline::Options options;
    options.probe_cap = 2;
    PipelineHarness h(script, seeded_sampling(2), options);
    CurationTask task{"task1", "img1", TaskKind::Captioning, std::nullopt};
    const auto candidates = h.pipeline->run_caption_branch(task);
    CHECK(candidates[0].claims.size() == 2);
    CHECK(candidates[0].probes.size() == 2);
  }
}

namespace {

const char* kExtractionJson =
    "{\"object_attributes\": [{\"text\": \"a small dog\", \"question\": [\"Is the dog small?\"]}],"
    " \"object_relation\": [{\"text\": \"dog on a mat\", \"question\": [\"Is the dog on a mat?\"]}]}";

const char* kExtractionJsonSleeping =
    "{\"object_action\": [{\"text\": \"dog sleeping\", \"question\": [\"Is the dog asleep?\"]}]}";

nlohmann::json qa_script() {
  return {
      {"entries",
       {
           {{"prompt", "Describe the image."}, {"seed", 100}, {"response", "a small dog on a mat"}},
           {{"prompt", "Describe the image."}, {"seed", 101}, {"response", "a small dog sleeping"}},
           {{"prompt", "What animal is shown?\na small dog on a mat"},
            {"seed", 100},
            {"response", "A dog."}},
           {{"prompt", "What animal is shown?\na small dog sleeping"},
            {"seed", 101},
            {"response", "It is a dog."}},
           {{"prompt", "What animal is shown?"}, {"seed", 100}, {"response", "Just a dog."}},
           {{"prompt", "What animal is shown?"}, {"seed", 101}, {"response", "A dog only."}},
           {{"prompt", "Is the dog small?"}, {"temperature", 0.0}, {"response", "Yes"}},
           {{"prompt", "Is the dog on a mat?"}, {"temperature", 0.0}, {"response", "No"}},
           {{"prompt", "Is the dog asleep?"}, {"temperature", 0.0}, {"response", "Yes"}},
           {{"prompt_contains", "a small dog sleeping"}, {"response", kExtractionJsonSleeping}},
           {{"prompt_contains", "a small dog"}, {"response", kExtractionJson}},
           {{"prompt_contains", "# Input"}, {"response", kExtractionJson}},
       }},
  };
}

}  // namespace

TEST_CASE("qa branch runs two rounds and keeps only the answer as pair text") {
  PipelineHarness h(qa_script(), seeded_sampling(2));
  CurationTask task{"taskq", "imgq", TaskKind::QA, "What animal is shown?"};
  const auto candidates = h.pipeline->run_qa_branch(task);

  REQUIRE(candidates.size() == 2);
  CHECK(candidates[0].aux_description == "a small dog on a mat");
  CHECK(candidates[0].text == "A dog.");
  CHECK(candidates[1].aux_description == "a small dog sleeping");
  CHECK(candidates[1].text == "It is a dog.");
  CHECK(candidates[0].consistency == ConsistencyScore{1, 2, 0});
  CHECK(candidates[1].consistency == ConsistencyScore{0, 1, 0});

  const auto outcome = make_pairs(candidates, {});
  const auto pairs = build_pairs(task, "What animal is shown?", candidates, outcome,
                                 RankStrategy::Occurrence);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].chosen == "It is a dog.");
  CHECK(pairs[0].rejected == "A dog.");
  // The auxiliary description never leaks into the exported texts.
  for (const auto& pair : pairs) {
    CHECK(pair.chosen.find("small dog") == std::string::npos);
    CHECK(pair.rejected.find("small dog") == std::string::npos);
  }
}

TEST_CASE("single-round mode skips the description round") {
  CurationPipeline::Options options;
  options.two_round_qa = false;
  PipelineHarness h(qa_script(), seeded_sampling(2), options);
  CurationTask task{"taskq", "imgq", TaskKind::QA, "What animal is shown?"};
  const auto candidates = h.pipeline->run_qa_branch(task);
  REQUIRE(candidates.size() == 2);
  CHECK_FALSE(candidates[0].aux_description.has_value());
  CHECK(candidates[0].text == "Just a dog.");
  // Claims extracted from the answer alone.
  CHECK(candidates[0].claims.size() == 2);
}

TEST_CASE("unparseable extraction output marks the candidate incomplete") {
  nlohmann::json script = {
      {"entries",
       {
           {{"prompt", "Describe the image."}, {"response", "blurry"}},
           {{"prompt", "Q?\nblurry"}, {"response", "unknown"}},
           {{"prompt_contains", "# Input"}, {"response", "I refuse to answer."}},
       }}};
  PipelineHarness h(script, seeded_sampling(2));
  CurationTask task{"taskq", "imgq", TaskKind::QA, "Q?"};
  const auto candidates = h.pipeline->run_qa_branch(task);
  REQUIRE(candidates.size() == 2);
  CHECK_FALSE(candidates[0].complete);
  CHECK_FALSE(candidates[1].complete);
  // Retried once per candidate: two extraction calls each. The mock records
  // 2 description + 2 answer + 4 extraction requests.
  CHECK(h.mock->call_count() == 8);
}

TEST_CASE("pair export renders sorted deterministic jsonl") {
  std::vector<PreferencePair> pairs(2);
  pairs[0].task_id = "t2";
  pairs[0].k_chosen = 0;
  pairs[0].k_rejected = 2;
  pairs[0].chosen = "good";
  pairs[0].rejected = "bad";
  pairs[1].task_id = "t1";
  pairs[1].k_chosen = 1;
  pairs[1].k_rejected = 3;
  const std::string rendered = render_pairs_jsonl(pairs);
  const std::string again = render_pairs_jsonl(pairs);
  CHECK(rendered == again);
  CHECK(rendered.find("\"t1\"") < rendered.find("\"t2\""));
  // Each line parses on its own.
  std::stringstream stream(rendered);
  std::string line;
  int lines = 0;
  while (std::getline(stream, line)) {
    ++lines;
    CHECK_FALSE(nlohmann::json::parse(line, nullptr, false).is_discarded());
  }
  CHECK(lines == 2);
  CHECK(render_pairs_jsonl({}).empty());
}
