#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>

#include "halprobe/curation/types.hpp"
#include "halprobe/gateway/types.hpp"

namespace halprobe::runstore {

struct RunConfig {
  gateway::ModelEndpointConfig endpoint;
  // Model used for semantic-claim extraction; defaults to the main endpoint.
  std::optional<gateway::ModelEndpointConfig> extraction_endpoint;
  curation::SamplingConfig sampling;
  curation::RankStrategy strategy = curation::RankStrategy::Occurrence;
  curation::PairPolicy pair_policy = curation::PairPolicy::AllPairs;
  bool coverage_constraint = false;
  bool two_round_qa = true;
  int probe_cap = 40;
  int concurrency = 4;
  std::filesystem::path run_dir = "run";
  std::optional<std::filesystem::path> lexicon_path;
  std::string caption_prompt = "Describe the image in detail.";

  void validate() const;

  static RunConfig from_json(const nlohmann::json& doc);
  static RunConfig from_file(const std::filesystem::path& path);

  const gateway::ModelEndpointConfig& extraction_or_main() const {
    return extraction_endpoint ? *extraction_endpoint : endpoint;
  }
};

}  // namespace halprobe::runstore
