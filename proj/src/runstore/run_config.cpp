#include "halprobe/runstore/run_config.hpp"

#include "halprobe/errors.hpp"
#include "halprobe/util/fs.hpp"

namespace halprobe::runstore {

namespace {

gateway::ModelEndpointConfig endpoint_from_json(const nlohmann::json& doc) {
  gateway::ModelEndpointConfig endpoint;
  endpoint.base_url = doc.value("base_url", "");
  endpoint.model_id = doc.value("model_id", "");
  endpoint.api_key_env = doc.value("api_key_env", "");
  endpoint.timeout = std::chrono::seconds(doc.value("timeout_s", 60));
  endpoint.max_retries = doc.value("max_retries", 3);
  endpoint.backoff_base = std::chrono::milliseconds(doc.value("backoff_base_ms", 250));
  endpoint.validate();
  return endpoint;
}

}  // namespace

void RunConfig::validate() const {
  endpoint.validate();
  if (extraction_endpoint) extraction_endpoint->validate();
  sampling.validate();
  if (probe_cap < 1) throw ConfigError("config: probe_cap must be >= 1");
  if (concurrency < 1) throw ConfigError("config: concurrency must be >= 1");
  if (run_dir.empty()) throw ConfigError("config: run_dir must be set");
}

RunConfig RunConfig::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
  RunConfig config;
  if (!doc.contains("endpoint")) throw ConfigError("config: missing \"endpoint\"");
  config.endpoint = endpoint_from_json(doc.at("endpoint"));
  if (doc.contains("extraction_endpoint")) {
    config.extraction_endpoint = endpoint_from_json(doc.at("extraction_endpoint"));
  }
  if (doc.contains("sampling")) {
    const auto& s = doc.at("sampling");
    config.sampling.n_candidates = s.value("n_candidates", 3);
    config.sampling.candidate_sampling.temperature = s.value("temperature", 0.7);
    config.sampling.candidate_sampling.top_p = s.value("top_p", 1.0);
    config.sampling.candidate_sampling.max_tokens = s.value("max_tokens", 512);
    if (s.contains("seed")) {
      config.sampling.candidate_sampling.seed = s.at("seed").get<std::int64_t>();
    }
  }
  if (doc.contains("strategy")) {
    config.strategy = curation::rank_strategy_from_string(doc.at("strategy").get<std::string>());
  }
  if (doc.contains("pair_policy")) {
    config.pair_policy = curation::pair_policy_from_string(doc.at("pair_policy").get<std::string>());
  }
  config.coverage_constraint = doc.value("coverage_constraint", false);
  config.two_round_qa = doc.value("two_round_qa", true);
  config.probe_cap = doc.value("probe_cap", 40);
  config.concurrency = doc.value("concurrency", 4);
  if (doc.contains("run_dir")) config.run_dir = doc.at("run_dir").get<std::string>();
  if (doc.contains("lexicon")) config.lexicon_path = doc.at("lexicon").get<std::string>();
  if (doc.contains("caption_prompt")) {
    config.caption_prompt = doc.at("caption_prompt").get<std::string>();
  }
  config.validate();
  return config;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
  nlohmann::json doc = nlohmann::json::parse(util::read_file(path), nullptr, false);
  if (doc.is_discarded()) throw ConfigError("config: invalid JSON in " + path.string());
  return from_json(doc);
}

}  // namespace halprobe::runstore
