#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "halprobe/curation/pair_export.hpp"
#include "halprobe/curation/pipeline.hpp"
#include "halprobe/gateway/transport.hpp"
#include "halprobe/runstore/run_config.hpp"

namespace halprobe::runstore {

struct CurateSummary {
  std::size_t tasks = 0;
  std::size_t tasks_failed = 0;
  std::size_t candidates = 0;
  std::size_t incomplete_candidates = 0;
  std::size_t zero_claim_candidates = 0;
  std::size_t probes_issued = 0;
  std::size_t pairs_emitted = 0;
  std::size_t ties_discarded = 0;
  std::size_t coverage_discarded = 0;
  std::size_t cache_hits = 0;
  std::size_t requests_sent = 0;

  nlohmann::ordered_json to_json() const;
};

// Parses a task manifest (JSON lines: {task_id, image, kind, question?});
// errors carry the offending line number.
std::vector<curation::CurationTask> read_manifest(const std::filesystem::path& path);

// Runs the full curation pipeline over a manifest: bounded worker pool over
// tasks, content-addressed caching of every model call, per-task persistence
// of candidates and probes, deterministic pair export to pairs/pairs.jsonl.
// Per-task failures are recorded and skipped; a task counts as failed when it
// throws or when every candidate is incomplete.
CurateSummary curate_run(const RunConfig& config, const std::filesystem::path& manifest_path,
                         std::shared_ptr<gateway::ModelTransport> transport,
                         std::shared_ptr<gateway::ModelTransport> extraction_transport);

struct ExportOptions {
  curation::RankStrategy strategy = curation::RankStrategy::Occurrence;
  curation::PairPolicy policy = curation::PairPolicy::AllPairs;
  bool coverage_constraint = false;
};

// Re-ranks persisted candidates from a previous run without any model calls
// and returns the resulting pairs. Scores are recomputed from stored probes
// and checked against the stored values.
std::vector<curation::PreferencePair> rebuild_pairs_from_store(
    const std::filesystem::path& run_dir, const ExportOptions& options);

}  // namespace halprobe::runstore
