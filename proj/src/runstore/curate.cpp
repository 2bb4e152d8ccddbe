#include "halprobe/runstore/curate.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "halprobe/claims/semantic.hpp"
#include "halprobe/errors.hpp"
#include "halprobe/runstore/store.hpp"
#include "halprobe/util/fs.hpp"
#include "halprobe/util/jsonl.hpp"

namespace halprobe::runstore {

nlohmann::ordered_json CurateSummary::to_json() const {
  nlohmann::ordered_json doc;
  doc["tasks"] = tasks;
  doc["tasks_failed"] = tasks_failed;
  doc["candidates"] = candidates;
  doc["incomplete_candidates"] = incomplete_candidates;
  doc["zero_claim_candidates"] = zero_claim_candidates;
  doc["probes_issued"] = probes_issued;
  doc["pairs_emitted"] = pairs_emitted;
  doc["ties_discarded"] = ties_discarded;
  doc["coverage_discarded"] = coverage_discarded;
  doc["cache_hits"] = cache_hits;
  doc["requests_sent"] = requests_sent;
  return doc;
}

std::vector<curation::CurationTask> read_manifest(const std::filesystem::path& path) {
  std::vector<curation::CurationTask> tasks;
  util::for_each_jsonl(path, [&](std::size_t line_no, const nlohmann::json& obj) {
    try {
      curation::CurationTask task;
      task.task_id = obj.at("task_id").get<std::string>();
      task.image = obj.at("image").get<std::string>();
      task.kind = curation::task_kind_from_string(obj.at("kind").get<std::string>());
      if (obj.contains("question") && !obj.at("question").is_null()) {
        task.question = obj.at("question").get<std::string>();
      }
      task.validate();
      tasks.push_back(std::move(task));
    } catch (const nlohmann::json::exception& ex) {
      throw Error(path.string() + ":" + std::to_string(line_no) + ": " + ex.what());
    } catch (const Error& ex) {
      throw Error(path.string() + ":" + std::to_string(line_no) + ": " + ex.what());
    }
  });
  return tasks;
}

namespace {

nlohmann::ordered_json claim_to_json(const claims::AtomicClaim& claim) {
  nlohmann::ordered_json doc;
  doc["source_text"] = claim.source_text;
  doc["category"] = claims::to_string(claim.category);
  doc["question"] = claim.question;
  doc["multi_marked"] = claim.multi_marked;
  return doc;
}

claims::AtomicClaim claim_from_json(const nlohmann::json& doc) {
  claims::AtomicClaim claim;
  claim.source_text = doc.at("source_text").get<std::string>();
  claim.category = claims::claim_category_from_string(doc.at("category").get<std::string>());
  claim.question = doc.at("question").get<std::string>();
  claim.multi_marked = doc.at("multi_marked").get<bool>();
  return claim;
}

nlohmann::ordered_json probe_to_json(const curation::BinaryProbe& probe) {
  nlohmann::ordered_json doc;
  doc["question"] = probe.question;
  doc["raw_answer"] = probe.raw_answer;
  doc["answer"] = gateway::to_string(probe.answer);
  doc["claim_category"] = claims::to_string(probe.claim_category);
  return doc;
}

curation::BinaryProbe probe_from_json(const nlohmann::json& doc) {
  curation::BinaryProbe probe;
  probe.question = doc.at("question").get<std::string>();
  probe.raw_answer = doc.at("raw_answer").get<std::string>();
  probe.answer = gateway::binary_answer_from_string(doc.at("answer").get<std::string>());
  probe.claim_category =
      claims::claim_category_from_string(doc.at("claim_category").get<std::string>());
  return probe;
}

struct TaskResult {
  std::vector<curation::CandidateResponse> candidates;
  curation::PairingOutcome outcome;
  std::vector<curation::PreferencePair> pairs;
  std::string error;
  bool failed = false;
};

void persist_task(const std::filesystem::path& run_dir, const curation::CurationTask& task,
                  const std::string& prompt, const std::vector<curation::CandidateResponse>& cands) {
  const std::string safe_id = sanitize_task_id(task.task_id);

  nlohmann::ordered_json record;
  record["task_id"] = task.task_id;
  record["image"] = task.image;
  record["kind"] = curation::to_string(task.kind);
  if (task.question) record["question"] = *task.question;
  record["prompt"] = prompt;
  nlohmann::ordered_json cand_array = nlohmann::ordered_json::array();
  nlohmann::ordered_json probe_array = nlohmann::ordered_json::array();
  for (const auto& candidate : cands) {
    nlohmann::ordered_json c;
    c["text"] = candidate.text;
    if (candidate.aux_description) c["aux_description"] = *candidate.aux_description;
    c["complete"] = candidate.complete;
    if (!candidate.failure_reason.empty()) c["failure_reason"] = candidate.failure_reason;
    c["score"] = {{"k_no", candidate.consistency.k_no},
                  {"t_total", candidate.consistency.t_total},
                  {"n_unparseable", candidate.consistency.n_unparseable}};
    nlohmann::ordered_json claim_array = nlohmann::ordered_json::array();
    for (const auto& claim : candidate.claims) claim_array.push_back(claim_to_json(claim));
    c["claims"] = std::move(claim_array);
    cand_array.push_back(std::move(c));

    nlohmann::ordered_json p = nlohmann::ordered_json::array();
    for (const auto& probe : candidate.probes) p.push_back(probe_to_json(probe));
    probe_array.push_back({{"probes", std::move(p)}});
  }
  record["candidates"] = std::move(cand_array);
  util::atomic_write_file(run_dir / "candidates" / (safe_id + ".json"), record.dump(2) + "\n");

  nlohmann::ordered_json probes_record;
  probes_record["task_id"] = task.task_id;
  probes_record["candidates"] = std::move(probe_array);
  util::atomic_write_file(run_dir / "probes" / (safe_id + ".json"), probes_record.dump(2) + "\n");
}

}  // namespace

CurateSummary curate_run(const RunConfig& config, const std::filesystem::path& manifest_path,
                         std::shared_ptr<gateway::ModelTransport> transport,
                         std::shared_ptr<gateway::ModelTransport> extraction_transport) {
  config.validate();
  const std::vector<curation::CurationTask> tasks = read_manifest(manifest_path);

  RunLock lock(config.run_dir);
  ensure_run_layout(config.run_dir);
  std::filesystem::copy_file(manifest_path,
                             config.run_dir / "manifests" / manifest_path.filename(),
                             std::filesystem::copy_options::overwrite_existing);

  claims::ObjectLexicon lexicon;
  if (config.lexicon_path) {
    lexicon = claims::ObjectLexicon::from_file(*config.lexicon_path);
  } else {
    for (const auto& task : tasks) {
      if (task.kind == curation::TaskKind::Captioning) {
        throw ConfigError("captioning tasks require a lexicon (set \"lexicon\" in the config)");
      }
    }
    lexicon = claims::ObjectLexicon::from_json({{"objects", nlohmann::json::array()}});
  }

  FileCache cache(config.run_dir / "cache");
  gateway::ModelGateway target(config.endpoint, transport, &cache,
                               static_cast<std::size_t>(config.concurrency));
  gateway::ModelGateway extraction(config.extraction_or_main(), extraction_transport, &cache,
                                   static_cast<std::size_t>(config.concurrency));

  curation::CurationPipeline::Options pipeline_options;
  pipeline_options.caption_prompt = config.caption_prompt;
  pipeline_options.two_round_qa = config.two_round_qa;
  pipeline_options.probe_cap = static_cast<std::size_t>(config.probe_cap);
  curation::CurationPipeline pipeline(target, extraction, lexicon, config.sampling,
                                      pipeline_options);

  curation::PairingOptions pairing;
  pairing.strategy = config.strategy;
  pairing.policy = config.pair_policy;
  pairing.coverage_constraint = config.coverage_constraint;

  std::vector<TaskResult> results(tasks.size());
  std::atomic<std::size_t> next_task{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t index = next_task.fetch_add(1);
      if (index >= tasks.size()) return;
      TaskResult& result = results[index];
      try {
        result.candidates = pipeline.run_task(tasks[index]);
        result.outcome = curation::make_pairs(result.candidates, pairing);
        result.pairs = curation::build_pairs(tasks[index], pipeline.pair_prompt(tasks[index]),
                                             result.candidates, result.outcome, pairing.strategy);
        persist_task(config.run_dir, tasks[index], pipeline.pair_prompt(tasks[index]),
                     result.candidates);
        const bool all_incomplete =
            !result.candidates.empty() &&
            std::all_of(result.candidates.begin(), result.candidates.end(),
                        [](const curation::CandidateResponse& c) { return !c.complete; });
        if (all_incomplete) {
          result.failed = true;
          result.error = "all candidates incomplete";
        }
      } catch (const std::exception& ex) {
        result.failed = true;
        result.error = ex.what();
      }
    }
  };
  const std::size_t worker_count =
      std::min<std::size_t>(static_cast<std::size_t>(config.concurrency),
                            std::max<std::size_t>(tasks.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t i = 0; i < worker_count; ++i) pool.emplace_back(worker);
  for (auto& thread : pool) thread.join();

  // Merge in manifest order; the export itself re-sorts by task id.
  CurateSummary summary;
  summary.tasks = tasks.size();
  std::vector<curation::PreferencePair> all_pairs;
  nlohmann::ordered_json failures = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < results.size(); ++i) {
    const TaskResult& result = results[i];
    if (result.failed) {
      ++summary.tasks_failed;
      failures.push_back({{"task_id", tasks[i].task_id}, {"error", result.error}});
    }
    summary.candidates += result.candidates.size();
    for (const auto& candidate : result.candidates) {
      if (!candidate.complete) ++summary.incomplete_candidates;
      summary.probes_issued += candidate.probes.size();
    }
    summary.zero_claim_candidates += static_cast<std::size_t>(result.outcome.zero_claim_candidates);
    summary.ties_discarded += static_cast<std::size_t>(result.outcome.ties_discarded);
    summary.coverage_discarded += static_cast<std::size_t>(result.outcome.coverage_discarded);
    all_pairs.insert(all_pairs.end(), result.pairs.begin(), result.pairs.end());
  }
  summary.pairs_emitted = all_pairs.size();

  curation::export_pairs(all_pairs, config.run_dir / "pairs" / "pairs.jsonl");

  const auto target_stats = target.stats();
  const auto extraction_stats = extraction.stats();
  summary.cache_hits = target_stats.cache_hits + extraction_stats.cache_hits;
  summary.requests_sent = target_stats.requests_sent + extraction_stats.requests_sent;

  nlohmann::ordered_json report = summary.to_json();
  report["failures"] = std::move(failures);
  util::atomic_write_file(config.run_dir / "reports" / "curate_summary.json",
                          report.dump(2) + "\n");
  return summary;
}

std::vector<curation::PreferencePair> rebuild_pairs_from_store(
    const std::filesystem::path& run_dir, const ExportOptions& options) {
  const auto candidates_dir = run_dir / "candidates";
  if (!std::filesystem::is_directory(candidates_dir)) {
    throw ConfigError("no candidates in run directory: " + candidates_dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(candidates_dir)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  curation::PairingOptions pairing;
  pairing.strategy = options.strategy;
  pairing.policy = options.policy;
  pairing.coverage_constraint = options.coverage_constraint;

  std::vector<curation::PreferencePair> all_pairs;
  for (const auto& file : files) {
    nlohmann::json record = nlohmann::json::parse(util::read_file(file));
    curation::CurationTask task;
    task.task_id = record.at("task_id").get<std::string>();
    task.image = record.at("image").get<std::string>();
    task.kind = curation::task_kind_from_string(record.at("kind").get<std::string>());
    if (record.contains("question")) task.question = record.at("question").get<std::string>();
    const std::string prompt = record.at("prompt").get<std::string>();

    nlohmann::json probes_record = nlohmann::json::parse(
        util::read_file(run_dir / "probes" / file.filename()));

    std::vector<curation::CandidateResponse> candidates;
    const auto& cand_array = record.at("candidates");
    const auto& probe_array = probes_record.at("candidates");
    for (std::size_t i = 0; i < cand_array.size(); ++i) {
      const auto& c = cand_array.at(i);
      curation::CandidateResponse candidate;
      candidate.text = c.at("text").get<std::string>();
      if (c.contains("aux_description")) {
        candidate.aux_description = c.at("aux_description").get<std::string>();
      }
      candidate.complete = c.at("complete").get<bool>();
      for (const auto& claim_json : c.at("claims")) {
        candidate.claims.push_back(claim_from_json(claim_json));
      }
      for (const auto& probe_json : probe_array.at(i).at("probes")) {
        candidate.probes.push_back(probe_from_json(probe_json));
      }
      candidate.consistency = curation::score(candidate.probes);
      const auto& stored = c.at("score");
      if (candidate.consistency.k_no != stored.at("k_no").get<int>() ||
          candidate.consistency.t_total != stored.at("t_total").get<int>()) {
        throw Error("stored score disagrees with stored probes for task " + task.task_id);
      }
      candidates.push_back(std::move(candidate));
    }

    const auto outcome = curation::make_pairs(candidates, pairing);
    auto pairs = curation::build_pairs(task, prompt, candidates, outcome, pairing.strategy);
    all_pairs.insert(all_pairs.end(), pairs.begin(), pairs.end());
  }
  return all_pairs;
}

}  // namespace halprobe::runstore
