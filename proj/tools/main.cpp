#include <CLI11.hpp>

#include <iostream>
#include <memory>

#include "halprobe/dpo/dpo.hpp"
#include "halprobe/errors.hpp"
#include "halprobe/gateway/http_transport.hpp"
#include "halprobe/gateway/mock_transport.hpp"
#include "halprobe/runstore/curate.hpp"
#include "halprobe/runstore/evaluate.hpp"
#include "halprobe/sim/noisy_model.hpp"
#include "halprobe/util/fs.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

struct GlobalFlags {
  std::string config_path;
  std::string run_dir;
  int concurrency = 0;
  std::int64_t seed = 0;
  bool seed_set = false;
  std::string strategy;
  std::string pair_policy;
  bool coverage_constraint = false;
  bool single_round_qa = false;
  std::string mock_script;
};

halprobe::runstore::RunConfig load_config(const GlobalFlags& flags) {
  halprobe::runstore::RunConfig config;
  if (!flags.config_path.empty()) {
    config = halprobe::runstore::RunConfig::from_file(flags.config_path);
  } else {
    // Mock-only defaults; a live endpoint must come from --config.
    config.endpoint.base_url = "mock://local";
    config.endpoint.model_id = "scripted";
  }
  if (!flags.run_dir.empty()) config.run_dir = flags.run_dir;
  if (flags.concurrency > 0) config.concurrency = flags.concurrency;
  if (flags.seed_set) config.sampling.candidate_sampling.seed = flags.seed;
  if (!flags.strategy.empty()) {
    config.strategy = halprobe::curation::rank_strategy_from_string(flags.strategy);
  }
  if (!flags.pair_policy.empty()) {
    config.pair_policy = halprobe::curation::pair_policy_from_string(flags.pair_policy);
  }
  if (flags.coverage_constraint) config.coverage_constraint = true;
  if (flags.single_round_qa) config.two_round_qa = false;
  return config;
}

int run_curate(const GlobalFlags& flags, const std::string& manifest,
               const std::string& lexicon) {
  halprobe::runstore::RunConfig config = load_config(flags);
  if (!lexicon.empty()) config.lexicon_path = lexicon;

  std::shared_ptr<halprobe::gateway::ModelTransport> transport;
  std::shared_ptr<halprobe::gateway::ModelTransport> extraction_transport;
  if (!flags.mock_script.empty()) {
    auto mock = std::make_shared<halprobe::gateway::MockTransport>(
        halprobe::gateway::MockTransport::from_file(flags.mock_script));
    transport = mock;
    extraction_transport = mock;
  } else {
    transport = std::make_shared<halprobe::gateway::HttpTransport>(config.endpoint);
    extraction_transport =
        std::make_shared<halprobe::gateway::HttpTransport>(config.extraction_or_main());
  }

  const auto summary =
      halprobe::runstore::curate_run(config, manifest, transport, extraction_transport);
  std::cout << summary.to_json().dump(2) << std::endl;
  if (summary.tasks > 0 && summary.tasks_failed == summary.tasks) return kExitFailure;
  return kExitOk;
}

int run_evaluate(const halprobe::runstore::EvaluateInputs& inputs, const std::string& out_path) {
  const auto report = halprobe::runstore::evaluate_run(inputs);
  std::cout << halprobe::runstore::render_report_table(report);
  if (!out_path.empty()) {
    halprobe::util::atomic_write_file(out_path, report.dump(2) + "\n");
    std::cout << "report written to " << out_path << std::endl;
  } else {
    std::cout << report.dump(2) << std::endl;
  }
  return kExitOk;
}

int run_dpo_check(const std::string& path, double beta, bool normalize_length,
                  const std::string& out_path) {
  halprobe::dpo::DpoConfig cfg{beta, false};
  cfg.validate();
  const auto entries = halprobe::dpo::read_batch_file(path, normalize_length);
  if (entries.empty()) {
    std::cerr << "no pairs in " << path << std::endl;
    return kExitFailure;
  }
  nlohmann::ordered_json per_pair = nlohmann::ordered_json::array();
  std::vector<halprobe::dpo::PairLogProbs> batch;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    batch.push_back(entries[i].lp);
    const double loss = halprobe::dpo::dpo_loss(entries[i].lp, cfg);
    const double margin = halprobe::dpo::dpo_margin(entries[i].lp);
    const std::string id = entries[i].id.value_or(std::to_string(i));
    std::cout << "pair " << id << ": margin=" << margin << " loss=" << loss << "\n";
    per_pair.push_back({{"id", id}, {"margin", margin}, {"loss", loss}});
  }
  const double mean = halprobe::dpo::dpo_loss_batch(batch, cfg);
  std::cout << "mean loss over " << batch.size() << " pairs: " << mean << std::endl;
  if (!out_path.empty()) {
    nlohmann::ordered_json report;
    report["beta"] = beta;
    report["pairs"] = std::move(per_pair);
    report["mean_loss"] = mean;
    halprobe::util::atomic_write_file(out_path, report.dump(2) + "\n");
  }
  return kExitOk;
}

int run_simulate(const std::string& preset, const std::string& presets_file,
                 const std::string& params_file, int trials, int candidates,
                 const GlobalFlags& flags, const std::string& sweep, const std::string& out_path) {
  halprobe::sim::NoisyModelParams params;
  if (!params_file.empty()) {
    nlohmann::json doc =
        nlohmann::json::parse(halprobe::util::read_file(params_file), nullptr, false);
    if (doc.is_discarded()) throw halprobe::ConfigError("invalid params JSON: " + params_file);
    params = halprobe::sim::NoisyModelParams::from_json(doc);
  } else {
    params = halprobe::sim::load_preset(presets_file, preset);
  }
  if (flags.seed_set) params.seed = static_cast<std::uint64_t>(flags.seed);

  nlohmann::ordered_json report;
  report["trials"] = trials;
  report["candidates"] = candidates;
  report["seed"] = params.seed;

  auto run_point = [&](const halprobe::sim::NoisyModelParams& point) {
    const auto summary = halprobe::sim::pairwise_ranking_accuracy(point, candidates, trials);
    nlohmann::ordered_json doc;
    doc["accuracy"] = summary.accuracy;
    doc["correct"] = summary.correct;
    doc["incorrect"] = summary.incorrect;
    doc["tied_observed"] = summary.tied_observed;
    return doc;
  };

  if (sweep.empty()) {
    report["result"] = run_point(params);
  } else {
    nlohmann::ordered_json points = nlohmann::ordered_json::array();
    std::stringstream stream(sweep);
    std::string item;
    while (std::getline(stream, item, ',')) {
      const double precision = std::stod(item);
      halprobe::sim::NoisyModelParams point = params;
      for (auto& [category, value] : point.neg_answer_precision) value = precision;
      nlohmann::ordered_json doc = run_point(point);
      doc["neg_answer_precision"] = precision;
      points.push_back(std::move(doc));
    }
    report["sweep"] = std::move(points);
  }

  if (!out_path.empty()) {
    halprobe::util::atomic_write_file(out_path, report.dump(2) + "\n");
  }
  std::cout << report.dump(2) << std::endl;
  return kExitOk;
}

int run_export(const GlobalFlags& flags, const std::string& out_path) {
  if (flags.run_dir.empty()) {
    throw halprobe::ConfigError("export requires --run-dir");
  }
  halprobe::runstore::ExportOptions options;
  if (!flags.strategy.empty()) {
    options.strategy = halprobe::curation::rank_strategy_from_string(flags.strategy);
  }
  if (!flags.pair_policy.empty()) {
    options.policy = halprobe::curation::pair_policy_from_string(flags.pair_policy);
  }
  options.coverage_constraint = flags.coverage_constraint;
  const auto pairs = halprobe::runstore::rebuild_pairs_from_store(flags.run_dir, options);
  const std::string out =
      out_path.empty() ? (std::filesystem::path(flags.run_dir) / "pairs" / "export.jsonl").string()
                       : out_path;
  halprobe::curation::export_pairs(pairs, out);
  std::cout << pairs.size() << " pairs written to " << out << std::endl;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-consistency preference curation and hallucination metrics"};
  app.require_subcommand(1);

  GlobalFlags flags;
  app.add_option("--config", flags.config_path, "Run configuration JSON file");
  app.add_option("--run-dir", flags.run_dir, "Run directory (overrides config)");
  app.add_option("--concurrency", flags.concurrency, "Worker pool size (overrides config)");
  auto* seed_opt = app.add_option("--seed", flags.seed, "Base sampling seed (overrides config)");
  app.add_option("--strategy", flags.strategy, "Ranking strategy: occurrence|ratio")
      ->check(CLI::IsMember({"occurrence", "ratio"}));
  app.add_option("--pair-policy", flags.pair_policy, "Pair policy: all|best-worst")
      ->check(CLI::IsMember({"all", "best-worst"}));
  app.add_flag("--coverage-constraint", flags.coverage_constraint,
               "Require the chosen response to carry at least as many claims");
  app.add_flag("--single-round-qa", flags.single_round_qa,
               "Answer QA tasks directly without the description round");
  app.add_option("--mock", flags.mock_script, "Scripted mock model JSON (no network)");

  auto* curate = app.add_subcommand("curate", "Curate preference pairs from a task manifest");
  std::string manifest;
  std::string lexicon;
  curate->add_option("manifest", manifest, "Task manifest (JSON lines)")->required();
  curate->add_option("--lexicon", lexicon, "Object lexicon JSON (overrides config)");

  auto* evaluate = app.add_subcommand("evaluate", "Compute hallucination metrics");
  std::string gen_path, ann_path, disc_path, objhal_path, eval_lexicon, eval_out;
  bool corpus_chair = false;
  evaluate->add_option("--generations", gen_path, "Generation records (JSON lines)");
  evaluate->add_option("--annotations", ann_path, "Image annotations (JSON lines)");
  evaluate->add_option("--discriminative", disc_path, "Binary QA records (JSON lines)");
  evaluate->add_option("--objhal", objhal_path, "Per-response hallucination records");
  evaluate->add_option("--lexicon", eval_lexicon, "Object lexicon for caption extraction");
  evaluate->add_flag("--corpus-chair", corpus_chair,
                     "Aggregate CHAIR at corpus level instead of per-response mean");
  evaluate->add_option("--out", eval_out, "Write the JSON report here");

  auto* dpo_check = app.add_subcommand("dpo-check", "Loss report for a pair log-prob file");
  std::string dpo_path, dpo_out;
  double beta = 0.1;
  bool normalize_length = false;
  dpo_check->add_option("file", dpo_path, "Pair log-probs (JSON lines)")->required();
  dpo_check->add_option("--beta", beta, "Scaling hyperparameter (default 0.1)");
  dpo_check->add_flag("--normalize-length", normalize_length,
                      "Divide each side by its token count before the loss");
  dpo_check->add_option("--out", dpo_out, "Write the JSON report here");

  auto* simulate = app.add_subcommand("simulate", "Noisy self-probe ranking simulation");
  std::string preset = "measured-7b";
  std::string presets_file = "data/sim_presets.json";
  std::string params_file, sweep, sim_out;
  int trials = 10000;
  int sim_candidates = 3;
  simulate->add_option("--preset", preset, "Preset name (default measured-7b)");
  simulate->add_option("--presets-file", presets_file, "Preset collection JSON");
  simulate->add_option("--params", params_file, "Explicit params JSON (overrides preset)");
  simulate->add_option("--trials", trials, "Number of simulated tasks");
  simulate->add_option("--candidates", sim_candidates, "Candidates per task");
  simulate->add_option("--sweep", sweep,
                       "Comma-separated negative-precision values to sweep over");
  simulate->add_option("--out", sim_out, "Write the JSON report here");

  auto* export_cmd = app.add_subcommand("export", "Re-rank stored candidates into a pairs file");
  std::string export_out;
  export_cmd->add_option("--out", export_out, "Output pairs file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  flags.seed_set = seed_opt->count() > 0;

  try {
    if (curate->parsed()) return run_curate(flags, manifest, lexicon);
    if (evaluate->parsed()) {
      halprobe::runstore::EvaluateInputs inputs;
      if (!gen_path.empty()) inputs.generations = gen_path;
      if (!ann_path.empty()) inputs.annotations = ann_path;
      if (!disc_path.empty()) inputs.discriminative = disc_path;
      if (!objhal_path.empty()) inputs.objhal = objhal_path;
      if (!eval_lexicon.empty()) inputs.lexicon = eval_lexicon;
      inputs.chair_aggregation = corpus_chair ? halprobe::metrics::ChairAggregation::CorpusLevel
                                              : halprobe::metrics::ChairAggregation::PerResponseMean;
      return run_evaluate(inputs, eval_out);
    }
    if (dpo_check->parsed()) return run_dpo_check(dpo_path, beta, normalize_length, dpo_out);
    if (simulate->parsed()) {
      return run_simulate(preset, presets_file, params_file, trials, sim_candidates, flags, sweep,
                          sim_out);
    }
    if (export_cmd->parsed()) return run_export(flags, export_out);
  } catch (const halprobe::ConfigError& ex) {
    std::cerr << "configuration error: " << ex.what() << std::endl;
    return kExitConfig;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << std::endl;
    return kExitFailure;
  }
  return kExitConfig;
}
