#include "halprobe/sim/noisy_model.hpp"

#include "halprobe/errors.hpp"
#include "halprobe/util/fs.hpp"

namespace halprobe::sim {

void NoisyModelParams::validate() const {
  auto check_prob = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ConfigError(std::string("sim: ") + name + " must lie in [0, 1]");
    }
  };
  check_prob(claim_hallucination_prob, "claim_hallucination_prob");
  if (claims_min < 0 || claims_max < claims_min) {
    throw ConfigError("sim: claims range must satisfy 0 <= min <= max");
  }
  if (category_mix.empty()) throw ConfigError("sim: category_mix must be non-empty");
  for (const auto& [category, weight] : category_mix) {
    if (weight <= 0) throw ConfigError("sim: category weights must be positive");
    if (!neg_answer_precision.count(category) || !pos_answer_precision.count(category)) {
      throw ConfigError(std::string("sim: missing precision for category ") +
                        claims::to_string(category));
    }
  }
  for (const auto& [category, p] : neg_answer_precision) check_prob(p, "neg_answer_precision");
  for (const auto& [category, p] : pos_answer_precision) check_prob(p, "pos_answer_precision");
}

NoisyModelParams NoisyModelParams::from_json(const nlohmann::json& doc) {
  NoisyModelParams params;
  if (doc.contains("claim_hallucination_prob")) {
    params.claim_hallucination_prob = doc.at("claim_hallucination_prob").get<double>();
  }
  if (doc.contains("claims_min")) params.claims_min = doc.at("claims_min").get<int>();
  if (doc.contains("claims_max")) params.claims_max = doc.at("claims_max").get<int>();
  auto read_precisions = [&](const char* key) {
    std::map<claims::ClaimCategory, double> precisions;
    for (const auto& [name, value] : doc.at(key).items()) {
      precisions[claims::claim_category_from_string(name)] = value.get<double>();
    }
    return precisions;
  };
  if (doc.contains("neg_answer_precision")) {
    params.neg_answer_precision = read_precisions("neg_answer_precision");
  }
  if (doc.contains("pos_answer_precision")) {
    params.pos_answer_precision = read_precisions("pos_answer_precision");
  }
  if (doc.contains("category_mix")) {
    params.category_mix.clear();
    for (const auto& [name, weight] : doc.at("category_mix").items()) {
      params.category_mix.emplace_back(claims::claim_category_from_string(name),
                                       weight.get<double>());
    }
  }
  if (doc.contains("seed")) params.seed = doc.at("seed").get<std::uint64_t>();
  params.validate();
  return params;
}

NoisyModelParams load_preset(const std::filesystem::path& path, const std::string& name) {
  nlohmann::json doc = nlohmann::json::parse(util::read_file(path), nullptr, false);
  if (doc.is_discarded() || !doc.contains("presets")) {
    throw ConfigError("preset file must hold a \"presets\" object: " + path.string());
  }
  if (!doc.at("presets").contains(name)) {
    throw ConfigError("unknown preset \"" + name + "\" in " + path.string());
  }
  return NoisyModelParams::from_json(doc.at("presets").at(name));
}

std::vector<PairRecord> judge_pairs(const std::vector<int>& true_counts,
                                    const std::vector<int>& observed_k) {
  std::vector<PairRecord> records;
  for (std::size_t i = 0; i < true_counts.size(); ++i) {
    for (std::size_t j = i + 1; j < true_counts.size(); ++j) {
      if (true_counts[i] == true_counts[j]) continue;
      PairRecord record{i, j, PairOutcome::TiedObserved};
      if (observed_k[i] != observed_k[j]) {
        const bool truth_prefers_i = true_counts[i] < true_counts[j];
        const bool observed_prefers_i = observed_k[i] < observed_k[j];
        record.outcome =
            truth_prefers_i == observed_prefers_i ? PairOutcome::Correct : PairOutcome::Incorrect;
      }
      records.push_back(record);
    }
  }
  return records;
}

TrialOutcome simulate_task_with_rng(const NoisyModelParams& params, int n_candidates,
                                    util::Rng& rng) {
  if (n_candidates < 2) throw PreconditionError("sim: need at least 2 candidates");
  params.validate();

  double weight_total = 0;
  for (const auto& [category, weight] : params.category_mix) weight_total += weight;

  TrialOutcome outcome;
  for (int c = 0; c < n_candidates; ++c) {
    const auto claim_count =
        static_cast<int>(rng.uniform_int(params.claims_min, params.claims_max));
    std::vector<curation::BinaryProbe> probes;
    int true_hallucinations = 0;
    for (int k = 0; k < claim_count; ++k) {
      claims::ClaimCategory category = params.category_mix.front().first;
      double draw = rng.next_unit() * weight_total;
      for (const auto& [mix_category, weight] : params.category_mix) {
        if (draw < weight) {
          category = mix_category;
          break;
        }
        draw -= weight;
      }

      const bool hallucinated = rng.bernoulli(params.claim_hallucination_prob);
      if (hallucinated) ++true_hallucinations;
      const double p_no = hallucinated ? params.neg_answer_precision.at(category)
                                       : 1.0 - params.pos_answer_precision.at(category);
      const bool answered_no = rng.bernoulli(p_no);
      curation::BinaryProbe probe;
      probe.question = "synthetic claim?";
      probe.raw_answer = answered_no ? "No" : "Yes";
      probe.answer = answered_no ? gateway::BinaryAnswer::No : gateway::BinaryAnswer::Yes;
      probe.claim_category = category;
      probes.push_back(std::move(probe));
    }
    outcome.true_hallucination_counts.push_back(true_hallucinations);
    outcome.observed_k.push_back(curation::score(probes).k_no);
  }
  outcome.pair_records = judge_pairs(outcome.true_hallucination_counts, outcome.observed_k);
  return outcome;
}

TrialOutcome simulate_task(const NoisyModelParams& params, int n_candidates) {
  util::Rng rng(params.seed);
  return simulate_task_with_rng(params, n_candidates, rng);
}

AccuracySummary pairwise_ranking_accuracy(const NoisyModelParams& params, int n_candidates,
                                          int n_trials) {
  if (n_trials < 1) throw PreconditionError("sim: n_trials must be >= 1");
  AccuracySummary summary;
  for (int t = 0; t < n_trials; ++t) {
    util::Rng rng(params.seed + static_cast<std::uint64_t>(t));
    const TrialOutcome outcome = simulate_task_with_rng(params, n_candidates, rng);
    for (const auto& record : outcome.pair_records) {
      switch (record.outcome) {
        case PairOutcome::Correct:
          ++summary.correct;
          break;
        case PairOutcome::Incorrect:
          ++summary.incorrect;
          break;
        case PairOutcome::TiedObserved:
          ++summary.tied_observed;
          break;
      }
    }
  }
  summary.decisive = summary.correct + summary.incorrect;
  summary.accuracy = summary.decisive > 0
                         ? static_cast<double>(summary.correct) /
                               static_cast<double>(summary.decisive)
                         : 0.0;
  return summary;
}

}  // namespace halprobe::sim
