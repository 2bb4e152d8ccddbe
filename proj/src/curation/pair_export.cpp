#include "halprobe/curation/pair_export.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <tuple>

#include "halprobe/util/fs.hpp"

namespace halprobe::curation {

std::vector<PreferencePair> build_pairs(const CurationTask& task, const std::string& prompt,
                                        const std::vector<CandidateResponse>& candidates,
                                        const PairingOutcome& outcome, RankStrategy strategy) {
  std::vector<PreferencePair> pairs;
  pairs.reserve(outcome.pairs.size());
  for (const auto& [chosen_idx, rejected_idx] : outcome.pairs) {
    const CandidateResponse& chosen = candidates[chosen_idx];
    const CandidateResponse& rejected = candidates[rejected_idx];
    PreferencePair pair;
    pair.task_id = task.task_id;
    pair.image = task.image;
    pair.prompt = prompt;
    pair.chosen = chosen.text;
    pair.rejected = rejected.text;
    pair.k_chosen = chosen.consistency.k_no;
    pair.t_chosen = chosen.consistency.t_total;
    pair.k_rejected = rejected.consistency.k_no;
    pair.t_rejected = rejected.consistency.t_total;
    pair.claim_count_chosen = static_cast<int>(chosen.claims.size());
    pair.claim_count_rejected = static_cast<int>(rejected.claims.size());
    pair.strategy = strategy;
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::string render_pairs_jsonl(std::vector<PreferencePair> pairs) {
  std::stable_sort(pairs.begin(), pairs.end(), [](const PreferencePair& a, const PreferencePair& b) {
    return std::tie(a.task_id, a.k_chosen, a.k_rejected) <
           std::tie(b.task_id, b.k_chosen, b.k_rejected);
  });
  std::string out;
  for (const auto& pair : pairs) {
    nlohmann::ordered_json line;
    line["task_id"] = pair.task_id;
    line["image"] = pair.image;
    line["prompt"] = pair.prompt;
    line["chosen"] = pair.chosen;
    line["rejected"] = pair.rejected;
    line["meta"] = {
        {"k_chosen", pair.k_chosen},
        {"t_chosen", pair.t_chosen},
        {"k_rejected", pair.k_rejected},
        {"t_rejected", pair.t_rejected},
        {"claim_count_chosen", pair.claim_count_chosen},
        {"claim_count_rejected", pair.claim_count_rejected},
        {"strategy", to_string(pair.strategy)},
    };
    out += line.dump();
    out += '\n';
  }
  return out;
}

void export_pairs(const std::vector<PreferencePair>& pairs, const std::filesystem::path& path) {
  util::atomic_write_file(path, render_pairs_jsonl(pairs));
}

}  // namespace halprobe::curation
