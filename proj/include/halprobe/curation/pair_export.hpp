#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "halprobe/curation/ranking.hpp"
#include "halprobe/curation/types.hpp"

namespace halprobe::curation {

// Materializes index pairs from a pairing outcome into exportable records.
std::vector<PreferencePair> build_pairs(const CurationTask& task, const std::string& prompt,
                                        const std::vector<CandidateResponse>& candidates,
                                        const PairingOutcome& outcome, RankStrategy strategy);

// One JSON object per line, fields in fixed order, records sorted by
// (task_id, k_chosen, k_rejected). Identical inputs always render identical
// bytes.
std::string render_pairs_jsonl(std::vector<PreferencePair> pairs);

// Renders and writes atomically. An empty pair list still creates the file.
void export_pairs(const std::vector<PreferencePair>& pairs, const std::filesystem::path& path);

}  // namespace halprobe::curation
