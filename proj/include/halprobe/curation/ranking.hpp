#pragma once

#include <cstddef>
#include <vector>

#include "halprobe/curation/types.hpp"

namespace halprobe::curation {

// Stable ascending ordering of candidate indices, best (fewest
// inconsistencies) first. Under RelativeRatio, candidates with T = 0 are
// excluded before ranking; ratio comparisons use exact cross-multiplication,
// never floating division. Equal keys preserve input order.
std::vector<std::size_t> rank(const std::vector<CandidateResponse>& candidates,
                              RankStrategy strategy);

// Three-way comparison of the ranking key for candidates a and b under the
// given strategy: negative when a ranks strictly better, 0 on a tie.
int compare_by_strategy(const CandidateResponse& a, const CandidateResponse& b,
                        RankStrategy strategy);

struct PairingOptions {
  RankStrategy strategy = RankStrategy::Occurrence;
  PairPolicy policy = PairPolicy::AllPairs;
  bool coverage_constraint = false;
};

struct PairingOutcome {
  // Index pairs (chosen, rejected) into the candidates vector, in
  // deterministic enumeration order.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  int ties_discarded = 0;
  int coverage_discarded = 0;
  int zero_claim_candidates = 0;  // T = 0, never paired
  int incomplete_candidates = 0;
};

// Enumerates preference pairs between candidates. Ties on the ranking key are
// discarded; T = 0 and incomplete candidates never appear in any pair; the
// coverage constraint additionally requires the chosen side to carry at least
// as many claims as the rejected side.
PairingOutcome make_pairs(const std::vector<CandidateResponse>& candidates,
                          const PairingOptions& options);

}  // namespace halprobe::curation
