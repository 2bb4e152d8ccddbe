#include "halprobe/curation/ranking.hpp"

#include <algorithm>
#include <numeric>

#include "halprobe/errors.hpp"

namespace halprobe::curation {

int compare_by_strategy(const CandidateResponse& a, const CandidateResponse& b,
                        RankStrategy strategy) {
  if (strategy == RankStrategy::Occurrence) {
    if (a.consistency.k_no != b.consistency.k_no) {
      return a.consistency.k_no < b.consistency.k_no ? -1 : 1;
    }
    return 0;
  }
  // K/T compared by cross-multiplication; both sides must have T > 0.
  const long long lhs = static_cast<long long>(a.consistency.k_no) * b.consistency.t_total;
  const long long rhs = static_cast<long long>(b.consistency.k_no) * a.consistency.t_total;
  if (lhs != rhs) return lhs < rhs ? -1 : 1;
  return 0;
}

std::vector<std::size_t> rank(const std::vector<CandidateResponse>& candidates,
                              RankStrategy strategy) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!candidates[i].complete) {
      throw PreconditionError("rank requires complete candidates");
    }
    if (strategy == RankStrategy::RelativeRatio && candidates[i].consistency.t_total == 0) {
      continue;
    }
    order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return compare_by_strategy(candidates[a], candidates[b], strategy) < 0;
  });
  return order;
}

namespace {

bool pairable(const CandidateResponse& candidate) {
  return candidate.complete && candidate.consistency.t_total > 0;
}

}  // namespace

PairingOutcome make_pairs(const std::vector<CandidateResponse>& candidates,
                          const PairingOptions& options) {
  PairingOutcome outcome;
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!candidates[i].complete) {
      ++outcome.incomplete_candidates;
      continue;
    }
    if (candidates[i].consistency.t_total == 0) {
      ++outcome.zero_claim_candidates;
      continue;
    }
    eligible.push_back(i);
  }

  auto consider = [&](std::size_t i, std::size_t j) {
    const int cmp = compare_by_strategy(candidates[i], candidates[j], options.strategy);
    if (cmp == 0) {
      ++outcome.ties_discarded;
      return;
    }
    const std::size_t chosen = cmp < 0 ? i : j;
    const std::size_t rejected = cmp < 0 ? j : i;
    if (options.coverage_constraint &&
        candidates[chosen].claims.size() < candidates[rejected].claims.size()) {
      ++outcome.coverage_discarded;
      return;
    }
    outcome.pairs.emplace_back(chosen, rejected);
  };

  if (options.policy == PairPolicy::AllPairs) {
    for (std::size_t a = 0; a < eligible.size(); ++a) {
      for (std::size_t b = a + 1; b < eligible.size(); ++b) {
        consider(eligible[a], eligible[b]);
      }
    }
  } else {
    if (eligible.size() >= 2) {
      std::vector<std::size_t> order(eligible);
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return compare_by_strategy(candidates[a], candidates[b], options.strategy) < 0;
      });
      consider(order.front(), order.back());
    }
  }
  return outcome;
}

}  // namespace halprobe::curation
