#include <doctest.h>

#include <algorithm>
#include <set>

#include "halprobe/curation/ranking.hpp"
#include "halprobe/errors.hpp"
#include "halprobe/util/rng.hpp"

using namespace halprobe;
using namespace halprobe::curation;

namespace {

CandidateResponse candidate(int k, int t, int claim_count = -1) {
  CandidateResponse c;
  c.consistency.k_no = k;
  c.consistency.t_total = t;
  if (claim_count < 0) claim_count = t;
  for (int i = 0; i < claim_count; ++i) {
    c.claims.push_back({"s", claims::ClaimCategory::Existence, "q?", false});
  }
  c.text = "cand k=" + std::to_string(k) + " t=" + std::to_string(t);
  return c;
}

// Independent re-statement of the pairing rules, used as the oracle.
std::set<std::pair<std::size_t, std::size_t>> brute_force_pairs(
    const std::vector<CandidateResponse>& candidates, RankStrategy strategy,
    bool coverage_constraint) {
  std::set<std::pair<std::size_t, std::size_t>> result;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    for (std::size_t j = 0; j < candidates.size(); ++j) {
      if (i == j) continue;
      const auto& a = candidates[i];
      const auto& b = candidates[j];
      if (!a.complete || !b.complete) continue;
      if (a.consistency.t_total == 0 || b.consistency.t_total == 0) continue;
      bool strictly_better = false;
      if (strategy == RankStrategy::Occurrence) {
        strictly_better = a.consistency.k_no < b.consistency.k_no;
      } else {
        strictly_better = static_cast<long long>(a.consistency.k_no) * b.consistency.t_total <
                          static_cast<long long>(b.consistency.k_no) * a.consistency.t_total;
      }
      if (!strictly_better) continue;
      if (coverage_constraint && a.claims.size() < b.claims.size()) continue;
      result.emplace(i, j);
    }
  }
  return result;
}

}  // namespace

TEST_CASE("occurrence ranking sorts by K, stably") {
  std::vector<CandidateResponse> candidates = {candidate(0, 3), candidate(2, 3), candidate(1, 3)};
  CHECK(rank(candidates, RankStrategy::Occurrence) == std::vector<std::size_t>{0, 2, 1});

  std::vector<CandidateResponse> equal = {candidate(1, 3), candidate(1, 4), candidate(1, 5)};
  CHECK(rank(equal, RankStrategy::Occurrence) == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("strategies can disagree") {
  // A: K=2 of 10 (ratio 0.2), B: K=1 of 4 (ratio 0.25).
  std::vector<CandidateResponse> candidates = {candidate(2, 10), candidate(1, 4)};
  CHECK(rank(candidates, RankStrategy::Occurrence) == std::vector<std::size_t>{1, 0});
  CHECK(rank(candidates, RankStrategy::RelativeRatio) == std::vector<std::size_t>{0, 1});
}

TEST_CASE("ratio ranking excludes T=0 and compares exactly") {
  std::vector<CandidateResponse> candidates = {candidate(0, 0), candidate(1, 3), candidate(2, 6)};
  // 1/3 vs 2/6 is an exact tie; stable order preserved, T=0 dropped.
  CHECK(rank(candidates, RankStrategy::RelativeRatio) == std::vector<std::size_t>{1, 2});
}

TEST_CASE("incomplete candidates cannot be ranked") {
  std::vector<CandidateResponse> candidates = {candidate(0, 3)};
  candidates.push_back(candidate(1, 3));
  candidates[1].complete = false;
  CHECK_THROWS_AS(rank(candidates, RankStrategy::Occurrence), PreconditionError);
}

TEST_CASE("all-pairs enumeration on the K=[0,2,1] example") {
  std::vector<CandidateResponse> candidates = {candidate(0, 3), candidate(2, 3), candidate(1, 3)};
  const auto outcome = make_pairs(candidates, {});
  REQUIRE(outcome.pairs.size() == 3);
  CHECK(outcome.pairs[0] == std::pair<std::size_t, std::size_t>{0, 1});
  CHECK(outcome.pairs[1] == std::pair<std::size_t, std::size_t>{0, 2});
  CHECK(outcome.pairs[2] == std::pair<std::size_t, std::size_t>{2, 1});
  CHECK(outcome.ties_discarded == 0);
}

TEST_CASE("ties are discarded") {
  std::vector<CandidateResponse> candidates = {candidate(1, 3), candidate(1, 3), candidate(1, 3)};
  const auto outcome = make_pairs(candidates, {});
  CHECK(outcome.pairs.empty());
  CHECK(outcome.ties_discarded == 3);
}

TEST_CASE("coverage constraint discards pairs with fewer chosen claims") {
  std::vector<CandidateResponse> candidates = {candidate(0, 3, 3), candidate(2, 5, 5)};
  PairingOptions options;
  options.coverage_constraint = true;
  const auto outcome = make_pairs(candidates, options);
  CHECK(outcome.pairs.empty());
  CHECK(outcome.coverage_discarded == 1);

  options.coverage_constraint = false;
  CHECK(make_pairs(candidates, options).pairs.size() == 1);
}

TEST_CASE("zero-claim and incomplete candidates never pair") {
  std::vector<CandidateResponse> candidates = {candidate(0, 0), candidate(1, 3), candidate(2, 3)};
  candidates.push_back(candidate(0, 4));
  candidates[3].complete = false;
  const auto outcome = make_pairs(candidates, {});
  REQUIRE(outcome.pairs.size() == 1);
  CHECK(outcome.pairs[0] == std::pair<std::size_t, std::size_t>{1, 2});
  CHECK(outcome.zero_claim_candidates == 1);
  CHECK(outcome.incomplete_candidates == 1);
}

TEST_CASE("best-vs-worst emits a single extreme pair") {
  std::vector<CandidateResponse> candidates = {candidate(1, 3), candidate(0, 3), candidate(2, 3)};
  PairingOptions options;
  options.policy = PairPolicy::BestVsWorst;
  const auto outcome = make_pairs(candidates, options);
  REQUIRE(outcome.pairs.size() == 1);
  CHECK(outcome.pairs[0] == std::pair<std::size_t, std::size_t>{1, 2});

  std::vector<CandidateResponse> tied = {candidate(1, 3), candidate(1, 3)};
  CHECK(make_pairs(tied, options).pairs.empty());
}

TEST_CASE("exhaustive brute-force equivalence for small candidate sets") {
  // All K vectors over {0..4} for N in 2..5; T and claim counts varied
  // deterministically, including T=0 candidates.
  for (int n = 2; n <= 5; ++n) {
    std::vector<int> ks(static_cast<std::size_t>(n), 0);
    for (;;) {
      std::vector<CandidateResponse> candidates;
      for (int i = 0; i < n; ++i) {
        const int k = ks[static_cast<std::size_t>(i)];
        int t;
        switch ((i + k) % 3) {
          case 0:
            t = k;  // T = K; yields T=0 when K=0
            break;
          case 1:
            t = k + 3;
            break;
          default:
            t = k + 5;
        }
        candidates.push_back(candidate(k, t, t + (i % 2)));
      }
      for (const RankStrategy strategy : {RankStrategy::Occurrence, RankStrategy::RelativeRatio}) {
        for (const bool coverage : {false, true}) {
          PairingOptions options;
          options.strategy = strategy;
          options.coverage_constraint = coverage;
          const auto outcome = make_pairs(candidates, options);
          std::set<std::pair<std::size_t, std::size_t>> got(outcome.pairs.begin(),
                                                            outcome.pairs.end());
          CHECK(got.size() == outcome.pairs.size());
          CHECK(got == brute_force_pairs(candidates, strategy, coverage));
        }
      }
      // Next K vector.
      int pos = n - 1;
      while (pos >= 0 && ks[static_cast<std::size_t>(pos)] == 4) {
        ks[static_cast<std::size_t>(pos)] = 0;
        --pos;
      }
      if (pos < 0) break;
      ++ks[static_cast<std::size_t>(pos)];
    }
  }
}

TEST_CASE("occurrence ranking is invariant under K translation") {
  util::Rng rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = rng.uniform_int(2, 6);
    std::vector<CandidateResponse> base;
    for (int i = 0; i < n; ++i) {
      const int k = static_cast<int>(rng.uniform_int(0, 8));
      base.push_back(candidate(k, k + static_cast<int>(rng.uniform_int(0, 5)) + 1));
    }
    const int shift = static_cast<int>(rng.uniform_int(1, 10));
    std::vector<CandidateResponse> shifted = base;
    for (auto& c : shifted) {
      c.consistency.k_no += shift;
      c.consistency.t_total += shift;
    }
    CHECK(rank(base, RankStrategy::Occurrence) == rank(shifted, RankStrategy::Occurrence));
  }
}

TEST_CASE("pair strictness and the N(N-1)/2 bound hold on random inputs") {
  util::Rng rng(13);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = rng.uniform_int(2, 7);
    std::vector<CandidateResponse> candidates;
    for (int i = 0; i < n; ++i) {
      const int k = static_cast<int>(rng.uniform_int(0, 4));
      const int t = k + static_cast<int>(rng.uniform_int(0, 4));
      candidates.push_back(candidate(k, t));
    }
    const RankStrategy strategy =
        rng.bernoulli(0.5) ? RankStrategy::Occurrence : RankStrategy::RelativeRatio;
    PairingOptions options;
    options.strategy = strategy;
    const auto outcome = make_pairs(candidates, options);
    CHECK(outcome.pairs.size() <= static_cast<std::size_t>(n * (n - 1) / 2));
    for (const auto& [chosen, rejected] : outcome.pairs) {
      CHECK(compare_by_strategy(candidates[chosen], candidates[rejected], strategy) < 0);
      CHECK(candidates[chosen].consistency.t_total > 0);
      CHECK(candidates[rejected].consistency.t_total > 0);
    }
  }
}

TEST_CASE("distinct keys yield exactly N(N-1)/2 pairs") {
  std::vector<CandidateResponse> candidates;
  for (int k = 0; k < 5; ++k) candidates.push_back(candidate(k, 10));
  const auto outcome = make_pairs(candidates, {});
  CHECK(outcome.pairs.size() == 10);
}
