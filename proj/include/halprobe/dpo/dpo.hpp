#pragma once

#include <optional>
#include <string>
#include <vector>

namespace halprobe::dpo {

struct DpoConfig {
  double beta = 0.1;
  // beta == 0 collapses the objective to a constant; it is accepted only when
  // this flag is set (degenerate-case tests).
  bool allow_degenerate = false;

  void validate() const;
};

// Sequence log-probabilities (nats) for one preference pair, supplied by an
// external trainer: log p_policy / log p_reference of the chosen and rejected
// responses.
struct PairLogProbs {
  double pol_chosen = 0;
  double ref_chosen = 0;
  double pol_rejected = 0;
  double ref_rejected = 0;

  void validate() const;  // all four finite
};

// Delta = (pol_chosen - ref_chosen) - (pol_rejected - ref_rejected).
double dpo_margin(const PairLogProbs& lp);

// -log sigmoid(beta * Delta), computed as softplus(-beta * Delta) so large
// |beta * Delta| neither overflows nor loses the linear tail.
double dpo_loss(const PairLogProbs& lp, const DpoConfig& cfg);

// d(loss)/d(Delta) = -beta * sigmoid(-beta * Delta).
double dpo_grad_margin(const PairLogProbs& lp, const DpoConfig& cfg);

// Arithmetic mean of per-pair losses, summed in index order so the result is
// bit-reproducible.
double dpo_loss_batch(const std::vector<PairLogProbs>& batch, const DpoConfig& cfg);

// Numerically stable log(1 + exp(x)).
double softplus(double x);

double logistic(double x);

// One line of a dpo-check input file.
struct BatchEntry {
  std::optional<std::string> id;
  PairLogProbs lp;
};

// Reads a JSON-lines batch file with fields pol_chosen / ref_chosen /
// pol_rejected / ref_rejected and optional id. When normalize_length is set,
// each side is divided by its token count (fields chosen_len / rejected_len,
// required in that mode).
std::vector<BatchEntry> read_batch_file(const std::string& path, bool normalize_length);

}  // namespace halprobe::dpo
