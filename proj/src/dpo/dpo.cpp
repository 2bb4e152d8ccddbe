#include "halprobe/dpo/dpo.hpp"

#include <cmath>

#include "halprobe/errors.hpp"
#include "halprobe/util/jsonl.hpp"

namespace halprobe::dpo {

void DpoConfig::validate() const {
  if (!std::isfinite(beta)) throw ConfigError("dpo: beta must be finite");
  if (beta < 0) throw ConfigError("dpo: beta must be positive");
  if (beta == 0 && !allow_degenerate) {
    throw ConfigError("dpo: beta must be strictly positive");
  }
}

void PairLogProbs::validate() const {
  if (!std::isfinite(pol_chosen) || !std::isfinite(ref_chosen) || !std::isfinite(pol_rejected) ||
      !std::isfinite(ref_rejected)) {
    throw PreconditionError("dpo: log-probabilities must be finite");
  }
}

double softplus(double x) {
  if (x > 0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double logistic(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double dpo_margin(const PairLogProbs& lp) {
  lp.validate();
  return (lp.pol_chosen - lp.ref_chosen) - (lp.pol_rejected - lp.ref_rejected);
}

double dpo_loss(const PairLogProbs& lp, const DpoConfig& cfg) {
  cfg.validate();
  return softplus(-cfg.beta * dpo_margin(lp));
}

double dpo_grad_margin(const PairLogProbs& lp, const DpoConfig& cfg) {
  cfg.validate();
  return -cfg.beta * logistic(-cfg.beta * dpo_margin(lp));
}

double dpo_loss_batch(const std::vector<PairLogProbs>& batch, const DpoConfig& cfg) {
  cfg.validate();
  if (batch.empty()) throw PreconditionError("dpo: batch must be non-empty");
  double sum = 0;
  for (const auto& lp : batch) sum += dpo_loss(lp, cfg);
  return sum / static_cast<double>(batch.size());
}

std::vector<BatchEntry> read_batch_file(const std::string& path, bool normalize_length) {
  std::vector<BatchEntry> entries;
  util::for_each_jsonl(path, [&](std::size_t line_no, const nlohmann::json& obj) {
    auto field = [&](const char* name) -> double {
      if (!obj.contains(name) || !obj.at(name).is_number()) {
        throw Error(path + ":" + std::to_string(line_no) + ": missing numeric field \"" +
                    name + "\"");
      }
      return obj.at(name).get<double>();
    };
    BatchEntry entry;
    if (obj.contains("id")) entry.id = obj.at("id").get<std::string>();
    entry.lp.pol_chosen = field("pol_chosen");
    entry.lp.ref_chosen = field("ref_chosen");
    entry.lp.pol_rejected = field("pol_rejected");
    entry.lp.ref_rejected = field("ref_rejected");
    if (normalize_length) {
      const double chosen_len = field("chosen_len");
      const double rejected_len = field("rejected_len");
      if (chosen_len < 1 || rejected_len < 1) {
        throw Error(path + ":" + std::to_string(line_no) + ": token counts must be >= 1");
      }
      entry.lp.pol_chosen /= chosen_len;
      entry.lp.ref_chosen /= chosen_len;
      entry.lp.pol_rejected /= rejected_len;
      entry.lp.ref_rejected /= rejected_len;
    }
    entry.lp.validate();
    entries.push_back(std::move(entry));
  });
  return entries;
}

}  // namespace halprobe::dpo
