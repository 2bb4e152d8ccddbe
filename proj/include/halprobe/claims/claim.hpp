#pragma once

#include <string>
#include <vector>

namespace halprobe::claims {

enum class ClaimCategory {
  Existence,
  Knowledge,
  Quantity,
  Relation,
  Attribute,
  Action,
  Reasoning,
  Other,
};

const char* to_string(ClaimCategory category);
ClaimCategory claim_category_from_string(const std::string& name);

// A minimal factual assertion lifted from a model response, plus the binary
// question that checks it.
struct AtomicClaim {
  std::string source_text;  // verbatim span or sentence from the response
  ClaimCategory category = ClaimCategory::Other;
  std::string question;     // always ends with '?'
  bool multi_marked = false;  // only ever true for Quantity claims

  bool operator==(const AtomicClaim&) const = default;
};

enum class ExtractionWarningKind { SourceNotSubstring, VagueLanguage, DuplicateQuestion };

const char* to_string(ExtractionWarningKind kind);

struct ExtractionWarning {
  std::size_t claim_index = 0;
  ExtractionWarningKind kind = ExtractionWarningKind::SourceNotSubstring;

  bool operator==(const ExtractionWarning&) const = default;
};

struct SemanticExtractionResult {
  std::vector<AtomicClaim> claims;
  std::vector<ExtractionWarning> warnings;
};

}  // namespace halprobe::claims
