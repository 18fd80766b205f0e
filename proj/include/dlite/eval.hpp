#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace dlite {

enum class Verdict { True, False, Unknown };

const char* verdict_name(Verdict v);

struct Counts {
  long tp = 0, fp = 0, tn = 0, fn = 0, unknown = 0;
};

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double deduction_rate = 0.0;
  Counts counts;

  nlohmann::json to_json() const;
};

struct LengthMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ArityMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Keyword rules used to map answer phrasings to verdicts. Checked in order:
/// hedges (→ Unknown), negative phrasings, positive phrasings; a segment
/// matching none stays Unknown. Corpus-tunable via a JSON data file.
struct VerdictRules {
  std::vector<std::string> hedges;
  std::vector<std::string> negative;
  std::vector<std::string> positive;

  static VerdictRules defaults();
  static VerdictRules load(const std::string& path);  // falls back to defaults
};

/// Aligns numbered segments ("1.", "2.", …) of a free-text response to
/// items; output length is exactly n_items. Degrades to Unknown.
std::vector<Verdict> parse_verdicts(const std::string& response, int n_items,
                                    const VerdictRules& rules = VerdictRules::defaults());

/// Positive class = correct/satisfiable/deducible. Unknown counts as
/// predicting the negative of gold unless exclude_unknown.
Metrics score_binary(const std::vector<Verdict>& verdicts, const std::vector<bool>& gold,
                     bool exclude_unknown = false);

/// |True| / |items|: confirmed fraction over an all-true implication set.
double deduction_rate(const std::vector<Verdict>& verdicts);

/// Set-based precision/recall over answer tuples. Empty prediction scores
/// (0, 0) against a nonempty gold; two empty sets score (1, 1).
std::pair<double, double> score_query(const std::vector<std::vector<std::string>>& predicted,
                                      const std::vector<std::vector<std::string>>& gold);

struct EvalRecord {
  std::string dataset;
  std::string model;
  std::string variant;
  std::string task;
  Metrics metrics;
  long n_items = 0;
  long n_unknown = 0;
  nlohmann::json items;  // per-item transcript entries

  nlohmann::json to_json() const;
};

/// Writes report.json (full), report.csv (metric matrix) and
/// transcripts.jsonl into out_dir with deterministic ordering.
void write_report(const std::vector<EvalRecord>& records, const std::string& out_dir);

}  // namespace dlite
