#include "dlite/eval.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

namespace dlite {

namespace fs = std::filesystem;
using nlohmann::json;

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::True: return "true";
    case Verdict::False: return "false";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

json Metrics::to_json() const {
  return {{"precision", precision},
          {"recall", recall},
          {"f1", f1},
          {"deduction_rate", deduction_rate},
          {"counts",
           {{"tp", counts.tp},
            {"fp", counts.fp},
            {"tn", counts.tn},
            {"fn", counts.fn},
            {"unknown", counts.unknown}}}};
}

VerdictRules VerdictRules::defaults() {
  VerdictRules r;
  r.hedges = {"possibly", "might be", "unclear", "not sure",
              "cannot determine", "cannot be determined", "hard to say"};
  r.negative = {"incorrect",          "cannot be deduced", "can not be deduced",
                "cannot deduce",      "not deducible",     "not correct",
                "not satisfiable",    "unsatisfiable",     "does not hold",
                "doesn't hold",       "not true",          "not valid",
                "invalid",            "false",             "no,"};
  r.positive = {"correct",        "can be deduced", "deducible", "holds",
                "satisfiable",    "true",           "valid",     "yes,"};
  return r;
}

VerdictRules VerdictRules::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return defaults();
  json j = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) return defaults();
  VerdictRules r;
  r.hedges = j.value("hedges", defaults().hedges);
  r.negative = j.value("negative", defaults().negative);
  r.positive = j.value("positive", defaults().positive);
  return r;
}

namespace {

std::string lowercase(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

bool contains_any(const std::string& text, const std::vector<std::string>& needles) {
  for (const std::string& n : needles)
    if (text.find(n) != std::string::npos) return true;
  return false;
}

Verdict classify(const std::string& segment, const VerdictRules& rules) {
  std::string text = lowercase(segment);
  if (contains_any(text, rules.hedges)) return Verdict::Unknown;
  if (contains_any(text, rules.negative)) return Verdict::False;  // negation scope first
  if (contains_any(text, rules.positive)) return Verdict::True;
  return Verdict::Unknown;
}

// Positions where "<number>." or "<number>)" starts a segment, at the
// beginning of the text or of a line (leading whitespace allowed).
std::vector<std::pair<int, std::size_t>> segment_starts(const std::string& text) {
  std::vector<std::pair<int, std::size_t>> out;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t line = i;
    while (line < text.size() && (text[line] == ' ' || text[line] == '\t')) ++line;
    std::size_t d = line;
    while (d < text.size() && std::isdigit(static_cast<unsigned char>(text[d]))) ++d;
    if (d > line && d < text.size() && (text[d] == '.' || text[d] == ')'))
      out.emplace_back(std::stoi(text.substr(line, d - line)), line);
    i = text.find('\n', i);
    if (i == std::string::npos) break;
    ++i;
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::vector<Verdict> parse_verdicts(const std::string& response, int n_items,
                                    const VerdictRules& rules) {
  std::vector<Verdict> out(static_cast<std::size_t>(std::max(n_items, 0)),
                           Verdict::Unknown);
  auto starts = segment_starts(response);
  for (std::size_t s = 0; s < starts.size(); ++s) {
    int item = starts[s].first;
    if (item < 1 || item > n_items) continue;
    std::size_t from = starts[s].second;
    std::size_t to = (s + 1 < starts.size()) ? starts[s + 1].second : response.size();
    out[static_cast<std::size_t>(item - 1)] =
        classify(response.substr(from, to - from), rules);
  }
  return out;
}

Metrics score_binary(const std::vector<Verdict>& verdicts, const std::vector<bool>& gold,
                     bool exclude_unknown) {
  if (verdicts.size() != gold.size())
    throw LengthMismatch("verdicts and gold differ in length");
  Metrics m;
  long n_true = 0;
  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    bool g = gold[i];
    switch (verdicts[i]) {
      case Verdict::True:
        ++n_true;
        (g ? m.counts.tp : m.counts.fp)++;
        break;
      case Verdict::False:
        (g ? m.counts.fn : m.counts.tn)++;
        break;
      case Verdict::Unknown:
        ++m.counts.unknown;
        if (!exclude_unknown) (g ? m.counts.fn : m.counts.fp)++;
        break;
    }
  }
  long pd = m.counts.tp + m.counts.fp, rd = m.counts.tp + m.counts.fn;
  m.precision = pd > 0 ? static_cast<double>(m.counts.tp) / static_cast<double>(pd) : 0.0;
  m.recall = rd > 0 ? static_cast<double>(m.counts.tp) / static_cast<double>(rd) : 0.0;
  m.f1 = (m.precision + m.recall) > 0.0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  m.deduction_rate =
      verdicts.empty() ? 0.0
                       : static_cast<double>(n_true) / static_cast<double>(verdicts.size());
  return m;
}

double deduction_rate(const std::vector<Verdict>& verdicts) {
  if (verdicts.empty()) return 0.0;
  long n_true = 0;
  for (Verdict v : verdicts)
    if (v == Verdict::True) ++n_true;
  return static_cast<double>(n_true) / static_cast<double>(verdicts.size());
}

std::pair<double, double> score_query(const std::vector<std::vector<std::string>>& predicted,
                                      const std::vector<std::vector<std::string>>& gold) {
  std::size_t arity = !gold.empty() ? gold[0].size()
                                    : (!predicted.empty() ? predicted[0].size() : 0);
  for (const auto& t : predicted)
    if (t.size() != arity) throw ArityMismatch("predicted tuple arity differs from gold");
  for (const auto& t : gold)
    if (t.size() != arity) throw ArityMismatch("gold tuples have mixed arity");
  std::set<std::vector<std::string>> p(predicted.begin(), predicted.end());
  std::set<std::vector<std::string>> g(gold.begin(), gold.end());
  if (p.empty() && g.empty()) return {1.0, 1.0};
  std::size_t inter = 0;
  for (const auto& t : p) inter += g.count(t);
  double prec = p.empty() ? 0.0 : static_cast<double>(inter) / static_cast<double>(p.size());
  double rec = g.empty() ? 1.0 : static_cast<double>(inter) / static_cast<double>(g.size());
  return {prec, rec};
}

json EvalRecord::to_json() const {
  return {{"dataset", dataset},   {"model", model},   {"variant", variant},
          {"task", task},         {"metrics", metrics.to_json()},
          {"n_items", n_items},   {"n_unknown", n_unknown},
          {"items", items.is_null() ? json::array() : items}};
}

void write_report(const std::vector<EvalRecord>& records, const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  std::vector<const EvalRecord*> order;
  order.reserve(records.size());
  for (const EvalRecord& r : records) order.push_back(&r);
  std::sort(order.begin(), order.end(), [](const EvalRecord* a, const EvalRecord* b) {
    return std::tie(a->dataset, a->model, a->variant, a->task) <
           std::tie(b->dataset, b->model, b->variant, b->task);
  });

  json full = json::array();
  for (const EvalRecord* r : order) full.push_back(r->to_json());
  std::ofstream jf(fs::path(out_dir) / "report.json", std::ios::binary);
  if (!jf) throw IoFailure("cannot write report.json in " + out_dir);
  jf << full.dump(2) << "\n";

  std::ofstream cf(fs::path(out_dir) / "report.csv", std::ios::binary);
  if (!cf) throw IoFailure("cannot write report.csv in " + out_dir);
  cf << "dataset,model,variant,task,precision,recall,f1,deduction_rate,n_items,n_unknown\n";
  for (const EvalRecord* r : order) {
    const Metrics& m = r->metrics;
    cf << r->dataset << ',' << r->model << ',' << r->variant << ',' << r->task << ','
       << fmt(m.precision) << ',' << fmt(m.recall) << ',' << fmt(m.f1) << ','
       << fmt(m.deduction_rate) << ',' << r->n_items << ',' << r->n_unknown << "\n";
  }

  std::ofstream tf(fs::path(out_dir) / "transcripts.jsonl", std::ios::binary);
  if (!tf) throw IoFailure("cannot write transcripts.jsonl in " + out_dir);
  for (const EvalRecord* r : order) {
    if (!r->items.is_array()) continue;
    for (const json& item : r->items) {
      json row = item;
      row["dataset"] = r->dataset;
      row["model"] = r->model;
      row["variant"] = r->variant;
      row["task"] = r->task;
      tf << row.dump() << "\n";
    }
  }
}

}  // namespace dlite
