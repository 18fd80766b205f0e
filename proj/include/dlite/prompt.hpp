#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "dlite/dataset.hpp"

namespace dlite {

enum class Variant { NI, WI, WIE };

const char* variant_name(Variant v);
Variant variant_from_name(const std::string& name);

struct PromptSpec {
  Task task = Task::Syntax;
  Variant variant = Variant::NI;
  bool require_reasons = false;
  int chunk_count = 1;
  TextMode mode = TextMode::Unicode;
};

struct TaskVariantMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Plain-text template files with {{placeholder}} slots, loaded once from a
/// directory (see data/templates/).
class TemplateStore {
 public:
  static TemplateStore load(const std::string& dir);
  const std::string& get(const std::string& name) const;

 private:
  std::map<std::string, std::string> files_;
};

std::string expand_template(const std::string& tpl,
                            const std::map<std::string, std::string>& slots);

/// Folds the unicode DL symbols to the ascii grammar (⊑ → [=, ∃ → exists …).
std::string ascii_fold(const std::string& text);

/// TBox in fragment 1 only; ABox in k near-equal contiguous slices.
std::vector<Ontology> chunk_ontology(const Ontology& o, int k);

/// Deterministic prompt text(s) for the item: one per chunk. Throws
/// TaskVariantMismatch when the item's task differs from the spec's, or when
/// WI/WIE is requested for a task that has no instruction block (probe,
/// query, satisfiability).
std::vector<std::string> render_prompt(const PromptSpec& spec, const TaskItem& item,
                                       const TemplateStore& store);

}  // namespace dlite
