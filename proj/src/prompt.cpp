#include "dlite/prompt.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace dlite {

namespace fs = std::filesystem;

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::NI: return "ni";
    case Variant::WI: return "wi";
    case Variant::WIE: return "wie";
  }
  return "ni";
}

Variant variant_from_name(const std::string& name) {
  for (Variant v : {Variant::NI, Variant::WI, Variant::WIE})
    if (name == variant_name(v)) return v;
  throw std::invalid_argument("unknown variant name: " + name);
}

TemplateStore TemplateStore::load(const std::string& dir) {
  TemplateStore store;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".txt") continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    store.files_[entry.path().stem().string()] = buf.str();
  }
  return store;
}

const std::string& TemplateStore::get(const std::string& name) const {
  auto it = files_.find(name);
  if (it == files_.end()) throw std::runtime_error("missing template: " + name);
  return it->second;
}

std::string expand_template(const std::string& tpl,
                            const std::map<std::string, std::string>& slots) {
  std::string out;
  std::size_t pos = 0;
  while (pos < tpl.size()) {
    std::size_t open = tpl.find("{{", pos);
    if (open == std::string::npos) {
      out.append(tpl, pos, std::string::npos);
      break;
    }
    std::size_t close = tpl.find("}}", open);
    if (close == std::string::npos) {
      out.append(tpl, pos, std::string::npos);
      break;
    }
    out.append(tpl, pos, open - pos);
    std::string key = tpl.substr(open + 2, close - open - 2);
    auto it = slots.find(key);
    if (it != slots.end()) out += it->second;
    pos = close + 2;
  }
  return out;
}

std::string ascii_fold(const std::string& text) {
  static const std::vector<std::pair<std::string, std::string>> table = {
      {"⊑", "[="}, {"⊓", "&"}, {"¬", "!"}, {"∃", "exists "},
      {"⁻", "^-"}, {"←", "<-"}, {"≡", "=="},
  };
  std::string out = text;
  for (const auto& [from, to] : table) {
    std::size_t pos = 0;
    while ((pos = out.find(from, pos)) != std::string::npos) {
      out.replace(pos, from.size(), to);
      pos += to.size();
    }
  }
  return out;
}

std::vector<Ontology> chunk_ontology(const Ontology& o, int k) {
  if (k < 1) k = 1;
  std::vector<Ontology> parts;
  parts.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) parts.emplace_back(o.dialect());
  for (const Axiom& ax : o.tbox()) parts[0].add(ax);
  const auto& abox = o.abox();
  std::size_t n = abox.size(), kk = static_cast<std::size_t>(k);
  std::size_t base = n / kk, rem = n % kk, at = 0;
  for (std::size_t i = 0; i < kk; ++i) {
    std::size_t len = base + (i < rem ? 1 : 0);
    for (std::size_t j = 0; j < len; ++j) parts[i].add(abox[at++]);
  }
  return parts;
}

namespace {

std::string fold_if(const std::string& text, TextMode mode) {
  return mode == TextMode::Ascii ? ascii_fold(text) : text;
}

std::string ontology_block(const Ontology& o, TextMode mode) {
  std::string out;
  for (const Axiom& ax : o.tbox()) out += to_text(ax, TextMode::Unicode) + "\n";
  for (const Assertion& as : o.abox()) out += to_text(as, TextMode::Unicode) + "\n";
  return fold_if(out, mode);
}

std::string numbered_block(const std::vector<std::string>& statements, TextMode mode) {
  std::string out;
  for (std::size_t i = 0; i < statements.size(); ++i) {
    out += std::to_string(i + 1) + ". " + fold_if(statements[i], mode);
    if (i + 1 < statements.size()) out += "\n";
  }
  return out;
}

bool instructable(Task t) {
  return t == Task::Syntax || t == Task::Subsumption || t == Task::Instance;
}

std::string rules_key(Task t) {
  if (t == Task::Syntax) return "rules_syntax";
  if (t == Task::Subsumption) return "rules_subsumption";
  return "rules_instance";
}

std::string examples_key(Task t) {
  if (t == Task::Syntax) return "examples_syntax";
  if (t == Task::Subsumption) return "examples_subsumption";
  return "examples_instance";
}

}  // namespace

std::vector<std::string> render_prompt(const PromptSpec& spec, const TaskItem& item,
                                       const TemplateStore& store) {
  if (item.task != spec.task)
    throw TaskVariantMismatch(std::string("item task ") + task_name(item.task) +
                              " does not match prompt task " + task_name(spec.task));
  if (spec.variant != Variant::NI && !instructable(spec.task))
    throw TaskVariantMismatch(std::string(task_name(spec.task)) +
                              " prompts have no instruction variant");
  if (spec.chunk_count > 1 && spec.task != Task::Query)
    throw std::invalid_argument("chunking applies to the query task only");

  bool reasons = spec.require_reasons || spec.task == Task::ProbeInverse ||
                 spec.task == Task::ProbeFunctional;
  std::map<std::string, std::string> slots;
  slots["reasons"] = reasons ? " Give reasons or inferring process." : "";
  slots["instructions"] =
      spec.variant != Variant::NI ? store.get(rules_key(spec.task)) : "";
  slots["examples"] =
      spec.variant == Variant::WIE ? store.get(examples_key(spec.task)) : "";
  slots["statements"] = numbered_block(item.statements, spec.mode);

  if (spec.task == Task::Query && spec.chunk_count > 1) {
    int k = spec.chunk_count;
    std::vector<Ontology> parts = chunk_ontology(item.ontology, k);
    std::string queries =
        "Queries:\n" + slots["statements"] + "\n\nAnswer:\n";
    std::vector<std::string> prompts;
    for (int i = 0; i < k; ++i) {
      std::map<std::string, std::string> s = slots;
      s["ontology"] = ontology_block(parts[static_cast<std::size_t>(i)], spec.mode);
      s["part"] = std::to_string(i + 1);
      s["parts"] = std::to_string(k);
      s["queries_block"] = (i + 1 == k) ? queries : "";
      if (i == 0) {
        s["chunk_note"] =
            " Because ontology is relatively large, it will be entered in several times.";
        s["part"] = " (part 1 of " + std::to_string(k) + ")";
        prompts.push_back(expand_template(store.get("query"), s));
      } else {
        prompts.push_back(expand_template(store.get("continuation"), s));
      }
    }
    return prompts;
  }

  slots["ontology"] = ontology_block(item.ontology, spec.mode);
  std::string tpl;
  switch (spec.task) {
    case Task::Syntax:
      tpl = "syntax";
      break;
    case Task::Query:
      tpl = "query";
      slots["chunk_note"] = "";
      slots["part"] = "";
      slots["queries_block"] = "Queries:\n" + slots["statements"] + "\n\nAnswer:\n";
      break;
    case Task::Satisfiability:
      tpl = "satisfiability";
      break;
    default:
      tpl = "implication";
      break;
  }
  return {expand_template(store.get(tpl), slots)};
}

}  // namespace dlite
