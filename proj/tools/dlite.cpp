// Command-line entry point: each pipeline stage is independently invokable.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dlite/dataset.hpp"
#include "dlite/digest.hpp"
#include "dlite/eval.hpp"
#include "dlite/gateway.hpp"
#include "dlite/oracle.hpp"
#include "dlite/parser.hpp"
#include "dlite/prompt.hpp"
#include "dlite/reasoner.hpp"

#ifndef DLITE_DATA_DIR
#define DLITE_DATA_DIR "data"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dlite;

namespace {

struct StageError : std::runtime_error {
  std::string stage;
  StageError(std::string st, const std::string& msg)
      : std::runtime_error(msg), stage(std::move(st)) {}
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StageError("ParseStage", "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const std::string& path, const std::string& text) {
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw StageError("ScoreStage", "cannot write " + path);
  out << text;
}

Ontology load_ontology(const std::string& path) {
  auto result = parse_ontology(slurp(path));
  if (!result.errors.empty()) {
    std::ostringstream msg;
    msg << path << " has syntax errors:";
    for (const auto& [line, err] : result.errors)
      msg << "\n  line " << line << ": " << error_class_name(err.error_class) << " — "
          << err.message;
    throw StageError("ParseStage", msg.str());
  }
  return std::move(result.ontology);
}

void write_manifest(const std::string& out_dir, const std::string& command,
                    const json& config) {
  json m = {{"command", command}, {"config", config}, {"format_version", 1}};
  spit((fs::path(out_dir) / "manifest.json").string(), m.dump(2) + "\n");
}

json digest_entry(const std::string& path) {
  return {{"path", path}, {"digest", hex_digest(slurp(path))}};
}

// Statement or exists-filler target text ("R(a, _)" / "R(_, a)").
Implication parse_target(const std::string& text, const Signature& sig) {
  std::string t = text;
  std::size_t us = t.find('_');
  if (us != std::string::npos && t.find('(') != std::string::npos) {
    std::size_t open = t.find('('), comma = t.find(','), close = t.find(')');
    if (comma != std::string::npos && close != std::string::npos) {
      auto trim = [](std::string s) {
        s.erase(0, s.find_first_not_of(" \t"));
        s.erase(s.find_last_not_of(" \t") + 1);
        return s;
      };
      std::string role = trim(t.substr(0, open));
      std::string a = trim(t.substr(open + 1, comma - open - 1));
      std::string b = trim(t.substr(comma + 1, close - comma - 1));
      if (a == "_" && b != "_") return ExistsFiller{b, Role{role, true}};
      if (b == "_" && a != "_") return ExistsFiller{a, Role{role, false}};
    }
  }
  auto out = parse_axiom(text, &sig);
  if (!out.is_ok())
    throw StageError("ParseStage", "bad target '" + text + "': " + out.err->message);
  if (const auto* ax = std::get_if<Axiom>(&*out.ok)) return *ax;
  return std::get<Assertion>(*out.ok);
}

// --------------------------------------------------------------------------
// run-eval / score shared plumbing.

std::string response_for_item(Gateway& gw, const ModelConfig& cfg,
                              const std::vector<std::string>& prompts) {
  std::string joined;
  for (const std::string& p : prompts) {
    Exchange ex = gw.complete(p, cfg);
    if (!joined.empty()) joined += "\n";
    joined += ex.response;
  }
  return joined;
}

std::vector<std::vector<std::string>> parse_answer_tuples(const std::string& response) {
  // every "name(arg, …)" group whose args are plain identifiers
  std::vector<std::vector<std::string>> out;
  std::size_t i = 0;
  while ((i = response.find('(', i)) != std::string::npos) {
    std::size_t close = response.find(')', i);
    if (close == std::string::npos) break;
    std::string inner = response.substr(i + 1, close - i - 1);
    std::vector<std::string> tuple;
    std::istringstream parts(inner);
    std::string part;
    bool ok = !inner.empty();
    while (std::getline(parts, part, ',')) {
      part.erase(0, part.find_first_not_of(" \t"));
      part.erase(part.find_last_not_of(" \t") + 1);
      if (!is_valid_identifier(part)) {
        ok = false;
        break;
      }
      tuple.push_back(part);
    }
    if (ok && !tuple.empty()) out.push_back(tuple);
    i = close + 1;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<EvalRecord> score_items(const std::vector<TaskItem>& items,
                                    const std::vector<std::string>& responses,
                                    const std::string& dataset, const std::string& model,
                                    const std::string& variant, const VerdictRules& rules) {
  std::map<std::string, EvalRecord> by_task;
  std::map<std::string, std::pair<std::vector<Verdict>, std::vector<bool>>> pooled;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const TaskItem& item = items[i];
    std::string task = task_name(item.task);
    EvalRecord& rec = by_task[task];
    rec.dataset = dataset;
    rec.model = model;
    rec.variant = variant;
    rec.task = task;
    if (!rec.items.is_array()) rec.items = json::array();

    if (item.task == Task::Query) {
      auto predicted = parse_answer_tuples(responses[i]);
      auto [p, r] = score_query(predicted, item.gold_answers);
      rec.metrics.precision = p;
      rec.metrics.recall = r;
      rec.metrics.f1 = (p + r) > 0 ? 2 * p * r / (p + r) : 0.0;
      rec.n_items += static_cast<long>(item.gold_answers.size());
      rec.items.push_back({{"item", i},
                           {"query", item.statements},
                           {"predicted", predicted},
                           {"gold", item.gold_answers},
                           {"response", responses[i]}});
      continue;
    }

    int n = static_cast<int>(item.gold.size());
    std::vector<Verdict> verdicts = parse_verdicts(responses[i], n, rules);
    auto& pool = pooled[task];
    for (int k = 0; k < n; ++k) {
      pool.first.push_back(verdicts[static_cast<std::size_t>(k)]);
      pool.second.push_back(item.gold[static_cast<std::size_t>(k)]);
      json row = {{"item", i},
                  {"gold", static_cast<bool>(item.gold[static_cast<std::size_t>(k)])},
                  {"verdict", verdict_name(verdicts[static_cast<std::size_t>(k)])}};
      if (k < static_cast<int>(item.statements.size()))
        row["statement"] = item.statements[static_cast<std::size_t>(k)];
      rec.items.push_back(row);
    }
  }
  std::vector<EvalRecord> out;
  for (auto& [task, rec] : by_task) {
    auto it = pooled.find(task);
    if (it != pooled.end()) {
      rec.metrics = score_binary(it->second.first, it->second.second);
      rec.n_items = static_cast<long>(it->second.first.size());
      rec.n_unknown = rec.metrics.counts.unknown;
    }
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"DL-Lite reasoning, dataset generation and LLM evaluation toolkit"};
  app.require_subcommand(1);

  std::string in_path, out_path, out_dir = "out", templates_dir;
  std::string target_text, query_text, cls_name, role, fresh_role, model_config_path;
  std::string items_path, responses_path, mock_path, dataset_name = "dataset";
  std::string variant_name_opt = "ni", task_opt = "subsumption", cache_dir = "cache";
  std::string keywords_path, manifest_path;
  std::uint64_t seed = 1;
  int depth = 1, chunks = 1, negatives = 8, n_corrupt = 0;
  bool strict = false, offline = false, inverse = false, reasons = false, ascii = false;
  bool as_json = false;

  auto default_templates = [&]() {
    return templates_dir.empty() ? std::string(DLITE_DATA_DIR) + "/templates"
                                 : templates_dir;
  };

  // --- check-syntax ---
  auto* c_syntax = app.add_subcommand("check-syntax", "Parse a file, report error classes");
  c_syntax->add_option("file", in_path)->required();
  c_syntax->add_flag("--strict", strict);

  // --- corrupt ---
  auto* c_corrupt = app.add_subcommand("corrupt", "Corrupt axioms with a syntax error class");
  c_corrupt->add_option("file", in_path)->required();
  c_corrupt->add_option("--class", cls_name, "error class name (default: random per axiom)");
  c_corrupt->add_option("--seed", seed);

  // --- closure ---
  auto* c_closure = app.add_subcommand("closure", "Derived TBox inclusions");
  c_closure->add_option("file", in_path)->required();
  c_closure->add_flag("--json", as_json, "emit derivations as JSON");

  // --- sat ---
  auto* c_sat = app.add_subcommand("sat", "Ontology satisfiability");
  c_sat->add_option("file", in_path)->required();

  // --- entail ---
  auto* c_entail = app.add_subcommand("entail", "Check entailment of targets");
  c_entail->add_option("file", in_path)->required();
  std::vector<std::string> targets;
  c_entail->add_option("--target", targets, "axiom/assertion text (repeatable)");
  std::string targets_file;
  c_entail->add_option("--targets-file", targets_file, "one target per line");

  // --- chase ---
  auto* c_chase = app.add_subcommand("chase", "Bounded restricted chase facts");
  c_chase->add_option("file", in_path)->required();
  c_chase->add_option("--depth", depth);

  // --- query ---
  auto* c_query = app.add_subcommand("query", "Answer a conjunctive query");
  c_query->add_option("file", in_path)->required();
  c_query->add_option("--query", query_text)->required();
  c_query->add_option("--depth", depth)->default_val(3);

  // --- gen-dataset ---
  auto* c_gen = app.add_subcommand("gen-dataset", "Build task items from an ontology");
  c_gen->add_option("--task", task_opt, "syntax|subsumption|instance|probe_inverse|"
                                        "probe_functional|query|satisfiability");
  c_gen->add_option("--input", in_path)->required();
  c_gen->add_option("--out", out_path)->required();
  c_gen->add_option("--seed", seed);
  c_gen->add_option("--negatives", negatives);
  c_gen->add_option("--corrupt", n_corrupt, "corrupted statements for the syntax task");
  c_gen->add_option("--role", role);
  c_gen->add_option("--fresh-role", fresh_role);
  c_gen->add_flag("--inverse", inverse, "probe (funct R^-) instead of (funct R)");
  c_gen->add_option("--query-text", query_text);
  c_gen->add_option("--depth", depth)->default_val(3);

  // --- gen-prompts ---
  auto* c_prompts = app.add_subcommand("gen-prompts", "Render prompts for task items");
  c_prompts->add_option("--items", items_path)->required();
  c_prompts->add_option("--out", out_path)->required();
  c_prompts->add_option("--variant", variant_name_opt, "ni|wi|wie");
  c_prompts->add_option("--chunks", chunks);
  c_prompts->add_flag("--reasons", reasons);
  c_prompts->add_flag("--ascii", ascii);
  c_prompts->add_option("--templates", templates_dir);

  // --- run-eval ---
  auto* c_run = app.add_subcommand("run-eval", "generate → prompt → complete → parse → score");
  c_run->add_option("--items", items_path)->required();
  c_run->add_option("--out", out_dir)->required();
  c_run->add_option("--variant", variant_name_opt, "ni|wi|wie");
  c_run->add_option("--chunks", chunks);
  c_run->add_flag("--reasons", reasons);
  c_run->add_flag("--ascii", ascii);
  c_run->add_option("--templates", templates_dir);
  c_run->add_option("--model-config", model_config_path, "ModelConfig JSON file");
  c_run->add_option("--cache", cache_dir);
  c_run->add_flag("--offline", offline, "serve from cache only");
  c_run->add_option("--mock", mock_path, "fixture map JSON: prompt → response");
  c_run->add_option("--dataset", dataset_name);
  c_run->add_option("--keywords", keywords_path);
  c_run->add_option("--seed", seed);

  // --- score ---
  auto* c_score = app.add_subcommand("score", "Score pre-recorded responses");
  c_score->add_option("--items", items_path)->required();
  c_score->add_option("--responses", responses_path, "JSONL rows {item, response}")->required();
  c_score->add_option("--out", out_dir)->required();
  c_score->add_option("--dataset", dataset_name);
  c_score->add_option("--keywords", keywords_path);

  // --- replay ---
  auto* c_replay = app.add_subcommand("replay", "Re-run an eval from its manifest (offline)");
  c_replay->add_option("manifest", manifest_path)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*c_syntax) {
      auto result = parse_ontology(slurp(in_path), strict);
      for (const auto& [line, err] : result.errors)
        std::cout << "line " << line << ": " << error_class_name(err.error_class) << " — "
                  << err.message << "\n";
      std::cout << (result.errors.empty() ? "ok" : "errors: " +
                    std::to_string(result.errors.size()))
                << " (" << dialect_name(result.ontology.dialect()) << ", "
                << result.ontology.tbox().size() << " axioms, "
                << result.ontology.abox().size() << " assertions)\n";
      return result.errors.empty() ? 0 : 1;
    }

    if (*c_corrupt) {
      Ontology o = load_ontology(in_path);
      Rng rng(seed);
      for (const Axiom& ax : o.tbox()) {
        std::optional<CorruptionResult> r;
        if (cls_name.empty()) {
          r = corrupt_random(ax, rng.next());
        } else {
          for (int c = 0; c < kSyntaxErrorClassCount; ++c)
            if (error_class_name(static_cast<SyntaxErrorClass>(c)) == cls_name)
              r = corrupt(ax, static_cast<SyntaxErrorClass>(c), rng.next());
        }
        if (r)
          std::cout << r->text << "\t# " << error_class_name(r->applied) << "\n";
        else
          std::cout << to_text(ax) << "\t# not applicable\n";
      }
      return 0;
    }

    if (*c_closure) {
      Ontology o = load_ontology(in_path);
      if (as_json) {
        std::cout << derivations_json(tbox_closure(o)).dump(2) << "\n";
      } else {
        for (const Implication& imp : extract_tbox_implications(o))
          std::cout << to_text(imp) << "\n";
      }
      return 0;
    }

    if (*c_sat) {
      Ontology o = load_ontology(in_path);
      SatResult r = is_satisfiable(o);
      switch (r.status) {
        case SatResult::Status::Satisfiable:
          std::cout << "satisfiable\n";
          break;
        case SatResult::Status::Unsatisfiable:
          std::cout << "unsatisfiable\n";
          if (r.violation) {
            std::cout << "violated: " << to_text(r.violation->axiom) << "\n";
            for (const Assertion& a : r.violation->offending)
              std::cout << "  " << to_text(a) << "\n";
          }
          break;
        case SatResult::Status::DialectRejected:
          std::cout << "dialect-rejected: " << r.note << "\n";
          break;
      }
      return 0;
    }

    if (*c_entail) {
      Ontology o = load_ontology(in_path);
      Signature sig = signature_of(o);
      if (!targets_file.empty()) {
        std::istringstream lines(slurp(targets_file));
        std::string line;
        while (std::getline(lines, line)) {
          if (line.empty() || line[0] == '#') continue;
          targets.push_back(line);
        }
      }
      if (targets.empty()) throw StageError("ReasonStage", "no targets given");
      for (const std::string& t : targets) {
        EntailResult r = entails(o, parse_target(t, sig));
        std::cout << t << ": " << (r.entailed ? "entailed" : "not entailed")
                  << (r.ontology_unsatisfiable ? " (ontology unsatisfiable)" : "") << "\n";
      }
      return 0;
    }

    if (*c_chase) {
      Ontology o = load_ontology(in_path);
      ChasedAbox ch = chase(o, depth);
      for (const Assertion& a : ch.facts()) {
        std::string key = text_key(a);
        auto it = ch.provenance.find(key);
        std::cout << to_text(a);
        if (it != ch.provenance.end()) std::cout << "\t# " << it->second.rule;
        std::cout << "\n";
      }
      return 0;
    }

    if (*c_query) {
      Ontology o = load_ontology(in_path);
      auto q = parse_query(query_text);
      if (!q) throw StageError("ParseStage", "bad query: " + query_text);
      for (const auto& tuple : answer_query(o, *q, depth)) {
        std::cout << q->name << "(";
        for (std::size_t i = 0; i < tuple.size(); ++i)
          std::cout << (i ? ", " : "") << tuple[i];
        std::cout << ")\n";
      }
      return 0;
    }

    if (*c_gen) {
      Ontology o = load_ontology(in_path);
      Task task = task_from_name(task_opt);
      std::vector<TaskItem> items;
      try {
        switch (task) {
          case Task::Syntax:
            items.push_back(make_syntax_item(
                o, n_corrupt > 0 ? static_cast<std::size_t>(n_corrupt)
                                 : o.tbox().size() / 2, seed));
            break;
          case Task::Subsumption:
            items.push_back(make_subsumption_item(o, static_cast<std::size_t>(negatives), seed));
            break;
          case Task::Instance:
            items.push_back(make_instance_item(o, static_cast<std::size_t>(negatives), seed));
            break;
          case Task::ProbeInverse: {
            if (role.empty() || fresh_role.empty())
              throw StageError("ReasonStage", "--role and --fresh-role are required");
            auto [aug, imp] = build_inverse_probe(o, role, fresh_role, seed);
            TaskItem item;
            item.task = task;
            item.ontology = aug;
            item.statements = {to_text(imp)};
            item.gold = {true};
            item.generator = "probe-inverse";
            item.seed = seed;
            items.push_back(std::move(item));
            break;
          }
          case Task::ProbeFunctional: {
            if (role.empty()) throw StageError("ReasonStage", "--role is required");
            auto [aug, imp] = build_functional_probe(o, role, inverse, seed);
            TaskItem item;
            item.task = task;
            item.ontology = aug;
            item.statements = {to_text(imp)};
            item.gold = {true};
            item.generator = "probe-functional";
            item.seed = seed;
            items.push_back(std::move(item));
            break;
          }
          case Task::Query: {
            auto q = parse_query(query_text);
            if (!q) throw StageError("ParseStage", "bad query: " + query_text);
            items.push_back(make_query_item(o, *q, depth));
            break;
          }
          case Task::Satisfiability: {
            if (is_satisfiable(o).status == SatResult::Status::Unsatisfiable) {
              MisResult mis = extract_mis(o, seed);
              items.push_back(make_satisfiability_item(
                  ontology_from_statements(mis.subset, o.dialect())));
              items.push_back(make_satisfiability_item(
                  consistent_counterpart(mis, o.dialect(), seed)));
            } else {
              items.push_back(make_satisfiability_item(o));
            }
            break;
          }
        }
      } catch (const StageError&) {
        throw;
      } catch (const std::exception& e) {
        throw StageError("ReasonStage", e.what());
      }
      spit(out_path, to_jsonl(items));
      fs::path dir = fs::path(out_path).parent_path();
      if (!dir.empty())
        write_manifest(dir.string(), "gen-dataset",
                       {{"task", task_opt}, {"seed", seed}, {"input", digest_entry(in_path)},
                        {"out", out_path}});
      std::cout << items.size() << " item(s) written to " << out_path << "\n";
      return 0;
    }

    if (*c_prompts || *c_run) {
      std::vector<TaskItem> items = from_jsonl(slurp(items_path));
      TemplateStore store = TemplateStore::load(default_templates());
      auto spec_for = [&](const TaskItem& item) {
        PromptSpec spec;
        spec.task = item.task;
        spec.variant = variant_from_name(variant_name_opt);
        spec.require_reasons = reasons;
        spec.chunk_count = item.task == Task::Query ? chunks : 1;
        spec.mode = ascii ? TextMode::Ascii : TextMode::Unicode;
        return spec;
      };

      if (*c_prompts) {
        std::string out;
        for (std::size_t i = 0; i < items.size(); ++i) {
          json row = {{"item", i},
                      {"prompts", render_prompt(spec_for(items[i]), items[i], store)}};
          out += row.dump() + "\n";
        }
        spit(out_path, out);
        std::cout << items.size() << " prompt row(s) written to " << out_path << "\n";
        return 0;
      }

      // run-eval
      ModelConfig cfg;
      if (!model_config_path.empty())
        cfg = ModelConfig::from_json(json::parse(slurp(model_config_path)));
      if (cfg.model.empty()) cfg.model = "mock";
      std::shared_ptr<Backend> backend;
      if (!mock_path.empty()) {
        auto mock = std::make_shared<MockBackend>();
        json fixtures = json::parse(slurp(mock_path));
        for (auto it = fixtures.begin(); it != fixtures.end(); ++it)
          mock->fixtures[it.key()] = it.value().get<std::string>();
        backend = mock;
      }
      Gateway gw(cache_dir, offline, backend);
      std::vector<std::string> responses;
      try {
        for (TaskItem& item : items)
          responses.push_back(response_for_item(gw, cfg, render_prompt(spec_for(item), item, store)));
      } catch (const std::exception& e) {
        throw StageError("GatewayStage", e.what());
      }
      VerdictRules rules = keywords_path.empty()
                               ? VerdictRules::load(std::string(DLITE_DATA_DIR) +
                                                    "/verdict_keywords.json")
                               : VerdictRules::load(keywords_path);
      try {
        auto records = score_items(items, responses, dataset_name, cfg.model,
                                   variant_name_opt, rules);
        write_report(records, out_dir);
        for (const EvalRecord& r : records)
          std::cout << r.task << ": P=" << r.metrics.precision
                    << " R=" << r.metrics.recall << " F1=" << r.metrics.f1
                    << " deduction=" << r.metrics.deduction_rate << "\n";
      } catch (const std::exception& e) {
        throw StageError("ScoreStage", e.what());
      }
      write_manifest(out_dir, "run-eval",
                     {{"items", digest_entry(items_path)},
                      {"variant", variant_name_opt},
                      {"chunks", chunks},
                      {"reasons", reasons},
                      {"ascii", ascii},
                      {"dataset", dataset_name},
                      {"cache", cache_dir},
                      {"mock", mock_path},
                      {"keywords", keywords_path},
                      {"templates", default_templates()},
                      {"model", cfg.to_json()},
                      {"seed", seed},
                      {"items_path", items_path}});
      return 0;
    }

    if (*c_score) {
      std::vector<TaskItem> items = from_jsonl(slurp(items_path));
      std::vector<std::string> responses(items.size());
      std::istringstream lines(slurp(responses_path));
      std::string line;
      while (std::getline(lines, line)) {
        if (line.empty()) continue;
        json row = json::parse(line);
        std::size_t i = row.at("item").get<std::size_t>();
        if (i < responses.size()) responses[i] = row.at("response").get<std::string>();
      }
      VerdictRules rules = keywords_path.empty()
                               ? VerdictRules::load(std::string(DLITE_DATA_DIR) +
                                                    "/verdict_keywords.json")
                               : VerdictRules::load(keywords_path);
      auto records = score_items(items, responses, dataset_name, "recorded", "n/a", rules);
      write_report(records, out_dir);
      std::cout << "report written to " << out_dir << "\n";
      return 0;
    }

    if (*c_replay) {
      json m = json::parse(slurp(manifest_path));
      if (m.value("command", "") != "run-eval")
        throw StageError("ScoreStage", "manifest is not from run-eval");
      const json& c = m["config"];
      std::vector<std::string> args = {
          "dlite",      "run-eval",
          "--items",    c["items_path"].get<std::string>(),
          "--out",      fs::path(manifest_path).parent_path().string(),
          "--variant",  c["variant"].get<std::string>(),
          "--chunks",   std::to_string(c.value("chunks", 1)),
          "--cache",    c["cache"].get<std::string>(),
          "--dataset",  c["dataset"].get<std::string>(),
          "--offline"};
      if (c.value("reasons", false)) args.push_back("--reasons");
      if (c.value("ascii", false)) args.push_back("--ascii");
      if (!c.value("keywords", std::string{}).empty()) {
        args.push_back("--keywords");
        args.push_back(c["keywords"].get<std::string>());
      }
      std::vector<char*> argv2;
      for (std::string& a : args) argv2.push_back(a.data());
      return cli_main(static_cast<int>(argv2.size()), argv2.data());
    }
  } catch (const StageError& e) {
    std::cerr << "[" << e.stage << "] " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "[Error] " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int main(int argc, char** argv) { return cli_main(argc, argv); }
