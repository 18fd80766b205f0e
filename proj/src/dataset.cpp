#include "dlite/dataset.hpp"

#include <map>
#include <set>
#include <sstream>

#include "dlite/digest.hpp"
#include "dlite/oracle.hpp"

namespace dlite {

namespace {

using nlohmann::json;

std::string ontology_text(const Ontology& o, TextMode mode) {
  std::string out;
  for (const Axiom& ax : o.tbox()) out += to_text(ax, mode) + "\n";
  for (const Assertion& as : o.abox()) out += to_text(as, mode) + "\n";
  return out;
}

Dialect widen_for_role_incl(Dialect d) {
  if (d == Dialect::Core) return Dialect::R;
  if (d == Dialect::F) return Dialect::FR;
  return d;
}

bool is_reflexive(const Axiom& ax) {
  if (const auto* ci = std::get_if<ConceptIncl>(&ax))
    return ci->rhs.kind == GeneralConcept::Kind::Basic && ci->rhs.basic == ci->lhs;
  if (const auto* ri = std::get_if<RoleIncl>(&ax))
    return !ri->rhs.negated && ri->rhs.role == ri->lhs;
  return false;
}

// Self-negations (B ⊑ ¬B, R ⊑ ¬R) derived by the closure carry content (the
// lhs is empty / the role irreflexive-and-empty) and are kept; only the ones
// whose sole support is a reflexive seed would be trivial, and the closure
// never produces those.

std::vector<RoleAssert> assertions_of_role(const Ontology& o, const std::string& role) {
  std::vector<RoleAssert> out;
  for (const Assertion& as : o.abox())
    if (const auto* ra = std::get_if<RoleAssert>(&as))
      if (ra->role_name == role) out.push_back(*ra);
  return out;
}

}  // namespace

const char* task_name(Task t) {
  switch (t) {
    case Task::Syntax: return "syntax";
    case Task::Subsumption: return "subsumption";
    case Task::Instance: return "instance";
    case Task::ProbeInverse: return "probe_inverse";
    case Task::ProbeFunctional: return "probe_functional";
    case Task::Query: return "query";
    case Task::Satisfiability: return "satisfiability";
  }
  return "syntax";
}

Task task_from_name(const std::string& name) {
  for (Task t : {Task::Syntax, Task::Subsumption, Task::Instance, Task::ProbeInverse,
                 Task::ProbeFunctional, Task::Query, Task::Satisfiability})
    if (name == task_name(t)) return t;
  throw std::invalid_argument("unknown task name: " + name);
}

json TaskItem::to_json() const {
  json j;
  j["task"] = task_name(task);
  j["ontology"] = ontology_text(ontology, TextMode::Unicode);
  Signature sig = signature_of(ontology);
  j["signature"] = {{"concepts", sig.concepts},
                    {"roles", sig.roles},
                    {"individuals", sig.individuals}};
  j["statements"] = statements;
  j["gold"] = gold;
  j["gold_answers"] = gold_answers;
  j["generator"] = generator;
  j["seed"] = seed;
  return j;
}

TaskItem TaskItem::from_json(const json& j) {
  TaskItem item;
  item.task = task_from_name(j.at("task").get<std::string>());
  Signature seed_sig;
  if (j.contains("signature")) {
    const json& s = j["signature"];
    for (const auto& c : s.value("concepts", std::vector<std::string>{})) seed_sig.concepts.insert(c);
    for (const auto& r : s.value("roles", std::vector<std::string>{})) seed_sig.roles.insert(r);
    for (const auto& i : s.value("individuals", std::vector<std::string>{})) seed_sig.individuals.insert(i);
  }
  auto parsed = parse_ontology(j.at("ontology").get<std::string>(), /*strict=*/true, &seed_sig);
  item.ontology = std::move(parsed.ontology);
  item.statements = j.value("statements", std::vector<std::string>{});
  item.gold = j.value("gold", std::vector<bool>{});
  item.gold_answers = j.value("gold_answers", std::vector<std::vector<std::string>>{});
  item.generator = j.value("generator", std::string{});
  item.seed = j.value("seed", std::uint64_t{0});
  return item;
}

std::string to_jsonl(const std::vector<TaskItem>& items) {
  std::string out;
  for (const TaskItem& item : items) out += item.to_json().dump() + "\n";
  return out;
}

std::vector<TaskItem> from_jsonl(const std::string& text) {
  std::vector<TaskItem> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(TaskItem::from_json(json::parse(line)));
  }
  return out;
}

std::vector<Implication> extract_tbox_implications(const Ontology& o) {
  ClosureSet cs = tbox_closure(o);
  std::set<std::string> asserted;
  for (const Axiom& ax : normalize(o.tbox())) asserted.insert(text_key(ax));
  std::map<std::string, Axiom> keep;  // text-keyed for deterministic order
  for (const Axiom& ax : cs.axioms()) {
    if (std::holds_alternative<FunctAxiom>(ax)) continue;
    if (is_reflexive(ax)) continue;
    std::string key = text_key(ax);
    if (asserted.count(key)) continue;
    keep.emplace(std::move(key), ax);
  }
  std::vector<Implication> out;
  out.reserve(keep.size());
  for (auto& [key, ax] : keep) out.emplace_back(ax);
  return out;
}

std::vector<Implication> extract_abox_implications(const Ontology& o) {
  SatResult sat = is_satisfiable(o);
  if (sat.status == SatResult::Status::Unsatisfiable)
    throw UnsatisfiableOntology("every assertion is trivially implied");
  ChasedAbox ch = chase(o, 1);
  std::set<std::string> asserted;
  for (const Assertion& as : o.abox()) asserted.insert(text_key(as));
  std::map<std::string, Implication> keep;
  auto add = [&](Implication imp) {
    keep.emplace(to_text(imp, TextMode::Ascii), std::move(imp));
  };
  for (const auto& [c, e] : ch.concept_facts) {
    if (!ch.is_named(e)) continue;
    Assertion as = ConceptAssert{c, e};
    if (!asserted.count(text_key(as))) add(as);
  }
  for (const auto& [r, s, t] : ch.role_facts) {
    bool sn = ch.is_named(s), tn = ch.is_named(t);
    if (sn && tn) {
      Assertion as = RoleAssert{r, s, t};
      if (!asserted.count(text_key(as))) add(as);
    } else if (sn && !tn) {
      add(ExistsFiller{s, Role{r, false}});
    } else if (!sn && tn) {
      add(ExistsFiller{t, Role{r, true}});
    }
  }
  std::vector<Implication> out;
  out.reserve(keep.size());
  for (auto& [key, imp] : keep) out.push_back(imp);
  return out;
}

std::pair<Ontology, Implication> build_inverse_probe(const Ontology& o,
                                                     const std::string& role,
                                                     const std::string& fresh_role_name,
                                                     std::uint64_t seed) {
  std::vector<RoleAssert> asserts = assertions_of_role(o, role);
  if (asserts.empty()) throw NoAssertionForRole("no assertion for role " + role);
  Ontology aug(widen_for_role_incl(o.dialect()));
  for (const Axiom& ax : o.tbox()) aug.add(ax);
  for (const Assertion& as : o.abox()) aug.add(as);
  aug.add(RoleIncl{Role{fresh_role_name, false}, GeneralRole{Role{role, true}, false}});
  aug.add(RoleIncl{Role{role, true}, GeneralRole{Role{fresh_role_name, false}, false}});
  Rng rng(seed);
  const RoleAssert& ra = rng.pick(asserts);
  Implication imp = Assertion{RoleAssert{fresh_role_name, ra.object, ra.subject}};
  if (!entails_assertion(aug, imp).entailed)
    throw std::logic_error("inverse probe implication not entailed");
  return {std::move(aug), std::move(imp)};
}

std::pair<Ontology, Implication> build_functional_probe(const Ontology& o,
                                                        const std::string& role,
                                                        bool inverse,
                                                        std::uint64_t seed) {
  Role target{role, inverse};
  bool declared = false;
  for (const Axiom& ax : o.tbox())
    if (const auto* f = std::get_if<FunctAxiom>(&ax))
      if (f->role == target) declared = true;
  if (!declared)
    throw RoleNotFunctional("(funct " + to_text(target, TextMode::Ascii) + ") not declared");
  std::vector<RoleAssert> asserts = assertions_of_role(o, role);
  if (asserts.empty()) throw NoAssertionForRole("no assertion for role " + role);
  Rng rng(seed);
  const RoleAssert& ra = rng.pick(asserts);
  std::string x = fresh_placeholder(signature_of(o));
  Ontology aug = o;
  Implication imp;
  if (!inverse) {
    aug.add(Assertion{RoleAssert{role, ra.subject, x}});
    imp = PlaceholderEq{x, ra.object, target};
  } else {
    aug.add(Assertion{RoleAssert{role, x, ra.object}});
    imp = PlaceholderEq{x, ra.subject, target};
  }
  if (!entails_assertion(aug, imp).entailed)
    throw std::logic_error("functional probe implication not entailed");
  return {std::move(aug), std::move(imp)};
}

Ontology ontology_from_statements(const std::vector<Statement>& stmts, Dialect d) {
  Ontology o(d);
  for (const Statement& s : stmts)
    std::visit([&](const auto& v) { o.add(v); }, s);
  return o;
}

std::string ontology_digest(const Ontology& o) {
  return hex_digest(ontology_text(o, TextMode::Ascii));
}

MisResult extract_mis(const Ontology& o, std::uint64_t seed) {
  if (is_satisfiable(o).status != SatResult::Status::Unsatisfiable)
    throw OntologySatisfiable("MIS extraction needs an unsatisfiable ontology");
  std::vector<Statement> elems;
  for (const Axiom& ax : o.tbox()) elems.emplace_back(ax);
  for (const Assertion& as : o.abox()) elems.emplace_back(as);
  std::vector<std::size_t> order(elems.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);
  std::vector<bool> kept(elems.size(), true);
  auto unsat_without = [&](std::size_t skip) {
    std::vector<Statement> trial;
    for (std::size_t i = 0; i < elems.size(); ++i)
      if (kept[i] && i != skip) trial.push_back(elems[i]);
    Ontology t = ontology_from_statements(trial, o.dialect());
    return is_satisfiable(t).status == SatResult::Status::Unsatisfiable;
  };
  for (std::size_t i : order)
    if (unsat_without(i)) kept[i] = false;
  MisResult mis;
  mis.parent = ontology_digest(o);
  for (std::size_t i = 0; i < elems.size(); ++i)
    if (kept[i]) mis.subset.push_back(elems[i]);
  return mis;
}

Ontology consistent_counterpart(const MisResult& mis, Dialect d, std::uint64_t seed) {
  Rng rng(seed);
  std::size_t drop = static_cast<std::size_t>(rng.below(mis.subset.size()));
  std::vector<Statement> rest;
  for (std::size_t i = 0; i < mis.subset.size(); ++i)
    if (i != drop) rest.push_back(mis.subset[i]);
  Ontology out = ontology_from_statements(rest, d);
  if (!is_satisfiable(out).ok())
    throw std::logic_error("counterpart of a minimal subset must be satisfiable");
  return out;
}

std::vector<Implication> generate_negatives(const Ontology& o,
                                            const std::vector<Implication>& positives,
                                            std::size_t max_count,
                                            std::uint64_t seed) {
  Signature sig = signature_of(o);
  std::vector<std::string> inds(sig.individuals.begin(), sig.individuals.end());
  Rng rng(seed);
  auto other_ind = [&](const std::string& not_this) -> std::optional<std::string> {
    std::vector<std::string> pool;
    for (const std::string& i : inds)
      if (i != not_this) pool.push_back(i);
    if (pool.empty()) return std::nullopt;
    return rng.pick(pool);
  };

  std::vector<Implication> candidates;
  for (const Implication& imp : positives) {
    if (const auto* ax = std::get_if<Axiom>(&imp)) {
      if (const auto* ci = std::get_if<ConceptIncl>(ax)) {
        if (ci->rhs.kind == GeneralConcept::Kind::Basic && !(ci->rhs.basic == ci->lhs))
          candidates.emplace_back(Axiom{ConceptIncl{ci->rhs.basic, GeneralConcept::pos(ci->lhs)}});
        if (ci->rhs.kind == GeneralConcept::Kind::Basic)
          candidates.emplace_back(Axiom{ConceptIncl{ci->lhs, GeneralConcept::neg(ci->rhs.basic)}});
        else if (ci->rhs.kind == GeneralConcept::Kind::Neg)
          candidates.emplace_back(Axiom{ConceptIncl{ci->lhs, GeneralConcept::pos(ci->rhs.basic)}});
      } else if (const auto* ri = std::get_if<RoleIncl>(ax)) {
        if (!ri->rhs.negated && !(ri->rhs.role == ri->lhs))
          candidates.emplace_back(Axiom{RoleIncl{ri->rhs.role, GeneralRole{ri->lhs, false}}});
        candidates.emplace_back(Axiom{RoleIncl{ri->lhs, GeneralRole{ri->rhs.role, !ri->rhs.negated}}});
      }
    } else if (const auto* as = std::get_if<Assertion>(&imp)) {
      if (const auto* ca = std::get_if<ConceptAssert>(as)) {
        if (auto alt = other_ind(ca->individual))
          candidates.emplace_back(Assertion{ConceptAssert{ca->concept_name, *alt}});
      } else if (const auto* ra = std::get_if<RoleAssert>(as)) {
        if (ra->subject != ra->object)
          candidates.emplace_back(Assertion{RoleAssert{ra->role_name, ra->object, ra->subject}});
        if (auto alt = other_ind(ra->object))
          candidates.emplace_back(Assertion{RoleAssert{ra->role_name, ra->subject, *alt}});
      }
    } else if (const auto* ef = std::get_if<ExistsFiller>(&imp)) {
      if (auto alt = other_ind(ef->individual))
        candidates.emplace_back(ExistsFiller{*alt, ef->role});
    }
  }
  rng.shuffle(candidates);

  std::set<std::string> seen;
  std::vector<Implication> out;
  for (const Implication& cand : candidates) {
    if (out.size() >= max_count) break;
    std::string key = to_text(cand, TextMode::Ascii);
    if (!seen.insert(key).second) continue;
    if (entails(o, cand).entailed) continue;  // accidental truth
    out.push_back(cand);
  }
  return out;
}

TaskItem make_syntax_item(const Ontology& o, std::size_t n_corrupt, std::uint64_t seed) {
  TaskItem item;
  item.task = Task::Syntax;
  item.ontology = o;
  item.generator = "syntax-corrupt";
  item.seed = seed;
  const std::vector<Axiom>& tbox = o.tbox();
  n_corrupt = std::min(n_corrupt, tbox.size());
  std::vector<std::size_t> idx(tbox.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  Rng rng(seed);
  rng.shuffle(idx);
  std::set<std::size_t> to_corrupt(idx.begin(), idx.begin() + static_cast<long>(n_corrupt));
  Signature sig = signature_of(o);
  for (std::size_t i = 0; i < tbox.size(); ++i) {
    bool corrupted = false;
    std::string text = to_text(tbox[i], TextMode::Unicode);
    if (to_corrupt.count(i)) {
      if (auto c = corrupt_random(tbox[i], rng.next())) {
        text = c->text;
        corrupted = true;
      }
    }
    if (parse_axiom(text, &sig).is_ok() == corrupted)
      throw std::logic_error("syntax gold verification failed: " + text);
    item.statements.push_back(text);
    item.gold.push_back(!corrupted);
  }
  return item;
}

namespace {

TaskItem make_binary_item(Task task, const char* generator, const Ontology& o,
                          std::vector<Implication> positives, std::size_t max_negatives,
                          std::uint64_t seed) {
  TaskItem item;
  item.task = task;
  item.ontology = o;
  item.generator = generator;
  item.seed = seed;
  Rng rng(seed);
  std::vector<Implication> negatives =
      generate_negatives(o, positives, max_negatives, rng.next());
  std::vector<std::pair<Implication, bool>> rows;
  for (Implication& p : positives) rows.emplace_back(std::move(p), true);
  for (Implication& n : negatives) rows.emplace_back(std::move(n), false);
  rng.shuffle(rows);
  for (auto& [imp, gold] : rows) {
    if (entails(o, imp).entailed != gold)
      throw std::logic_error("gold verification failed: " + to_text(imp, TextMode::Ascii));
    item.statements.push_back(to_text(imp, TextMode::Unicode));
    item.gold.push_back(gold);
  }
  return item;
}

}  // namespace

TaskItem make_subsumption_item(const Ontology& o, std::size_t max_negatives, std::uint64_t seed) {
  return make_binary_item(Task::Subsumption, "subsumption-closure", o,
                          extract_tbox_implications(o), max_negatives, seed);
}

TaskItem make_instance_item(const Ontology& o, std::size_t max_negatives, std::uint64_t seed) {
  return make_binary_item(Task::Instance, "instance-chase", o,
                          extract_abox_implications(o), max_negatives, seed);
}

TaskItem make_satisfiability_item(const Ontology& o) {
  TaskItem item;
  item.task = Task::Satisfiability;
  item.ontology = o;
  item.generator = "satisfiability";
  item.gold.push_back(is_satisfiable(o).ok());
  return item;
}

TaskItem make_query_item(const Ontology& o, const ConjunctiveQuery& q, int chase_depth) {
  TaskItem item;
  item.task = Task::Query;
  item.ontology = o;
  item.generator = "query";
  item.statements.push_back(to_text(q));
  item.gold_answers = answer_query(o, q, chase_depth);
  return item;
}

}  // namespace dlite
