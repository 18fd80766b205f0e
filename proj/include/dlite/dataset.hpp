#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "dlite/ast.hpp"
#include "dlite/parser.hpp"
#include "dlite/reasoner.hpp"
#include "dlite/rng.hpp"

namespace dlite {

enum class Task {
  Syntax,
  Subsumption,
  Instance,
  ProbeInverse,
  ProbeFunctional,
  Query,
  Satisfiability,
};

const char* task_name(Task t);
Task task_from_name(const std::string& name);

/// One evaluation unit: an ontology plus statements to judge. For binary
/// tasks `gold` pairs with `statements`; for query tasks `gold_answers`
/// holds the expected tuples and `gold` is unused; for satisfiability
/// `gold` holds a single verdict.
struct TaskItem {
  Task task = Task::Syntax;
  Ontology ontology;
  std::vector<std::string> statements;
  std::vector<bool> gold;
  std::vector<std::vector<std::string>> gold_answers;
  std::string generator;  // provenance: which builder produced the item
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
  static TaskItem from_json(const nlohmann::json& j);
};

std::string to_jsonl(const std::vector<TaskItem>& items);
std::vector<TaskItem> from_jsonl(const std::string& text);

struct UnsatisfiableOntology : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoAssertionForRole : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RoleNotFunctional : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OntologySatisfiable : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SampleTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Derived TBox inclusions: the closure minus asserted axioms and reflexive
/// members; deterministic (text) order.
std::vector<Implication> extract_tbox_implications(const Ontology& o);

/// Derived ABox facts about named individuals from a depth-1 chase, minus
/// asserted facts, plus an ExistsFiller per memoized witness.
std::vector<Implication> extract_abox_implications(const Ontology& o);

/// Adds fresh_role ⊑ role⁻ and role⁻ ⊑ fresh_role, picks one asserted
/// role(a, b) and returns the augmented ontology with fresh_role(b, a).
std::pair<Ontology, Implication> build_inverse_probe(const Ontology& o,
                                                     const std::string& role,
                                                     const std::string& fresh_role_name,
                                                     std::uint64_t seed);

/// For a declared (funct R) — or (funct R⁻) when `inverse` — picks an
/// asserted R(a, b), adds the same-subject assertion with a placeholder in
/// the co-argument, and returns the forced identity as a PlaceholderEq.
std::pair<Ontology, Implication> build_functional_probe(const Ontology& o,
                                                        const std::string& role,
                                                        bool inverse,
                                                        std::uint64_t seed);

struct MisResult {
  std::vector<Statement> subset;  // unsatisfiable; minimal under removal
  std::string parent;             // digest of the source ontology
};

Ontology ontology_from_statements(const std::vector<Statement>& stmts, Dialect d);
std::string ontology_digest(const Ontology& o);

/// Deletion-based minimal inconsistent subset, elements visited in seeded
/// random order.
MisResult extract_mis(const Ontology& o, std::uint64_t seed);

/// Drops one seeded-random element of the MIS; satisfiable by minimality.
Ontology consistent_counterpart(const MisResult& mis, Dialect d, std::uint64_t seed);

/// Uniform without-replacement sample preserving the input order.
template <typename T>
std::vector<T> sample_subset(const std::vector<T>& items, std::size_t n, std::uint64_t seed);

/// Non-entailed perturbations (swapped sides, swapped individuals, negated
/// rhs) of true implications, for gold=false statements.
std::vector<Implication> generate_negatives(const Ontology& o,
                                            const std::vector<Implication>& positives,
                                            std::size_t max_count,
                                            std::uint64_t seed);

// Task item builders. Gold values are reasoner-verified before emission.
TaskItem make_syntax_item(const Ontology& o, std::size_t n_corrupt, std::uint64_t seed);
TaskItem make_subsumption_item(const Ontology& o, std::size_t max_negatives, std::uint64_t seed);
TaskItem make_instance_item(const Ontology& o, std::size_t max_negatives, std::uint64_t seed);
TaskItem make_satisfiability_item(const Ontology& o);
TaskItem make_query_item(const Ontology& o, const ConjunctiveQuery& q, int chase_depth = 3);

// ---------------------------------------------------------------------------

template <typename T>
std::vector<T> sample_subset(const std::vector<T>& items, std::size_t n, std::uint64_t seed) {
  if (n > items.size()) throw SampleTooLarge("sample size exceeds population");
  std::vector<std::size_t> idx(items.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  Rng rng(seed);
  rng.shuffle(idx);
  idx.resize(n);
  std::sort(idx.begin(), idx.end());
  std::vector<T> out;
  out.reserve(n);
  for (std::size_t i : idx) out.push_back(items[i]);
  return out;
}

}  // namespace dlite
