#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <stdexcept>
#include <tuple>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "dlite/ast.hpp"

namespace dlite {

// How a closure member was obtained. Rule ids: PI1 PI2 NI1..NI11 for derived
// inclusions, ABX1..ABX5 for chase facts, "input" for asserted statements and
// "refl" for the reflexive seeds.
struct Derivation {
  std::string rule;
  std::vector<Axiom> premises;
};

class ClosureSet {
 public:
  // returns false if the axiom was already present
  bool insert(const Axiom& ax, Derivation d);
  bool contains(const Axiom& ax) const;
  const std::vector<Axiom>& axioms() const { return axioms_; }
  const Derivation* derivation_of(const Axiom& ax) const;
  std::size_t size() const { return axioms_.size(); }

 private:
  std::vector<Axiom> axioms_;
  std::map<std::string, Derivation> derivs_;
};

ClosureSet tbox_closure(const Ontology& o);  // PI and NI members together
ClosureSet pi_closure(const Ontology& o);    // positive inclusions + reflexives
ClosureSet ni_closure(const Ontology& o);    // negative inclusions

// Derivation chain for a closure member, innermost premises first. Each entry
// is {rule, conclusion, premises}.
nlohmann::json derivation_chain(const ClosureSet& cs, const Axiom& ax);
nlohmann::json derivations_json(const ClosureSet& cs);

// ---------------------------------------------------------------------------
// Bounded restricted chase.

struct FactProvenance {
  std::string rule;                   // ABX1..ABX5 or "input"
  std::optional<Axiom> axiom;         // TBox premise, absent for inputs
  std::vector<std::string> premises;  // fact keys (serialized assertions)
};

class ChasedAbox {
 public:
  // (concept name, element)
  std::set<std::pair<std::string, std::string>> concept_facts;
  // (role name, subject, object) with the role name never inverted
  std::set<std::tuple<std::string, std::string, std::string>> role_facts;
  std::set<std::string> fresh;        // anonymous witnesses
  std::map<std::string, int> generation;  // 0 for named individuals
  std::map<std::string, FactProvenance> provenance;  // keyed by fact text
  int depth = 0;

  bool has_concept(const std::string& c, const std::string& e) const;
  bool has_edge(const Role& r, const std::string& a, const std::string& b) const;
  bool holds(const Concept& b, const std::string& e) const;  // basic concept
  std::vector<std::string> successors(const Role& r, const std::string& a) const;
  std::vector<std::string> elements() const;
  std::vector<Assertion> facts() const;
  bool is_named(const std::string& e) const { return fresh.count(e) == 0; }
};

ChasedAbox chase(const Ontology& o, int max_fresh_depth = 1);

// ---------------------------------------------------------------------------
// Reasoning services.

// A statement whose entailment can be asked about.
struct ExistsFiller {
  std::string individual;
  Role role;
};
struct PlaceholderEq {
  std::string placeholder;  // UNA-exempt constant
  std::string named;
  Role via;  // the functional role both fill (placeholder/named in object slot)
};
using Implication = std::variant<Axiom, Assertion, ExistsFiller, PlaceholderEq>;

std::string to_text(const Implication& imp, TextMode mode = TextMode::Unicode);

struct Violation {
  Axiom axiom;                       // the NI or Funct axiom violated
  std::vector<Assertion> offending;  // chase facts realizing the clash
};

struct SatResult {
  enum class Status { Satisfiable, Unsatisfiable, DialectRejected };
  Status status = Status::Satisfiable;
  std::optional<Violation> violation;
  std::string note;
  bool ok() const { return status == Status::Satisfiable; }
};

SatResult is_satisfiable(const Ontology& o);

struct EntailResult {
  bool entailed = false;
  bool ontology_unsatisfiable = false;  // entailment is then trivial
  nlohmann::json derivation;            // chain, empty when not entailed
};

EntailResult entails_inclusion(const Ontology& o, const Axiom& target);
EntailResult entails_assertion(const Ontology& o, const Implication& target,
                               int chase_depth = 1);
bool entails_functionality(const Ontology& o, const Role& r);
EntailResult entails(const Ontology& o, const Implication& target);

// ---------------------------------------------------------------------------
// Conjunctive queries.

struct QueryAtom {
  std::string pred;
  std::vector<std::string> args;  // one or two terms
};

struct ConjunctiveQuery {
  std::string name;
  std::vector<std::string> head_vars;
  std::vector<QueryAtom> body;
};

// text format: Q1(x, y) <- Student(x), TeachesTo(x, y)
std::optional<ConjunctiveQuery> parse_query(const std::string& text);
std::string to_text(const ConjunctiveQuery& q);

struct UnsafeQuery : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::vector<std::string>> answer_query(const Ontology& o,
                                                   const ConjunctiveQuery& q,
                                                   int chase_depth = 3);

}  // namespace dlite
